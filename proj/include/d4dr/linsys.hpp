#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "d4dr/scalar.hpp"

namespace d4dr {

// Sparse exact linear system A x = b over Q(i, sqrt2).
class LinearSystem {
 public:
  struct Row {
    std::vector<std::pair<size_t, Scalar>> a;  // (column, value), sorted
    Scalar rhs;
  };

  explicit LinearSystem(size_t ncols) : ncols_(ncols) {}

  size_t ncols() const { return ncols_; }
  size_t nrows() const { return rows_.size(); }
  const std::vector<Row>& rows() const { return rows_; }

  void add_row(std::vector<std::pair<size_t, Scalar>> entries, Scalar rhs);

 private:
  size_t ncols_;
  std::vector<Row> rows_;
};

struct LinearSolution {
  bool consistent = false;
  size_t rank = 0;
  std::vector<Scalar> particular;                // free unknowns set to 0
  std::vector<std::vector<Scalar>> nullspace;    // one basis vector per free unknown
  size_t nullity() const { return nullspace.size(); }
};

// Exact Gaussian elimination. Pivot column: largest support among active
// rows, ties broken by lowest unknown index; rows reduced to lowest terms
// after each elimination step.
LinearSolution solve(const LinearSystem& sys);

}  // namespace d4dr
