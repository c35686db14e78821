#pragma once

#include <vector>

#include "d4dr/diffpoly.hpp"

namespace d4dr {

// Finite differential operator sum_k a_k d^k in plain calculus: composition
// uses the ordinary Leibniz rule with no formal parameter attached to
// derivatives (eps may still appear inside coefficients as a constant).
class DiffOp {
 public:
  DiffOp() = default;

  static DiffOp dx(int k);                           // d^k, k >= 0
  static DiffOp mult(const DiffPoly& f);             // f d^0
  static DiffOp monomial_op(const DiffPoly& f, int k);

  bool is_zero() const { return c_.empty(); }
  int order() const { return int(c_.size()) - 1; }  // -1 when zero
  const DiffPoly& coeff(int k) const;

  DiffOp operator-() const;
  DiffOp& operator+=(const DiffOp& o);
  DiffOp& operator-=(const DiffOp& o);
  friend DiffOp operator+(DiffOp a, const DiffOp& b) { return a += b; }
  friend DiffOp operator-(DiffOp a, const DiffOp& b) { return a -= b; }
  friend DiffOp operator*(const DiffOp& a, const DiffOp& b);  // composition
  DiffOp operator*(const Scalar& s) const;
  bool operator==(const DiffOp& o) const { return c_ == o.c_; }
  bool operator!=(const DiffOp& o) const { return !(*this == o); }

  DiffPoly apply(const DiffPoly& f) const;  // sum a_k d_x^k(f)
  DiffOp adjoint() const;                   // sum (-d)^k . a_k

  std::string str() const;

 private:
  std::vector<DiffPoly> c_;  // c_[k] = coefficient of d^k
  void trim();
};

// square matrix of operators acting on a field multiplet
using DiffOpMatrix = std::vector<std::vector<DiffOp>>;

DiffOpMatrix zero_matrix(size_t dim);
// entrywise adjoint-transpose: (M+)^{ab} = (M^{ba})*
DiffOpMatrix adjoint_transpose(const DiffOpMatrix& m);
bool matrix_equal(const DiffOpMatrix& a, const DiffOpMatrix& b);

}  // namespace d4dr
