#include "doctest.h"

#include <vector>

#include "d4dr/linsys.hpp"

using namespace d4dr;

namespace {

Scalar dot_row(const LinearSystem::Row& row, const std::vector<Scalar>& x) {
  Scalar acc(0);
  for (const auto& [col, val] : row.a) acc += val * x[col];
  return acc;
}

}  // namespace

TEST_CASE("unique solution over the extension field") {
  // (1+i) x + sqrt2 y = 3,  i x - y = sqrt2
  LinearSystem sys(2);
  sys.add_row({{0, Scalar(1) + Scalar::i()}, {1, Scalar::sqrt2()}}, Scalar(3));
  sys.add_row({{0, Scalar::i()}, {1, Scalar(-1)}}, Scalar::sqrt2());
  LinearSolution sol = solve(sys);
  REQUIRE(sol.consistent);
  CHECK(sol.rank == 2);
  CHECK(sol.nullity() == 0);
  for (const auto& row : sys.rows()) CHECK(dot_row(row, sol.particular) == row.rhs);
}

TEST_CASE("inconsistent system") {
  LinearSystem sys(1);
  sys.add_row({{0, Scalar(1)}}, Scalar(1));
  sys.add_row({{0, Scalar(2)}}, Scalar(3));
  CHECK(!solve(sys).consistent);
}

TEST_CASE("underdetermined system reports a nullspace") {
  // x + y + z = 1 repeated, plus y - z = 0
  LinearSystem sys(3);
  sys.add_row({{0, Scalar(1)}, {1, Scalar(1)}, {2, Scalar(1)}}, Scalar(1));
  sys.add_row({{0, Scalar(2)}, {1, Scalar(2)}, {2, Scalar(2)}}, Scalar(2));
  sys.add_row({{1, Scalar(1)}, {2, Scalar(-1)}}, Scalar(0));
  LinearSolution sol = solve(sys);
  REQUIRE(sol.consistent);
  CHECK(sol.rank == 2);
  REQUIRE(sol.nullity() == 1);
  for (const auto& row : sys.rows()) {
    CHECK(dot_row(row, sol.particular) == row.rhs);
    CHECK(dot_row(row, sol.nullspace[0]).is_zero());
  }
  // the nullspace direction is nontrivial
  bool nontrivial = false;
  for (const Scalar& c : sol.nullspace[0]) nontrivial = nontrivial || !c.is_zero();
  CHECK(nontrivial);
}

TEST_CASE("empty and zero-row systems") {
  LinearSystem sys(2);
  LinearSolution sol = solve(sys);
  REQUIRE(sol.consistent);
  CHECK(sol.rank == 0);
  CHECK(sol.nullity() == 2);

  sys.add_row({}, Scalar(0));
  CHECK(solve(sys).consistent);
  sys.add_row({}, Scalar(1));
  CHECK(!solve(sys).consistent);
}

TEST_CASE("structured 6x6 system with known solution") {
  // A x* = b with x* fixed in advance; A diagonally dominant, so invertible
  size_t n = 6;
  std::vector<Scalar> xs;
  for (size_t k = 0; k < n; ++k)
    xs.push_back(Scalar::rational(long(k) + 1, 3) +
                 Scalar::i() * Scalar(long(k % 2)));
  LinearSystem sys(n);
  for (size_t r = 0; r < n; ++r) {
    std::vector<std::pair<size_t, Scalar>> row;
    Scalar rhs(0);
    for (size_t c = 0; c < n; ++c) {
      Scalar a = (r == c) ? Scalar(10) : Scalar::rational(1, long(r + c + 1));
      row.push_back({c, a});
      rhs += a * xs[c];
    }
    sys.add_row(std::move(row), rhs);
  }
  LinearSolution sol = solve(sys);
  REQUIRE(sol.consistent);
  CHECK(sol.rank == n);
  CHECK(sol.nullity() == 0);
  for (size_t k = 0; k < n; ++k) CHECK(sol.particular[k] == xs[k]);
}
