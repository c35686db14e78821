#include "doctest.h"

#include <map>

#include "d4dr/ds_d4.hpp"
#include "d4dr/reduction.hpp"

using namespace d4dr;

namespace {

DiffPoly vv(int idx, int order = 0) { return DiffPoly::var(Alphabet::v, idx, order); }
DiffPoly ut(int idx, int order = 0) { return DiffPoly::var(Alphabet::ut, idx, order); }

std::vector<std::pair<Alphabet, int>> v_fields() {
  return {{Alphabet::v, 1}, {Alphabet::v, 2}, {Alphabet::v, 3},
          {Alphabet::rho, 1}};
}

struct Setup {
  LaxPair lp;
  RootCache rc;
  NormalCoordinates nc;
  std::map<std::pair<int, int>, DiffPoly> hs;  // s alphabet
  Setup() : lp(build_lax()), rc(sixth_root(lp, -11)) {
    nc = normal_coordinates(lp, rc);
    hs = tau_densities_s(lp, rc, nc, false);
  }
  DiffPoly h_v(int a, int p) const { return lp.s_in_v.apply(hs.at({a, p})); }
};

Setup& setup() {
  static Setup s;
  return s;
}

}  // namespace

TEST_CASE("eps division") {
  DiffPoly f = vv(1) * vv(2, 1);
  CHECK(divide_eps(DiffPoly::eps(1) * f) == f);
  CHECK(divide_eps(DiffPoly::eps(3)) == DiffPoly::eps(2));
  CHECK_THROWS(divide_eps(vv(1)));
}

TEST_CASE("both structures are antisymmetric on integrals") {
  const LaxPair& lp = setup().lp;
  DiffPoly f = vv(1) * vv(3);
  DiffPoly g = vv(2) + DiffPoly::rho() * DiffPoly::rho() * vv(1);
  for (int which : {1, 2}) {
    CAPTURE(which);
    DiffPoly sum = bracket_ds(f, g, which, lp) + bracket_ds(g, f, which, lp);
    CHECK(laurent_functional_is_zero(sum, v_fields()));
  }
  CHECK_THROWS_AS(bracket_ds(f, g, 3, lp), structure_error);
}

TEST_CASE("bracket of a density with itself integrates to zero") {
  const LaxPair& lp = setup().lp;
  DiffPoly f = vv(2) * vv(2) + DiffPoly::rho() * vv(3);
  for (int which : {1, 2})
    CHECK(laurent_functional_is_zero(bracket_ds(f, f, which, lp), v_fields()));
}

TEST_CASE("the two structures are tied by the level shift at the fourth label") {
  Setup& s = setup();
  DiffPoly probe = vv(3);
  DiffPoly lhs = bracket_ds(probe, s.h_v(4, 0), 1, s.lp);
  DiffPoly rhs = bracket_ds(probe, s.h_v(4, -1), 2, s.lp) * Scalar(2);
  CHECK(laurent_functional_is_zero(lhs - rhs, v_fields()));
}

TEST_CASE("coordinate integrals are casimirs of the first structure") {
  // the hierarchy recursion is seeded by the level -1 integrals, which the
  // first structure must annihilate; the coordinates are their raisings
  Setup& s = setup();
  DiffPoly f = vv(1) * vv(2) + DiffPoly::rho() * vv(3, 1);
  for (int a = 1; a <= 4; ++a) {
    CAPTURE(a);
    DiffPoly g = s.nc.ut_of_v[size_t(a - 1)];
    CHECK(laurent_functional_is_zero(bracket_ds(f, g, 1, s.lp), v_fields()));
  }
}

TEST_CASE("level-zero integrals commute") {
  Setup& s = setup();
  DiffPoly h10 = s.h_v(1, 0);
  DiffPoly h20 = s.h_v(2, 0);
  CHECK(laurent_functional_is_zero(bracket_ds(h10, h20, 1, s.lp), v_fields()));
  CHECK(laurent_functional_is_zero(bracket_ds(h10, h20, 2, s.lp), v_fields()));
}

TEST_CASE("flow derivative through an explicit operator matrix") {
  DiffOpMatrix k = zero_matrix(4);
  for (size_t a = 0; a < 4; ++a) k[a][a] = DiffOp::dx(1) * Scalar(2);
  DiffPoly g = ut(1).pow(3) * Scalar::rational(1, 3) + ut(2) * ut(2);
  DiffPoly f = ut(1) * ut(1, 1) + ut(2, 2);

  DiffPoly w1 = d_x(ut(1) * ut(1)) * Scalar(2);
  DiffPoly w2 = d_x(ut(2) * Scalar(2)) * Scalar(2);
  DiffPoly want = ut(1, 1) * w1 + ut(1) * d_x(w1) + d_x(w2, 2);
  CHECK(flow_derivative(f, g, k) == want);

  // a density without matching jets flows to zero
  CHECK(flow_derivative(ut(3), g, k).is_zero());
}
