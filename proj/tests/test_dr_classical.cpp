#include "doctest.h"

#include "d4dr/dr_classical.hpp"
#include "d4dr/expr.hpp"
#include "d4dr/fixtures.hpp"

using namespace d4dr;

namespace {

DiffPoly u(int idx, int order = 0) { return DiffPoly::var(Alphabet::u, idx, order); }

}  // namespace

TEST_CASE("settings and pairings") {
  DrSetting full = DrSetting::full();
  CHECK(full.fields == std::vector<int>{1, 2, 3, 4});
  CHECK(full.active(2));
  DrSetting b = DrSetting::without({4});
  CHECK(b.fields == std::vector<int>{1, 2, 3});
  CHECK(!b.active(4));
  DrSetting g = DrSetting::without({2, 4});
  CHECK(g.fields == std::vector<int>{1, 3});

  for (int a = 1; a <= 4; ++a)
    for (int c = 1; c <= 4; ++c) {
      Scalar dot(0);
      for (int m = 1; m <= 4; ++m)
        dot += full.eta_upper(a, m) * full.eta_lower(m, c);
      CHECK(dot == (a == c ? Scalar(1) : Scalar(0)));
    }
  CHECK(full.eta_upper(1, 3) == Scalar(6));
  CHECK(full.eta_upper(4, 4) == Scalar(2));
  CHECK(full.eta_upper(1, 4) == Scalar(0));
}

TEST_CASE("potential: shape, symmetries, dispersionless hamiltonian") {
  DiffPoly f = frobenius_potential();
  CHECK(f.size() == 8);
  GradingReport rep = cohft_grading(f);
  CHECK(rep.homogeneous);
  CHECK(rep.degree == Frac(7, 3));

  // the two linear symmetries fix the potential
  CHECK(flip4_pullback(f) == f);
  CHECK(order3_pullback(f) == f);
  // flip twice and mix three times are the identity
  DiffPoly probe = u(2).pow(2) * u(4) + u(1) * u(3) * u(4, 1);
  CHECK(flip4_pullback(flip4_pullback(probe)) == probe);
  CHECK(order3_pullback(order3_pullback(order3_pullback(probe))) == probe);
  // the pullbacks preserve the pairing form
  DiffPoly seed = quadratic_seed(DrSetting::full());
  CHECK(flip4_pullback(seed) == seed);
  CHECK(order3_pullback(seed) == seed);

  CHECK(seed == parse_poly("1/6*u1*u3 + 1/12*u2^2 + 1/4*u4^2"));

  // (D - 2) applied to the potential is the frozen dispersionless density
  CHECK(genus_zero_g11(DrSetting::full()) == fx::dless());
  // restricting fields commutes with building the density
  CHECK(genus_zero_g11(DrSetting::without({4})) ==
        fx::dless().set_var_zero(Alphabet::u, 4));
}

TEST_CASE("eta bracket is antisymmetric on integrals") {
  DrSetting st = DrSetting::full();
  DiffPoly f = u(1) * u(1) * u(3) + DiffPoly::eps(1) * u(2, 1) * u(4);
  DiffPoly g = u(2) * u(4) * u(4) + u(1, 2) * DiffPoly::eps(2);
  CHECK(LocalFunctional(eta_bracket(f, g, st) + eta_bracket(g, f, st)).is_zero());
  CHECK(LocalFunctional(eta_bracket(f, f, st)).is_zero());
  // restricted settings see only their own fields
  DrSetting sub = DrSetting::without({2, 4});
  CHECK(eta_bracket(u(2) * u(2), u(2) * u(2) * u(2), sub).is_zero());
}

TEST_CASE("dispersionless flows commute") {
  DrSetting st = DrSetting::full();
  DrTables t = run_recursion(fx::dless(), st, 1);
  CHECK(t.g.count({1, -1}) == 1);
  CHECK(t.g.at({1, 1}).size() > 0);
  // level -1 entries are the lowered coordinates
  CHECK(t.g.at({4, -1}) == u(4) * Scalar::rational(1, 2));
  CHECK(t.g.at({1, -1}) == u(3) * Scalar::rational(1, 6));
  // one step above the unit coordinate sits the pairing form, and one step
  // further the recursion reproduces the density it was fed
  CHECK(LocalFunctional(t.g.at({1, 0})) == LocalFunctional(quadratic_seed(st)));
  CHECK(LocalFunctional(t.g.at({1, 1})) == LocalFunctional(fx::dless()));

  for (auto [a, p] : {std::pair{1, 1}, {2, 0}, {3, 1}, {4, 0}}) {
    CAPTURE(a);
    CAPTURE(p);
    DiffPoly c = eta_bracket(t.g.at({a, p}), t.g.at({2, 1}), st);
    CHECK(LocalFunctional(c).is_zero());
  }
}

TEST_CASE("deformation candidates satisfy the advertised constraints") {
  DrSetting st = DrSetting::full();
  // the field weights all have even numerator over six, so odd eps powers
  // can never reach total weight 7/3
  CHECK(deformation_basis(st, 1).empty());
  CHECK(deformation_basis(st, 3).empty());
  for (int e : {0, 2, 4}) {
    std::vector<Monomial> basis = deformation_basis(st, e);
    CHECK(!basis.empty());
    for (const Monomial& m : basis) {
      CHECK(m.eps == e);
      CHECK(m.hbar == 0);
      CHECK(!m.is_constant());
      CHECK(cohft_weight(m) == Frac(7, 3));
      CHECK(differential_deg(m) == 0);
      CHECK(!monomial_reducible(m));
    }
    // no duplicates
    for (size_t i = 1; i < basis.size(); ++i) CHECK(!(basis[i - 1] == basis[i]));
  }
}

TEST_CASE("restriction kills fields and their jets") {
  DiffPoly f = u(1) * u(2, 3) + u(4) * u(4) + u(3);
  CHECK(restrict_density(f, {2, 4}) == u(3));
  CHECK(restrict_density(f, {3}) == f - u(3));
}

TEST_CASE("staged solve reproduces the low eps levels of the hamiltonian") {
  DrSolveReport rep = solve_g11(DrSetting::full(), 2, 4);
  CHECK(rep.nullity.at(2) == 1);
  CHECK(rep.ansatz.at(2) > rep.rank.at(2));
  CHECK(!rep.normalization.empty());
  // odd levels carry nothing
  CHECK(rep.g11.select_eps(1).is_zero());
  CHECK(rep.g11.select_eps(3).is_zero());
  // two-point normalization
  Monomial norm{{{JetVar::make(Alphabet::u, 1, 1), 2}}, 2, 0};
  CHECK(rep.g11.coefficient(norm) == Scalar::rational(-1, 6));

  DiffPoly want = fx::dr_hamiltonian().select_eps_leq(4);
  CHECK(LocalFunctional(rep.g11) == LocalFunctional(want));
}
