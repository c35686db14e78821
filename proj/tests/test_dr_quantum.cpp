#include "doctest.h"

#include "d4dr/dr_quantum.hpp"
#include "d4dr/expr.hpp"
#include "d4dr/fixtures.hpp"

using namespace d4dr;

namespace {

DiffPoly u(int idx, int order = 0) { return DiffPoly::var(Alphabet::u, idx, order); }

std::vector<Scalar> rats(const std::vector<std::pair<long, long>>& v) {
  std::vector<Scalar> out;
  for (auto [p, q] : v) out.push_back(Scalar::rational(p, q));
  return out;
}

}  // namespace

TEST_CASE("product expansions of the power sums") {
  // sum_k k^d z^k for d = 1, 2 and the first products
  CHECK(polylog_coeffs({1}) == rats({{1, 1}}));
  CHECK(polylog_coeffs({2}) == rats({{0, 1}, {1, 1}}));
  // sum k z^k squared: coefficient (m^3 - m)/6 at z^m
  CHECK(polylog_coeffs({1, 1}) == rats({{-1, 6}, {0, 1}, {1, 6}}));
  // sum k z^k times sum k^2 z^k: (m^4 - m^2)/12
  CHECK(polylog_coeffs({1, 2}) == rats({{0, 1}, {-1, 12}, {0, 1}, {1, 12}}));
  CHECK(polylog_coeffs({2, 1}) == polylog_coeffs({1, 2}));

  CHECK(polylog_expansion_valid({1}, 4));
  CHECK(polylog_expansion_valid({3, 2}, 3));
  CHECK(polylog_expansion_valid({1, 1, 2}, 2));
}

TEST_CASE("signed commutator coefficients") {
  CHECK(star_coeff({1, 1}, 3) == Scalar::rational(1, 6));
  CHECK(star_coeff({1, 1}, 2) == Scalar(0));
  // the parity sign flips the bottom coefficient to +1/6
  CHECK(star_coeff({1, 1}, 1) == Scalar::rational(1, 6));
  CHECK(star_coeff({2}, 2) == Scalar(1));
  CHECK(star_coeff({2}, 1) == Scalar(0));
}

TEST_CASE("commutator slices: classical limit, parity, depth bound") {
  DrSetting st = DrSetting::full();
  DiffPoly f = u(1) * u(1);
  DiffPoly g = u(3) * u(3);
  DiffPoly c = star_commutator(f, g, st, 4);
  // the linear slice is the hydrodynamic bracket
  CHECK(c.select_hbar(1) == DiffPoly::hbar(1) * eta_bracket(f, g, st));
  CHECK(!c.select_hbar(2).is_zero());
  // two factors on each side allow at most two contractions
  CHECK(c.select_hbar(3).is_zero());
  CHECK(c.select_hbar(4).is_zero());
  // slices alternate between rational and imaginary coefficients
  for (const auto& [m, coef] : c.select_hbar(1).terms()) {
    (void)m;
    CHECK(coef.conj_i() == coef);
  }
  for (const auto& [m, coef] : c.select_hbar(2).terms()) {
    (void)m;
    CHECK(coef.conj_i() == -coef);
  }

  DiffPoly a = u(1) * u(3) + u(2) * u(4);
  DiffPoly b = u(3) * u(3) * u(3) + u(4) * u(4);
  CHECK(LocalFunctional(star_commutator(a, b, st, 4) +
                        star_commutator(b, a, st, 4))
            .is_zero());
  CHECK(LocalFunctional(star_commutator(a, a, st, 4)).is_zero());
}

TEST_CASE("correction candidates satisfy the advertised constraints") {
  DrSetting st = DrSetting::full();
  // odd eps powers cannot reach weight one, and by eps^6 nothing is left
  CHECK(quantum_basis(st, 1).empty());
  CHECK(quantum_basis(st, 3).empty());
  CHECK(quantum_basis(st, 6).empty());
  for (int e : {0, 2, 4}) {
    std::vector<Monomial> basis = quantum_basis(st, e);
    CHECK(!basis.empty());
    for (const Monomial& m : basis) {
      CHECK(m.eps == e);
      CHECK(m.hbar == 0);
      CHECK(!m.is_constant());
      CHECK(cohft_weight(m) == Frac(1));
      CHECK(m.jet_weight() <= e + 2);
      CHECK(!monomial_reducible(m));
    }
  }
}

TEST_CASE("frozen correction: shape, reality, normalization") {
  DiffPoly corr = fx::quantum_correction();
  CHECK(corr.select_hbar(0).is_zero());
  CHECK(corr.select_hbar(1) == corr);
  GradingReport rep = cohft_grading(corr);
  CHECK(rep.homogeneous);
  CHECK(rep.degree == Frac(7, 3));
  // every coefficient is imaginary: i times a rational
  for (const auto& [m, coef] : corr.terms()) {
    (void)m;
    CHECK(coef.conj_i() == -coef);
  }
  Monomial one_point{{{JetVar::make(Alphabet::u, 1, 0), 1}}, 0, 1};
  CHECK(corr.coefficient(one_point) == Scalar::i() * Scalar::rational(-1, 6));
  // only the unit and third fields appear
  for (uint32_t code : corr.variables()) {
    int idx = JetVar::index(code);
    CHECK((idx == 1 || idx == 3));
  }
}

TEST_CASE("quantum recursion reproduces the full density at (1,1)") {
  DrSetting st = DrSetting::full();
  DiffPoly big = fx::dr_hamiltonian() + fx::quantum_correction();

  DiffPoly g0 = quantum_recursion_step(u(3) * Scalar::rational(1, 6), big, st, 1);
  // the first step sees no quantum term: the correction's unit-field slot is
  // constant, so its contribution differentiates away
  CHECK(g0.select_hbar(1).is_zero());
  CHECK(LocalFunctional(g0) == LocalFunctional(quadratic_seed(st)));

  DiffPoly g1 = quantum_recursion_step(g0, big, st, 1);
  CHECK(LocalFunctional(g1.select_hbar(0)) ==
        LocalFunctional(fx::dr_hamiltonian()));
  // the linear-in-hbar slice of the reproduced density pins the whole
  // correction, including the one-point value
  CHECK(LocalFunctional(g1.select_hbar(1)) ==
        LocalFunctional(fx::quantum_correction()));
}

TEST_CASE("level minus-one integrals are conserved by the quantum flow") {
  DrSetting st = DrSetting::full();
  DiffPoly big = fx::dr_hamiltonian() + fx::quantum_correction();
  for (int a : st.fields) {
    DiffPoly seed;
    for (int b : st.fields) {
      Scalar e = st.eta_lower(a, b);
      if (!e.is_zero()) seed += u(b) * e;
    }
    CHECK(LocalFunctional(star_commutator(seed, big, st, 4)).is_zero());
  }
}
