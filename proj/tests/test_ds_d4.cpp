#include "doctest.h"

#include <map>

#include "d4dr/ds_d4.hpp"
#include "d4dr/fixtures.hpp"

using namespace d4dr;

namespace {

DiffPoly sv(int idx, int order = 0) { return DiffPoly::var(Alphabet::s, idx, order); }

LaxPair& lax() {
  static LaxPair lp = build_lax();
  return lp;
}

}  // namespace

TEST_CASE("pairing and spectrum tables") {
  CHECK(ds_eta_upper(1, 3) == Scalar(6));
  CHECK(ds_eta_upper(2, 2) == Scalar(6));
  CHECK(ds_eta_upper(4, 4) == Scalar(2));
  CHECK(ds_eta_upper(1, 2) == Scalar(0));
  CHECK(ds_eta_upper(1, 4) == Scalar(0));
  for (int a = 1; a <= 4; ++a)
    for (int b = 1; b <= 4; ++b) {
      Scalar dot(0);
      for (int c = 1; c <= 4; ++c) dot += ds_eta_upper(a, c) * ds_eta_lower(c, b);
      CHECK(dot == (a == b ? Scalar(1) : Scalar(0)));
    }
  CHECK(ds_spectrum(1) == Frac(-1, 3));
  CHECK(ds_spectrum(2) == Frac(0));
  CHECK(ds_spectrum(3) == Frac(1, 3));
  CHECK(ds_spectrum(4) == Frac(0));
}

TEST_CASE("lax operator structure") {
  const LaxPair& lp = lax();
  CHECK(lp.L.coeff(6) == DiffPoly(1));
  CHECK(lp.L.coeff(5).is_zero());
  // the top middle coefficient: D^-1 against the symmetrically split s^3 slot
  CHECK(lp.L.coeff(4) == sv(3) * Scalar(2));
  CHECK(lp.Lt.coeff(7) == DiffPoly(1));
  CHECK(lp.Lt.coeff(5) == sv(3) * Scalar(2));

  // the odd-power coefficients of the finite form start with 2 s^mu
  for (int mu = 1; mu <= 3; ++mu) {
    CHECK(lp.v_of_s[size_t(mu - 1)].select_eps(0) == sv(mu) * Scalar(2));
    CHECK(lp.vt_of_s[size_t(mu - 1)].select_eps(0).is_zero());
  }

  // Lt is the derivative composed with L, slot by slot
  PsiDO1 dl = mul_trunc(PsiDO1::derivative(1), lp.L, lp.floor + 1);
  for (int k = lp.floor + 1; k <= 7; ++k) CHECK(dl.coeff(k) == lp.Lt.coeff(k));

  // Lt is anti-self-adjoint
  PsiDO1 at = adjoint(lp.Lt);
  for (int k = lp.floor; k <= 7; ++k) CHECK(at.coeff(k) == -lp.Lt.coeff(k));
}

TEST_CASE("coordinate maps invert exactly") {
  const LaxPair& lp = lax();
  DiffPoly probe = sv(1) * sv(2, 1) + sv(3).pow(2) * DiffPoly::rho();
  CHECK(lp.v_in_s.apply(lp.s_in_v.apply(probe)) == probe);
  DiffPoly probe_v = DiffPoly::var(Alphabet::v, 1) *
                     DiffPoly::var(Alphabet::v, 3, 2);
  CHECK(lp.s_in_v.apply(lp.v_in_s.apply(probe_v)) == probe_v);

  // presented finite-form coefficients match the frozen relations
  std::array<DiffPoly, 3> vt = fx::vt_of_v();
  for (size_t mu = 0; mu < 3; ++mu)
    CHECK(lp.vt_of_v[mu].rescale_eps_inv_sqrt2() == vt[mu]);
}

TEST_CASE("sixth root and residue powers") {
  const LaxPair& lp = lax();
  RootCache rc = sixth_root(lp, -7);
  CHECK(rc.P.coeff(1) == DiffPoly(1));
  CHECK(rc.P.coeff(0).is_zero());

  // P^6 reproduces L on every safely known slot
  const PsiDO1& p6 = rc.ensure_power(6);
  for (int k = p6.floor_power(); k <= 6; ++k)
    CHECK(p6.coeff(k) == lp.L.coeff(k));

  // residue route independence
  CHECK(rc.res_power(3) == res(rc.ensure_power(3)));
  CHECK(rc.res_power(5) == mul_slot(rc.ensure_power(2), rc.ensure_power(3), -1));
}

TEST_CASE("normal coordinates and their inverse") {
  const LaxPair& lp = lax();
  RootCache rc = sixth_root(lp, -6);
  NormalCoordinates nc = normal_coordinates(lp, rc);

  CHECK(nc.ut_of_s[3] == DiffPoly::rho() * Scalar(2));
  // the third coordinate is dispersionless-linear: 6 res P = 2 s^3 + O(eps^2)
  CHECK(nc.ut_of_s[2].select_eps(0) == sv(3) * Scalar(2));

  DiffPoly probe = DiffPoly::var(Alphabet::ut, 1) *
                   DiffPoly::var(Alphabet::ut, 4, 1);
  CHECK(nc.s_in_ut.apply(nc.ut_in_s.apply(probe)) == probe);
  DiffPoly probe_s = sv(2) * sv(2) + DiffPoly::rho(2);
  CHECK(nc.ut_in_s.apply(nc.s_in_ut.apply(probe_s)) == probe_s);
  DiffPoly probe_v = DiffPoly::var(Alphabet::v, 2, 1) * DiffPoly::rho();
  CHECK(nc.ut_in_v.apply(nc.v_in_ut.apply(probe_v)) == probe_v);

  // the frozen inverse map, stated in the presented convention
  std::array<DiffPoly, 4> s_of_ut = fx::s_of_ut();
  std::vector<std::pair<Alphabet, int>> src = {
      {Alphabet::s, 1}, {Alphabet::s, 2}, {Alphabet::s, 3}, {Alphabet::rho, 1}};
  for (size_t k = 0; k < 4; ++k) {
    DiffPoly img = nc.s_in_ut.image(src[k].first, src[k].second);
    CHECK(img.rescale_eps_inv_sqrt2() == s_of_ut[k]);
  }
  std::array<DiffPoly, 4> ut_of_v = fx::ut_of_v();
  for (size_t k = 0; k < 4; ++k)
    CHECK(nc.ut_of_v[k].rescale_eps_inv_sqrt2() == ut_of_v[k]);
}

TEST_CASE("level-zero densities match the frozen displays") {
  const LaxPair& lp = lax();
  RootCache rc = sixth_root(lp, -11);
  NormalCoordinates nc = normal_coordinates(lp, rc);
  std::map<std::pair<int, int>, DiffPoly> hs =
      tau_densities_s(lp, rc, nc, false);

  // level -1 densities are the lowered normal coordinates
  CHECK(hs.at({4, -1}) == DiffPoly::rho());

  std::map<std::pair<int, int>, DiffPoly> want = fx::h_densities();
  for (int a = 1; a <= 4; ++a) {
    DiffPoly got =
        nc.s_in_ut.apply(hs.at({a, 0})).rescale_eps_inv_sqrt2();
    CHECK(LocalFunctional(got) == LocalFunctional(want.at({a, 0})));
  }
}

TEST_CASE("graded square root squares back to the lax operator") {
  const LaxPair& lp = lax();
  PsiDO2 q = second_root(lp, 2, 4);
  PsiDO2 l2 = decompose_graded(lp.L, 4);
  CHECK(equal2(mul2(q, q), l2));
}
