#include "d4dr/ds_d4.hpp"

namespace d4dr {

namespace {

std::vector<std::pair<Alphabet, int>> s_fields() {
  return {{Alphabet::s, 1}, {Alphabet::s, 2}, {Alphabet::s, 3},
          {Alphabet::rho, 1}};
}
std::vector<std::pair<Alphabet, int>> v_fields() {
  return {{Alphabet::v, 1}, {Alphabet::v, 2}, {Alphabet::v, 3},
          {Alphabet::rho, 1}};
}
std::vector<std::pair<Alphabet, int>> ut_fields() {
  return {{Alphabet::ut, 1}, {Alphabet::ut, 2}, {Alphabet::ut, 3},
          {Alphabet::ut, 4}};
}

}  // namespace

Scalar ds_eta_upper(int a, int b) {
  if (a == 4 && b == 4) return Scalar(2);
  if (a <= 3 && b <= 3 && a + b == 4) return Scalar(6);
  return Scalar(0);
}

Scalar ds_eta_lower(int a, int b) {
  if (a == 4 && b == 4) return Scalar::rational(1, 2);
  if (a <= 3 && b <= 3 && a + b == 4) return Scalar::rational(1, 6);
  return Scalar(0);
}

Frac ds_spectrum(int a) {
  if (a == 4) return Frac(0);
  Frac f(2 * a - 4, 6);
  f.canonicalize();
  return f;
}

LaxPair build_lax(int floor) {
  LaxPair lp;
  lp.floor = floor;
  PsiDO1 t;
  for (int mu = 1; mu <= 3; ++mu) {
    DiffPoly smu = DiffPoly::var(Alphabet::s, mu);
    t = t + PsiDO1::monomial_op(smu, 2 * mu - 1) +
        mul(PsiDO1::derivative(2 * mu - 1), PsiDO1::multiplication(smu));
  }
  DiffPoly r = DiffPoly::rho();
  PsiDO1 b =
      mul_trunc(PsiDO1::derivative(-1), PsiDO1::multiplication(r), floor - 1);
  lp.L = PsiDO1::derivative(6) +
         mul_trunc(PsiDO1::derivative(-1), t, floor) + mul_trunc(b, b, floor);
  lp.Lt = PsiDO1::derivative(7) + t + truncate(left_mul_poly(r, b), floor);
  for (int mu = 1; mu <= 3; ++mu) {
    lp.v_of_s[size_t(mu - 1)] = t.coeff(2 * mu - 1);
    lp.vt_of_s[size_t(mu - 1)] = t.coeff(2 * mu - 2);
    lp.v_in_s.set_image(Alphabet::v, mu, lp.v_of_s[size_t(mu - 1)]);
  }
  lp.v_in_s.set_image(Alphabet::rho, 1, r);
  lp.s_in_v = lp.v_in_s.invert(v_fields(), s_fields());
  for (int mu = 1; mu <= 3; ++mu)
    lp.vt_of_v[size_t(mu - 1)] = lp.s_in_v.apply(lp.vt_of_s[size_t(mu - 1)]);
  return lp;
}

PsiDO1 lax_v_form(const LaxPair& lp, int floor) {
  PsiDO1 t;
  for (int mu = 1; mu <= 3; ++mu) {
    t = t + PsiDO1::monomial_op(DiffPoly::var(Alphabet::v, mu), 2 * mu - 1) +
        PsiDO1::monomial_op(lp.vt_of_v[size_t(mu - 1)], 2 * mu - 2);
  }
  DiffPoly r = DiffPoly::rho();
  PsiDO1 b =
      mul_trunc(PsiDO1::derivative(-1), PsiDO1::multiplication(r), floor);
  return PsiDO1::derivative(7) + t + left_mul_poly(r, b);
}

const PsiDO1& RootCache::ensure_power(int k) {
  auto it = powers.find(k);
  if (it != powers.end()) return it->second;
  if (k <= 1) throw structure_error("root cache missing base power");
  PsiDO1 val = (k % 2 == 0)
                   ? mul(ensure_power(k / 2), ensure_power(k / 2))
                   : mul(ensure_power(k - 1), ensure_power(1));
  return powers.emplace(k, std::move(val)).first->second;
}

DiffPoly RootCache::res_power(int k) {
  if (k == 1) return res(P);
  int a = k / 2, b = k - a;
  return mul_slot(ensure_power(a), ensure_power(b), -1);
}

RootCache sixth_root(const LaxPair& lp, int floor) {
  RootCache rc;
  rc.P = nth_root_first(lp.L, 6, floor);
  rc.powers.emplace(1, rc.P);
  return rc;
}

PsiDO2 second_root(const LaxPair& lp, int mmax, int eps_cap) {
  PsiDO2 l2 = decompose_graded(lp.L, eps_cap);
  return sqrt_second(l2, DiffPoly::rho(), mmax);
}

NormalCoordinates normal_coordinates(const LaxPair& lp, RootCache& rc) {
  NormalCoordinates nc;
  for (int mu = 1; mu <= 3; ++mu)
    nc.ut_of_s[size_t(mu - 1)] =
        rc.res_power(7 - 2 * mu) * Scalar::rational(6, 7 - 2 * mu);
  nc.ut_of_s[3] = DiffPoly::rho() * Scalar(2);
  for (int a = 1; a <= 4; ++a)
    nc.ut_in_s.set_image(Alphabet::ut, a, nc.ut_of_s[size_t(a - 1)]);
  nc.s_in_ut = nc.ut_in_s.invert(ut_fields(), s_fields());
  for (int a = 1; a <= 4; ++a) {
    nc.ut_of_v[size_t(a - 1)] = lp.s_in_v.apply(nc.ut_of_s[size_t(a - 1)]);
    nc.ut_in_v.set_image(Alphabet::ut, a, nc.ut_of_v[size_t(a - 1)]);
  }
  nc.v_in_ut = nc.ut_in_v.invert(ut_fields(), v_fields());
  return nc;
}

std::map<std::pair<int, int>, DiffPoly> tau_densities_s(
    const LaxPair& lp, RootCache& rc, const NormalCoordinates& nc,
    bool with_first_flow) {
  std::map<std::pair<int, int>, DiffPoly> h;
  for (int a = 1; a <= 4; ++a) {
    DiffPoly d;
    for (int b = 1; b <= 4; ++b) {
      Scalar e = ds_eta_lower(a, b);
      if (!e.is_zero()) d += nc.ut_of_s[size_t(b - 1)] * e;
    }
    h[{a, -1}] = d;
  }
  for (int mu = 1; mu <= 3; ++mu)
    h[{mu, 0}] = rc.res_power(2 * mu + 5) *
                 Scalar::rational(6, (2 * mu - 1) * (2 * mu + 5));
  // fourth label via the residue reduction of the squared second root
  DiffPoly u4 = nc.ut_of_s[3];
  DiffPoly r1 = mul_slot(PsiDO1::derivative(-1), left_mul_poly(u4, lp.L), -1);
  DiffPoly half_free =
      op_apply(positive_part(lp.L), DiffPoly(1)) * Scalar::rational(1, 2);
  h[{4, 0}] = (r1 + u4 * half_free) * Scalar::rational(1, 3);
  if (with_first_flow) h[{1, 1}] = rc.res_power(13) * Scalar::rational(36, 91);
  return h;
}

DiffPoly flow_derivative(const DiffPoly& f, const DiffPoly& g_density,
                         const DiffOpMatrix& k_presented) {
  size_t dim = k_presented.size();
  std::vector<DiffPoly> w(dim);
  for (size_t c = 0; c < dim; ++c) {
    DiffPoly dg = variational(g_density, Alphabet::ut, int(c) + 1);
    if (dg.is_zero()) continue;
    for (size_t g = 0; g < dim; ++g) {
      if (k_presented[g][c].is_zero()) continue;
      w[g] += k_presented[g][c].apply(dg);
    }
  }
  DiffPoly out;
  for (size_t g = 0; g < dim; ++g) {
    if (w[g].is_zero()) continue;
    long kmax = f.max_jet_order(Alphabet::ut, int(g) + 1);
    if (kmax < 0) continue;
    std::vector<DiffPoly> tab = dx_table(w[g], int(kmax));
    for (long k = 0; k <= kmax; ++k) {
      DiffPoly pf = partial(f, Alphabet::ut, int(g) + 1, int(k));
      if (pf.is_zero()) continue;
      out += pf * tab[size_t(k)];
    }
  }
  return out;
}

DiffPoly divide_eps(const DiffPoly& f) {
  return f.divide_exact(DiffPoly::eps(1));
}

}  // namespace d4dr
