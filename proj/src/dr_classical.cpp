#include "d4dr/dr_classical.hpp"

#include <algorithm>
#include <functional>

namespace d4dr {

namespace {

const Frac& field_weight(int a) {
  static const Frac wt[5] = {Frac(0), Frac(1), Frac(2, 3), Frac(1, 3),
                             Frac(2, 3)};
  return wt[size_t(a)];
}

DiffPoly u0(int a) { return DiffPoly::var(Alphabet::u, a); }

}  // namespace

bool DrSetting::active(int a) const {
  return std::find(fields.begin(), fields.end(), a) != fields.end();
}

Scalar DrSetting::eta_upper(int a, int b) const {
  if (!active(a) || !active(b)) return Scalar(0);
  if (a == 4 && b == 4) return Scalar(2);
  if (a <= 3 && b <= 3 && a + b == 4) return Scalar(6);
  return Scalar(0);
}

Scalar DrSetting::eta_lower(int a, int b) const {
  if (!active(a) || !active(b)) return Scalar(0);
  if (a == 4 && b == 4) return Scalar::rational(1, 2);
  if (a <= 3 && b <= 3 && a + b == 4) return Scalar::rational(1, 6);
  return Scalar(0);
}

DrSetting DrSetting::full() { return DrSetting{{1, 2, 3, 4}}; }

DrSetting DrSetting::without(std::vector<int> kill) {
  DrSetting st;
  for (int a = 1; a <= 4; ++a)
    if (std::find(kill.begin(), kill.end(), a) == kill.end())
      st.fields.push_back(a);
  return st;
}

DiffPoly frobenius_potential() {
  DiffPoly t1 = u0(1), t2 = u0(2), t3 = u0(3), t4 = u0(4);
  DiffPoly f;
  f += t1 * t2 * t2 * Scalar::rational(1, 12);
  f += t1 * t1 * t3 * Scalar::rational(1, 12);
  f -= t2 * t2 * t2 * t3 * Scalar::rational(1, 216);
  f += t2 * t2 * t3 * t3 * t3 * Scalar::rational(1, 1296);
  f += t3.pow(7) * Scalar::rational(1, 1632960);
  f += t1 * t4 * t4 * Scalar::rational(1, 4);
  f += t2 * t3 * t4 * t4 * Scalar::rational(1, 24);
  f += t3 * t3 * t3 * t4 * t4 * Scalar::rational(1, 432);
  return f;
}

DiffPoly genus_zero_g11(const DrSetting& st) {
  DiffPoly f = frobenius_potential();
  for (int a = 1; a <= 4; ++a)
    if (!st.active(a)) f = f.set_var_zero(Alphabet::u, a);
  DiffPoly out;
  for (const auto& [m, c] : f.terms())
    out += DiffPoly::monomial(m, c * Scalar(dilaton_lambda(m) - 2));
  return out;
}

DiffPoly quadratic_seed(const DrSetting& st) {
  DiffPoly out;
  for (int a : st.fields)
    for (int b : st.fields) {
      Scalar e = st.eta_lower(a, b);
      if (!e.is_zero()) out += u0(a) * u0(b) * (e * Scalar::rational(1, 2));
    }
  return out;
}

DiffPoly eta_bracket(const DiffPoly& f, const DiffPoly& g_density,
                     const DrSetting& st) {
  DiffPoly out;
  for (int a : st.fields) {
    DiffPoly w;
    for (int b : st.fields) {
      Scalar e = st.eta_upper(a, b);
      if (e.is_zero()) continue;
      DiffPoly vg = variational(g_density, Alphabet::u, b);
      if (!vg.is_zero()) w += d_x(vg) * e;
    }
    if (w.is_zero()) continue;
    long kmax = f.max_jet_order(Alphabet::u, a);
    if (kmax < 0) continue;
    std::vector<DiffPoly> tab = dx_table(w, int(kmax));
    for (long k = 0; k <= kmax; ++k) {
      DiffPoly pf = partial(f, Alphabet::u, a, int(k));
      if (!pf.is_zero()) out += pf * tab[size_t(k)];
    }
  }
  return out;
}

DiffPoly recursion_step(const DiffPoly& g, const DiffPoly& h_density,
                        const DrSetting& st) {
  DiffPoly anti = dx_antiderivative(eta_bracket(g, h_density, st));
  return dilaton_inverse_shifted(anti, 1);
}

DrTables run_recursion(const DiffPoly& h_density, const DrSetting& st,
                       int zcap) {
  DrTables t;
  for (int a : st.fields) {
    DiffPoly seed;
    for (int b : st.fields) {
      Scalar e = st.eta_lower(a, b);
      if (!e.is_zero()) seed += u0(b) * e;
    }
    t.g[{a, -1}] = seed;
    for (int d = -1; d < zcap; ++d)
      t.g[{a, d + 1}] = recursion_step(t.g[{a, d}], h_density, st);
  }
  return t;
}

std::vector<Monomial> deformation_basis(const DrSetting& st, int eps_power) {
  Frac target = Frac(7, 3) - Frac(eps_power) / 6;
  std::vector<Monomial> out;
  if (target < 0) return out;
  // variable universe in ascending code order: order-major, then index
  std::vector<std::pair<int, int>> uni;  // (order, field)
  for (int ord = 0; ord <= eps_power; ++ord)
    for (int a : st.fields) uni.emplace_back(ord, a);
  std::sort(uni.begin(), uni.end());
  Monomial cur;
  cur.eps = int16_t(eps_power);
  std::function<void(size_t, Frac, int)> rec = [&](size_t pos, Frac wleft,
                                                   int jleft) {
    if (wleft == 0 && jleft == 0) {
      if (!cur.vars.empty() && !monomial_reducible(cur)) out.push_back(cur);
      return;
    }
    if (pos == uni.size()) return;
    auto [ord, a] = uni[pos];
    rec(pos + 1, wleft, jleft);
    Frac w = field_weight(a);
    Frac wl = wleft;
    int jl = jleft;
    uint32_t code = JetVar::make(Alphabet::u, a, ord);
    for (int e = 1;; ++e) {
      wl -= w;
      jl -= ord;
      if (wl < 0 || jl < 0) break;
      cur.vars.emplace_back(code, e);
      rec(pos + 1, wl, jl);
      cur.vars.pop_back();
    }
  };
  rec(0, target, eps_power);
  for (Monomial& m : out) {
    std::sort(m.vars.begin(), m.vars.end());
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::array<DiffPoly, 4> dr_normal_images(const DrTables& t,
                                         const DrSetting& st) {
  std::array<DiffPoly, 4> im;
  for (int a : st.fields) {
    DiffPoly x;
    for (int m : st.fields) {
      Scalar e = st.eta_upper(a, m);
      if (e.is_zero()) continue;
      x += variational(t.g.at({m, 0}), Alphabet::u, 1) * e;
    }
    im[size_t(a - 1)] = x;
  }
  return im;
}

DiffOpMatrix transport_eta(const std::array<DiffPoly, 4>& ut_images,
                           const DrSetting& st) {
  DiffOpMatrix out = zero_matrix(4);
  std::array<std::array<DiffOp, 4>, 4> jac, jst;
  for (int a : st.fields)
    for (int m : st.fields) {
      const DiffPoly& im = ut_images[size_t(a - 1)];
      long smax = im.max_jet_order(Alphabet::u, m);
      DiffOp fwd, bwd;
      for (long s = 0; s <= smax; ++s) {
        DiffPoly j = partial(im, Alphabet::u, m, int(s));
        if (j.is_zero()) continue;
        fwd = fwd + DiffOp::monomial_op(j, int(s));
        DiffOp term = DiffOp::dx(int(s)) * DiffOp::mult(j);
        if (s % 2 == 1) term = term * Scalar(-1);
        bwd = bwd + term;
      }
      jac[size_t(a - 1)][size_t(m - 1)] = fwd;  // sum_s (d ut^a/du^m_s) d^s
      jst[size_t(m - 1)][size_t(a - 1)] = bwd;  // sum_s (-d)^s (d ut^a/du^m_s)
    }
  for (int a : st.fields)
    for (int b : st.fields) {
      DiffOp acc;
      for (int m : st.fields)
        for (int n : st.fields) {
          Scalar e = st.eta_upper(m, n);
          if (e.is_zero()) continue;
          DiffOp mid = jac[size_t(a - 1)][size_t(m - 1)] * DiffOp::dx(1);
          acc = acc + (mid * jst[size_t(n - 1)][size_t(b - 1)]) * e;
        }
      out[size_t(a - 1)][size_t(b - 1)] = acc;
    }
  // rewrite coefficients through the inverse substitution u = u(ut)
  Miura fwd;
  std::vector<std::pair<Alphabet, int>> dom, img;
  for (int a : st.fields) {
    fwd.set_image(Alphabet::ut, a, ut_images[size_t(a - 1)]);
    dom.emplace_back(Alphabet::ut, a);
    img.emplace_back(Alphabet::u, a);
  }
  Miura inv = fwd.invert(dom, img);
  for (int a : st.fields)
    for (int b : st.fields) {
      DiffOp& entry = out[size_t(a - 1)][size_t(b - 1)];
      DiffOp rew;
      for (int k = 0; k <= entry.order(); ++k) {
        const DiffPoly& c = entry.coeff(k);
        if (!c.is_zero()) rew = rew + DiffOp::monomial_op(inv.apply(c), k);
      }
      entry = rew;
    }
  return out;
}

namespace {

DiffPoly linear_pullback(const DiffPoly& f,
                         const std::array<DiffPoly, 4>& images) {
  Miura m;
  for (int a = 1; a <= 4; ++a)
    m.set_image(Alphabet::u, a, images[size_t(a - 1)]);
  return m.apply(f);
}

}  // namespace

DiffPoly flip4_pullback(const DiffPoly& f) {
  return linear_pullback(f, {u0(1), u0(2), u0(3), -u0(4)});
}

DiffPoly order3_pullback(const DiffPoly& f) {
  DiffPoly i2 = u0(2) * Scalar::rational(-1, 2) + u0(4) * Scalar::rational(3, 2);
  DiffPoly i4 =
      u0(2) * Scalar::rational(-1, 2) + u0(4) * Scalar::rational(-1, 2);
  return linear_pullback(f, {u0(1), i2, u0(3), i4});
}

DiffPoly restrict_density(const DiffPoly& f, const std::vector<int>& kill) {
  DiffPoly out = f;
  for (int a : kill) out = out.set_var_zero(Alphabet::u, a);
  return out;
}

}  // namespace d4dr
