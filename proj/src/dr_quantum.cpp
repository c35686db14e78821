#include "d4dr/dr_quantum.hpp"

#include <algorithm>
#include <functional>
#include <mutex>

#include "d4dr/linsys.hpp"

namespace d4dr {

namespace {

// series coefficients of prod_i Li_{-d_i}(z) at z^0 .. z^top
std::vector<mpq_class> product_samples(const std::vector<int>& d, int top) {
  std::vector<mpq_class> acc(size_t(top) + 1);
  acc[0] = 1;
  for (int di : d) {
    std::vector<mpq_class> v(size_t(top) + 1), nxt(size_t(top) + 1);
    for (int k = 1; k <= top; ++k) {
      mpz_class p;
      mpz_ui_pow_ui(p.get_mpz_t(), static_cast<unsigned long>(k),
                    static_cast<unsigned long>(di));
      v[size_t(k)] = mpq_class(p);
    }
    for (int i = 0; i <= top; ++i) {
      if (acc[size_t(i)] == 0) continue;
      for (int k = 1; i + k <= top; ++k)
        nxt[size_t(i + k)] += acc[size_t(i)] * v[size_t(k)];
    }
    acc = std::move(nxt);
  }
  return acc;
}

int coeff_count(const std::vector<int>& d) {
  int m = int(d.size()) - 1;
  for (int x : d) m += x;
  return m;
}

}  // namespace

const std::vector<Scalar>& polylog_coeffs(const std::vector<int>& d) {
  static std::map<std::vector<int>, std::vector<Scalar>> cache;
  static std::mutex cache_mutex;
  std::vector<int> key(d);
  std::sort(key.begin(), key.end());
  if (key.empty() || key.front() < 1)
    throw structure_error("polylog indices must be positive");
  std::lock_guard<std::mutex> lock(cache_mutex);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  int m = coeff_count(key);
  std::vector<mpq_class> lhs = product_samples(key, m);
  LinearSystem sys{size_t(m)};
  for (int s = 1; s <= m; ++s) {
    std::vector<std::pair<size_t, Scalar>> row;
    mpz_class p = 1;
    for (int j = 1; j <= m; ++j) {
      p *= s;
      row.emplace_back(size_t(j - 1), Scalar(mpq_class(p)));
    }
    sys.add_row(std::move(row), Scalar(lhs[size_t(s)]));
  }
  LinearSolution sol = solve(sys);
  if (!sol.consistent || sol.nullity() != 0)
    throw structure_error("polylog sample solve is singular");
  return cache.emplace(std::move(key), std::move(sol.particular))
      .first->second;
}

bool polylog_expansion_valid(const std::vector<int>& d, int extra) {
  const std::vector<Scalar>& ct = polylog_coeffs(d);
  int m = coeff_count(d);
  std::vector<mpq_class> lhs = product_samples(d, m + extra);
  for (int s = m + 1; s <= m + extra; ++s) {
    Scalar rhs;
    mpz_class p = 1;
    for (int j = 1; j <= m; ++j) {
      p *= s;
      rhs += ct[size_t(j - 1)] * Scalar(mpq_class(p));
    }
    if (rhs != Scalar(lhs[size_t(s)])) return false;
  }
  return true;
}

Scalar star_coeff(const std::vector<int>& a, int j) {
  int s = coeff_count(a);
  if (j < 1 || j > s || (s - j) % 2 != 0) return Scalar(0);
  const Scalar& ct = polylog_coeffs(a)[size_t(j - 1)];
  return ((s - j) / 2) % 2 == 0 ? ct : -ct;
}

namespace {

int eta_dual(int a) { return (a == 2 || a == 4) ? a : 4 - a; }

mpz_class factorial(int n) {
  mpz_class f = 1;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

// jet orders of u^index appearing in f
std::vector<int> jet_orders(const DiffPoly& f, int index) {
  std::vector<int> out;
  for (uint32_t code : f.variables())
    if (JetVar::alphabet(code) == Alphabet::u && JetVar::index(code) == index)
      out.push_back(JetVar::order(code));
  return out;
}

}  // namespace

DiffPoly star_commutator(const DiffPoly& f, const DiffPoly& g_density,
                         const DrSetting& st, int hbar_cap) {
  DiffPoly out;
  std::vector<int> a;
  const Scalar minus_i(0, -1, 0, 0);
  std::function<void(const DiffPoly&, const DiffPoly&, int, long,
                     const Scalar&)>
      rec = [&](const DiffPoly& fd, const DiffPoly& gd, int depth, long rsum,
                const Scalar& etaprod) {
        if (depth >= 1) {
          Scalar pref = etaprod * minus_i.pow(depth - 1) *
                        Scalar(mpq_class(1, factorial(depth)));
          if (rsum % 2 != 0) pref = -pref;
          int top = coeff_count(a);
          std::vector<DiffPoly> tab = dx_table(gd, top);
          DiffPoly gsum;
          for (int j = 1; j <= top; ++j) {
            Scalar cj = star_coeff(a, j);
            if (!cj.is_zero()) gsum += tab[size_t(j)] * cj;
          }
          if (!gsum.is_zero())
            out += (fd * gsum * pref) * DiffPoly::hbar(depth);
        }
        if (depth >= hbar_cap) return;
        for (uint32_t code : fd.variables()) {
          if (JetVar::alphabet(code) != Alphabet::u) continue;
          int alpha = JetVar::index(code);
          int beta = eta_dual(alpha);
          Scalar e = st.eta_upper(alpha, beta);
          if (e.is_zero()) continue;
          int s = JetVar::order(code);
          DiffPoly fd2 = partial(fd, code);
          if (fd2.is_zero()) continue;
          for (int r : jet_orders(gd, beta)) {
            DiffPoly gd2 = partial(gd, Alphabet::u, beta, r);
            if (gd2.is_zero()) continue;
            a.push_back(s + r + 1);
            rec(fd2, gd2, depth + 1, rsum + r, etaprod * e);
            a.pop_back();
          }
        }
      };
  rec(f, g_density, 0, 0, Scalar(1));
  return out.select_hbar_leq(hbar_cap);
}

DiffPoly quantum_recursion_step(const DiffPoly& g, const DiffPoly& h_density,
                                const DrSetting& st, int hbar_cap) {
  DiffPoly rhs = star_commutator(g, h_density, st, hbar_cap + 1)
                     .divide_exact(DiffPoly::hbar(1))
                     .select_hbar_leq(hbar_cap);
  return dilaton_inverse_shifted(dx_antiderivative(rhs), 1);
}

QuantumTables run_quantum_recursion(const DiffPoly& h_density,
                                    const DrSetting& st, int zcap,
                                    int hbar_cap) {
  QuantumTables t;
  for (int alpha : st.fields) {
    DiffPoly seed;
    for (int b : st.fields) {
      Scalar e = st.eta_lower(alpha, b);
      if (!e.is_zero()) seed += DiffPoly::var(Alphabet::u, b) * e;
    }
    t.g[{alpha, -1}] = seed;
    for (int d = -1; d < zcap; ++d)
      t.g[{alpha, d + 1}] =
          quantum_recursion_step(t.g[{alpha, d}], h_density, st, hbar_cap);
  }
  return t;
}

std::vector<Monomial> quantum_basis(const DrSetting& st, int eps_power) {
  static const Frac wt[5] = {Frac(0), Frac(1), Frac(2, 3), Frac(1, 3),
                             Frac(2, 3)};
  Frac target = Frac(1) - Frac(eps_power) / 6;
  std::vector<Monomial> out;
  if (target <= 0) return out;
  int jmax = eps_power + 2;
  std::vector<std::pair<int, int>> uni;  // (order, field)
  for (int ord = 0; ord <= jmax; ++ord)
    for (int a : st.fields) uni.emplace_back(ord, a);
  std::sort(uni.begin(), uni.end());
  Monomial cur;
  cur.eps = int16_t(eps_power);
  std::function<void(size_t, Frac, int)> rec = [&](size_t pos, Frac wleft,
                                                   int jleft) {
    if (wleft == 0) {
      if (!cur.vars.empty() && !monomial_reducible(cur)) out.push_back(cur);
      return;
    }
    if (pos == uni.size()) return;
    auto [ord, fld] = uni[pos];
    rec(pos + 1, wleft, jleft);
    Frac w = wt[size_t(fld)];
    Frac wl = wleft;
    int jl = jleft;
    uint32_t code = JetVar::make(Alphabet::u, fld, ord);
    for (int e = 1;; ++e) {
      wl -= w;
      jl -= ord;
      if (wl < 0 || jl < 0) break;
      cur.vars.emplace_back(code, e);
      rec(pos + 1, wl, jl);
      cur.vars.pop_back();
    }
  };
  rec(0, target, jmax);
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

struct Affine {
  DiffPoly base;
  std::vector<DiffPoly> comp;

  explicit Affine(size_t n = 0) : comp(n) {}
};

void add_vanishing_rows(LinearSystem& sys, const Affine& x) {
  std::map<Monomial, std::pair<std::vector<std::pair<size_t, Scalar>>, Scalar>>
      rows;
  for (size_t i = 0; i < x.comp.size(); ++i)
    for (const auto& [m, c] : x.comp[i].terms())
      rows[m].first.emplace_back(i, c);
  for (const auto& [m, c] : x.base.terms()) rows[m].second = -c;
  for (auto& [m, row] : rows) sys.add_row(std::move(row.first), row.second);
}

DiffPoly nf_mod_constants(const DiffPoly& f) {
  DiffPoly r = normal_form(f);
  return r - r.constant_terms();
}

}  // namespace

QuantumSolveReport solve_quantum_g11(const DiffPoly& classical_g11,
                                     const DrSetting& st, int zcap) {
  DrTables ct = run_recursion(classical_g11, st, zcap);
  std::vector<Monomial> bas;
  std::vector<DiffPoly> unknowns;
  for (int p = 0; p <= 6; ++p)
    for (const Monomial& m : quantum_basis(st, p)) {
      bas.push_back(m);
      unknowns.push_back(DiffPoly::monomial(m, Scalar::i()) *
                         DiffPoly::hbar(1));
    }
  size_t n = unknowns.size();
  LinearSystem sys(n);
  std::map<std::pair<int, int>, Affine> aff;
  for (int alpha : st.fields) {
    aff[{alpha, -1}] = Affine(n);
    for (int d = -1; d < zcap; ++d) {
      const Affine& cur = aff.at({alpha, d});
      Affine rhs(n);
      rhs.base = star_commutator(ct.g.at({alpha, d}), classical_g11, st, 2)
                     .divide_exact(DiffPoly::hbar(1))
                     .select_hbar(1);
      rhs.base += eta_bracket(cur.base, classical_g11, st);
      for (size_t i = 0; i < n; ++i) {
        rhs.comp[i] = eta_bracket(cur.comp[i], classical_g11, st) +
                      eta_bracket(ct.g.at({alpha, d}), unknowns[i], st);
      }
      Affine red(n), rem(n), ker(n), next(n);
      Reduction rb = reduce_mod_dx(rhs.base);
      red.base = rb.antiderivative;
      rem.base = rb.remainder;
      for (size_t i = 0; i < n; ++i) {
        Reduction rc = reduce_mod_dx(rhs.comp[i]);
        red.comp[i] = rc.antiderivative;
        rem.comp[i] = rc.remainder;
      }
      add_vanishing_rows(sys, rem);
      ker.base = select_dilaton(red.base, 1);
      for (size_t i = 0; i < n; ++i) ker.comp[i] = select_dilaton(red.comp[i], 1);
      add_vanishing_rows(sys, ker);
      next.base = dilaton_inverse_shifted(red.base - ker.base, 1);
      for (size_t i = 0; i < n; ++i)
        next.comp[i] = dilaton_inverse_shifted(red.comp[i] - ker.comp[i], 1);
      aff[{alpha, d + 1}] = std::move(next);
    }
  }
  // seed condition on the correction: delta/delta u^1 lands in Im d_x plus
  // constants
  {
    Affine x(n);
    for (size_t i = 0; i < n; ++i)
      x.comp[i] = nf_mod_constants(variational(unknowns[i], Alphabet::u, 1));
    add_vanishing_rows(sys, x);
  }
  // self-consistency: the second-flow density returns the Hamiltonian
  {
    const Affine& g11 = aff.at({1, 1});
    Affine x(n);
    x.base = nf_mod_constants(g11.base);
    for (size_t i = 0; i < n; ++i)
      x.comp[i] = nf_mod_constants(g11.comp[i] - unknowns[i]);
    add_vanishing_rows(sys, x);
  }
  LinearSolution sol = solve(sys);
  if (!sol.consistent)
    throw structure_error("quantum correction system is inconsistent");
  QuantumSolveReport rep;
  rep.nullity = int(sol.nullity());
  rep.ansatz = int(n);
  rep.rank = int(n) - int(sol.nullity());
  std::vector<Scalar> c = sol.particular;
  Monomial norm;
  norm.vars.emplace_back(JetVar::make(Alphabet::u, 1, 0), 1);
  size_t idx =
      size_t(std::find(bas.begin(), bas.end(), norm) - bas.begin());
  if (idx == bas.size())
    throw structure_error("normalization monomial missing from basis");
  if (sol.nullity() == 1) {
    const Scalar& dir = sol.nullspace[0][idx];
    if (dir.is_zero())
      throw structure_error("scaling direction misses the normalization");
    Scalar t = (Scalar::rational(-1, 6) - c[idx]) * dir.inverse();
    for (size_t i = 0; i < n; ++i) c[i] += t * sol.nullspace[0][i];
    rep.normalization = "added " + t.str() +
                        " times the scaling direction so that i*hbar*u1 "
                        "carries -1/6";
  } else if (sol.nullity() != 0) {
    throw structure_error("quantum correction is underdetermined");
  } else {
    rep.normalization = "system has full rank; no scaling freedom left";
  }
  rep.g11 = classical_g11;
  for (size_t i = 0; i < n; ++i)
    if (!c[i].is_zero()) rep.g11 += unknowns[i] * c[i];
  return rep;
}

}  // namespace d4dr
