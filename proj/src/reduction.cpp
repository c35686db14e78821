#include "d4dr/reduction.hpp"

#include <map>

namespace d4dr {

namespace {

void require_polynomial(const DiffPoly& f) {
  for (auto& [m, c] : f.terms())
    for (auto& [code, e] : m.vars)
      if (e < 0)
        throw structure_error(
            "reduction requires polynomial densities (negative exponent)");
}

// lower the top instance of a reducible monomial: the preimage m with
// leading(d_x(m)) == q, together with the multiplicity of the lowered slot
std::pair<Monomial, long> lower_top(const Monomial& q) {
  Monomial m = q;
  uint32_t top = m.vars.back().first;
  m.vars.pop_back();
  uint32_t down = JetVar::lower(top);
  long mult = 1;
  if (!m.vars.empty() && m.vars.back().first == down) {
    mult = m.vars.back().second + 1;
    m.vars.back().second += 1;
  } else {
    m.vars.emplace_back(down, 1);
  }
  return {m, mult};
}

}  // namespace

bool monomial_reducible(const Monomial& m) {
  if (m.vars.empty()) return false;
  const auto& top = m.vars.back();
  if (JetVar::order(top.first) < 1) return false;
  if (top.second != 1) return false;
  if (m.vars.size() >= 2 &&
      m.vars[m.vars.size() - 2].first > JetVar::lower(top.first))
    return false;
  return true;
}

Reduction reduce_mod_dx(const DiffPoly& f) {
  require_polynomial(f);
  std::map<Monomial, Scalar> work;
  for (auto& [m, c] : f.terms()) work.emplace(m, c);
  std::map<Monomial, Scalar> anti, rem;
  while (!work.empty()) {
    auto it = std::prev(work.end());
    Monomial q = it->first;
    Scalar c = std::move(it->second);
    work.erase(it);
    if (c.is_zero()) continue;
    if (!monomial_reducible(q)) {
      auto [rit, fresh] = rem.try_emplace(q, c);
      if (!fresh) rit->second += c;
      continue;
    }
    auto [m, mult] = lower_top(q);
    Scalar coef = c * Scalar::rational(1, mult);
    auto [ait, afresh] = anti.try_emplace(m, coef);
    if (!afresh) ait->second += coef;
    // subtract coef * d_x(m); its leading term cancels q exactly
    DiffPoly dm = d_x(DiffPoly::monomial(m, coef));
    for (auto& [mm, cc] : dm.terms()) {
      if (mm == q) continue;  // handled by construction
      auto [wit, wfresh] = work.try_emplace(mm, -cc);
      if (!wfresh) {
        wit->second -= cc;
        if (wit->second.is_zero()) work.erase(wit);
      }
    }
  }
  Reduction out;
  out.antiderivative = DiffPoly::from_map(std::move(anti));
  out.remainder = DiffPoly::from_map(std::move(rem));
  return out;
}

DiffPoly normal_form(const DiffPoly& f) { return reduce_mod_dx(f).remainder; }

bool is_dx_exact(const DiffPoly& f) { return normal_form(f).is_zero(); }

DiffPoly dx_antiderivative(const DiffPoly& f) {
  Reduction r = reduce_mod_dx(f);
  if (!r.remainder.is_zero())
    throw arithmetic_error("density is not a total x-derivative");
  return r.antiderivative;
}

bool in_im_dx2(const DiffPoly& f) {
  Reduction r = reduce_mod_dx(f);
  if (!r.remainder.is_zero()) return false;
  return is_dx_exact(r.antiderivative);
}

bool laurent_functional_is_zero(
    const DiffPoly& density,
    const std::vector<std::pair<Alphabet, int>>& fields) {
  for (auto& [a, idx] : fields)
    if (!variational(density, a, idx).is_zero()) return false;
  if (!variational(density, Alphabet::rho, 1).is_zero()) return false;
  // remaining obstruction: the closed-but-not-exact class r_1 / r
  Monomial logc;
  logc.vars.emplace_back(JetVar::make(Alphabet::rho, 1, 0), -1);
  logc.vars.emplace_back(JetVar::make(Alphabet::rho, 1, 1), 1);
  for (auto& [m, c] : density.terms()) {
    Monomial bare = m;
    bare.eps = 0;
    bare.hbar = 0;
    if (bare == logc && !c.is_zero()) return false;
  }
  return true;
}

long dilaton_lambda(const Monomial& m) {
  return m.factor_count() + m.eps + 2L * m.hbar;
}

DiffPoly select_dilaton(const DiffPoly& f, long lambda) {
  DiffPoly out;
  for (auto& [m, c] : f.terms())
    if (dilaton_lambda(m) == lambda) out += DiffPoly::monomial(m, c);
  return out;
}

DiffPoly dilaton_inverse_shifted(const DiffPoly& f, long shift) {
  std::vector<DiffPoly::Term> raw;
  raw.reserve(f.size());
  for (auto& [m, c] : f.terms()) {
    long lam = dilaton_lambda(m);
    if (lam == shift)
      throw arithmetic_error("dilaton inverse hit the excluded eigenvalue");
    raw.emplace_back(m, c * Scalar::rational(1, lam - shift));
  }
  std::map<Monomial, Scalar> acc;
  for (auto& [m, c] : raw) acc.emplace(m, c);
  return DiffPoly::from_map(std::move(acc));
}

}  // namespace d4dr
