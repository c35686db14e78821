#include "d4dr/diffpoly.hpp"

#include <algorithm>
#include <unordered_map>

#include "d4dr/linsys.hpp"

namespace d4dr {

// assembly access for the free calculus functions
class DiffPolyBuilder {
 public:
  static DiffPoly build(std::vector<DiffPoly::Term>&& raw) {
    DiffPoly r;
    r.prune_and_sort(std::move(raw));
    return r;
  }
};

const char* alphabet_name(Alphabet a) {
  switch (a) {
    case Alphabet::s: return "s";
    case Alphabet::v: return "v";
    case Alphabet::vt: return "vt";
    case Alphabet::u: return "u";
    case Alphabet::ut: return "ut";
    case Alphabet::rho: return "rho";
    case Alphabet::dX: return "dX";
    case Alphabet::dY: return "dY";
  }
  return "?";
}

std::optional<Alphabet> alphabet_from_name(const std::string& n) {
  if (n == "s") return Alphabet::s;
  if (n == "v") return Alphabet::v;
  if (n == "vt") return Alphabet::vt;
  if (n == "u") return Alphabet::u;
  if (n == "ut") return Alphabet::ut;
  if (n == "rho") return Alphabet::rho;
  if (n == "dX") return Alphabet::dX;
  if (n == "dY") return Alphabet::dY;
  return std::nullopt;
}

bool Monomial::operator<(const Monomial& o) const {
  // descending-instance comparison: walk the sorted variable lists from the
  // highest code down; bigger top instance wins, longer tail wins on ties
  size_t i = vars.size(), j = o.vars.size();
  while (i > 0 && j > 0) {
    const auto& a = vars[i - 1];
    const auto& b = o.vars[j - 1];
    if (a.first != b.first) return a.first < b.first;
    if (a.second != b.second) return a.second < b.second;
    --i;
    --j;
  }
  if (i != j) return i < j;
  if (eps != o.eps) return eps < o.eps;
  return hbar < o.hbar;
}

int Monomial::exponent(uint32_t code) const {
  for (auto& [c, e] : vars)
    if (c == code) return e;
  return 0;
}

long Monomial::jet_weight() const {
  long w = 0;
  for (auto& [c, e] : vars) w += long(JetVar::order(c)) * e;
  return w;
}

long Monomial::factor_count() const {
  long n = 0;
  for (auto& [c, e] : vars) n += e;
  return n;
}

Monomial Monomial::times(const Monomial& o) const {
  Monomial r;
  r.eps = int16_t(eps + o.eps);
  r.hbar = int16_t(hbar + o.hbar);
  r.vars.reserve(vars.size() + o.vars.size());
  size_t i = 0, j = 0;
  while (i < vars.size() || j < o.vars.size()) {
    if (j == o.vars.size() ||
        (i < vars.size() && vars[i].first < o.vars[j].first)) {
      r.vars.push_back(vars[i++]);
    } else if (i == vars.size() || o.vars[j].first < vars[i].first) {
      r.vars.push_back(o.vars[j++]);
    } else {
      int32_t e = vars[i].second + o.vars[j].second;
      if (e != 0) r.vars.emplace_back(vars[i].first, e);
      ++i;
      ++j;
    }
  }
  return r;
}

size_t Monomial::hash() const {
  uint64_t h = 1469598103934665603ull;
  auto mix = [&h](uint64_t x) {
    h ^= x;
    h *= 1099511628211ull;
  };
  for (auto& [c, e] : vars) {
    mix(c);
    mix(uint64_t(uint32_t(e)));
  }
  mix(uint64_t(uint16_t(eps)));
  mix(uint64_t(uint16_t(hbar)) << 16);
  return size_t(h);
}

namespace {

// exponent shift on a sorted variable list; drops zeros, keeps order
std::vector<std::pair<uint32_t, int32_t>> shift_exp(
    const std::vector<std::pair<uint32_t, int32_t>>& vars, uint32_t code,
    int32_t delta) {
  std::vector<std::pair<uint32_t, int32_t>> out;
  out.reserve(vars.size() + 1);
  bool placed = false;
  for (auto& [c, e] : vars) {
    if (c == code) {
      int32_t ne = e + delta;
      if (ne != 0) out.emplace_back(c, ne);
      placed = true;
    } else {
      if (!placed && c > code) {
        if (delta != 0) out.emplace_back(code, delta);
        placed = true;
      }
      out.emplace_back(c, e);
    }
  }
  if (!placed && delta != 0) out.emplace_back(code, delta);
  return out;
}

bool negative_exponent_ok(uint32_t code) {
  return JetVar::alphabet(code) == Alphabet::rho && JetVar::order(code) == 0;
}

}  // namespace

DiffPoly::DiffPoly(Scalar c) {
  if (!c.is_zero()) t_.emplace_back(Monomial{}, std::move(c));
}

DiffPoly DiffPoly::var(Alphabet a, int index, int order) {
  Monomial m;
  m.vars.emplace_back(JetVar::make(a, index, order), 1);
  DiffPoly p;
  p.t_.emplace_back(std::move(m), Scalar(1));
  return p;
}

DiffPoly DiffPoly::eps(int power) {
  Monomial m;
  m.eps = int16_t(power);
  DiffPoly p;
  p.t_.emplace_back(std::move(m), Scalar(1));
  return p;
}

DiffPoly DiffPoly::hbar(int power) {
  Monomial m;
  m.hbar = int16_t(power);
  DiffPoly p;
  p.t_.emplace_back(std::move(m), Scalar(1));
  return p;
}

DiffPoly DiffPoly::monomial(Monomial m, Scalar c) {
  // canonicalize caller-supplied variable lists: ascending codes, merged
  // repeats, no zero exponents
  std::sort(m.vars.begin(), m.vars.end(),
            [](auto& a, auto& b) { return a.first < b.first; });
  std::vector<std::pair<uint32_t, int32_t>> merged;
  merged.reserve(m.vars.size());
  for (auto& [code, e] : m.vars) {
    if (!merged.empty() && merged.back().first == code)
      merged.back().second += e;
    else
      merged.emplace_back(code, e);
    if (merged.back().second == 0) merged.pop_back();
  }
  m.vars = std::move(merged);
  DiffPoly p;
  if (!c.is_zero()) p.t_.emplace_back(std::move(m), std::move(c));
  return p;
}

Scalar DiffPoly::coefficient(const Monomial& m) const {
  auto it = std::lower_bound(
      t_.begin(), t_.end(), m,
      [](const Term& t, const Monomial& mm) { return t.first < mm; });
  if (it != t_.end() && it->first == m) return it->second;
  return Scalar();
}

Scalar DiffPoly::constant_part(int eps_pow, int hbar_pow) const {
  Monomial m;
  m.eps = int16_t(eps_pow);
  m.hbar = int16_t(hbar_pow);
  return coefficient(m);
}

DiffPoly DiffPoly::constant_terms() const {
  DiffPoly out;
  for (auto& [m, c] : t_)
    if (m.is_constant()) out.t_.emplace_back(m, c);
  return out;
}

DiffPoly DiffPoly::operator-() const {
  DiffPoly r = *this;
  for (auto& [m, c] : r.t_) c = -c;
  return r;
}

DiffPoly& DiffPoly::operator+=(const DiffPoly& o) {
  if (o.t_.empty()) return *this;
  if (t_.empty()) {
    t_ = o.t_;
    return *this;
  }
  std::vector<Term> out;
  out.reserve(t_.size() + o.t_.size());
  size_t i = 0, j = 0;
  while (i < t_.size() || j < o.t_.size()) {
    if (j == o.t_.size() || (i < t_.size() && t_[i].first < o.t_[j].first)) {
      out.push_back(std::move(t_[i++]));
    } else if (i == t_.size() || o.t_[j].first < t_[i].first) {
      out.push_back(o.t_[j++]);
    } else {
      Scalar c = t_[i].second + o.t_[j].second;
      if (!c.is_zero()) out.emplace_back(t_[i].first, std::move(c));
      ++i;
      ++j;
    }
  }
  t_ = std::move(out);
  return *this;
}

DiffPoly& DiffPoly::operator-=(const DiffPoly& o) {
  return *this += -o;  // simple; the negation copy is cheap relative to merge
}

void DiffPoly::prune_and_sort(std::vector<Term>&& raw) {
  std::sort(raw.begin(), raw.end(),
            [](const Term& a, const Term& b) { return a.first < b.first; });
  t_.clear();
  t_.reserve(raw.size());
  for (auto& tm : raw) {
    if (!t_.empty() && t_.back().first == tm.first) {
      t_.back().second += tm.second;
      if (t_.back().second.is_zero()) t_.pop_back();
    } else if (!tm.second.is_zero()) {
      t_.push_back(std::move(tm));
    }
  }
}

void DiffPoly::mul_into(std::map<Monomial, Scalar>& acc, const DiffPoly& a,
                        const DiffPoly& b, const Scalar& c) {
  if (c.is_zero()) return;
  for (auto& [ma, ca] : a.t_) {
    Scalar f = ca * c;
    for (auto& [mb, cb] : b.t_) {
      Scalar v = f * cb;
      auto [it, fresh] = acc.try_emplace(ma.times(mb), v);
      if (!fresh) {
        it->second += v;
        if (it->second.is_zero()) acc.erase(it);
      }
    }
  }
}

DiffPoly DiffPoly::from_map(std::map<Monomial, Scalar>&& acc) {
  DiffPoly r;
  r.t_.reserve(acc.size());
  for (auto& [m, c] : acc)
    if (!c.is_zero()) r.t_.emplace_back(m, std::move(c));
  return r;
}

DiffPoly operator*(const DiffPoly& a, const DiffPoly& b) {
  if (a.is_zero() || b.is_zero()) return DiffPoly();
  std::unordered_map<Monomial, Scalar, MonomialHash> acc;
  acc.reserve(a.size() * 2);
  for (auto& [ma, ca] : a.t_)
    for (auto& [mb, cb] : b.t_) {
      Scalar v = ca * cb;
      auto [it, fresh] = acc.try_emplace(ma.times(mb), v);
      if (!fresh) it->second += v;
    }
  std::vector<DiffPoly::Term> raw(acc.begin(), acc.end());
  return DiffPolyBuilder::build(std::move(raw));
}

DiffPoly DiffPoly::operator*(const Scalar& c) const {
  if (c.is_zero()) return DiffPoly();
  DiffPoly r = *this;
  for (auto& [m, v] : r.t_) v *= c;
  return r;
}

DiffPoly DiffPoly::pow(int e) const {
  if (e < 0) throw structure_error("negative power of a polynomial");
  DiffPoly r(Scalar(1));
  DiffPoly b = *this;
  while (e > 0) {
    if (e & 1) r = r * b;
    if (e >>= 1) b = b * b;
  }
  return r;
}

DiffPoly DiffPoly::divide_exact(const DiffPoly& divisor) const {
  if (divisor.size() != 1)
    throw structure_error("exact division requires a single-term divisor");
  const Monomial& dm = divisor.t_[0].first;
  Scalar inv = divisor.t_[0].second.inverse();
  DiffPoly r;
  r.t_.reserve(t_.size());
  for (auto& [m, c] : t_) {
    Monomial q;
    q.eps = int16_t(m.eps - dm.eps);
    q.hbar = int16_t(m.hbar - dm.hbar);
    if (q.eps < 0 || q.hbar < 0)
      throw arithmetic_error("not divisible: eps/hbar power underflow");
    q.vars = m.vars;
    for (auto& [c2, e2] : dm.vars) q.vars = shift_exp(q.vars, c2, -e2);
    for (auto& [c2, e2] : q.vars)
      if (e2 < 0 && !negative_exponent_ok(c2))
        throw arithmetic_error("not divisible: variable exponent underflow");
    r.t_.emplace_back(std::move(q), c * inv);
  }
  std::sort(r.t_.begin(), r.t_.end(),
            [](const Term& a, const Term& b) { return a.first < b.first; });
  return r;
}

long DiffPoly::max_jet_order(Alphabet a, int index) const {
  long k = -1;
  for (auto& [m, c] : t_)
    for (auto& [code, e] : m.vars)
      if (JetVar::alphabet(code) == a && JetVar::index(code) == index)
        k = std::max(k, long(JetVar::order(code)));
  return k;
}

std::vector<uint32_t> DiffPoly::variables() const {
  std::vector<uint32_t> out;
  for (auto& [m, c] : t_)
    for (auto& [code, e] : m.vars) out.push_back(code);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool DiffPoly::has_alphabet(Alphabet a) const {
  for (auto& [m, c] : t_)
    for (auto& [code, e] : m.vars)
      if (JetVar::alphabet(code) == a) return true;
  return false;
}

bool DiffPoly::depends_on(Alphabet a, int index) const {
  for (auto& [m, c] : t_)
    for (auto& [code, e] : m.vars)
      if (JetVar::alphabet(code) == a && JetVar::index(code) == index)
        return true;
  return false;
}

DiffPoly DiffPoly::select_eps(int power) const {
  DiffPoly r;
  for (auto& [m, c] : t_)
    if (m.eps == power) r.t_.emplace_back(m, c);
  return r;
}

DiffPoly DiffPoly::select_eps_leq(int power) const {
  DiffPoly r;
  for (auto& [m, c] : t_)
    if (m.eps <= power) r.t_.emplace_back(m, c);
  return r;
}

DiffPoly DiffPoly::select_hbar(int power) const {
  DiffPoly r;
  for (auto& [m, c] : t_)
    if (m.hbar == power) r.t_.emplace_back(m, c);
  return r;
}

DiffPoly DiffPoly::select_hbar_leq(int power) const {
  DiffPoly r;
  for (auto& [m, c] : t_)
    if (m.hbar <= power) r.t_.emplace_back(m, c);
  return r;
}

DiffPoly DiffPoly::drop_eps_hbar() const {
  std::vector<Term> raw;
  raw.reserve(t_.size());
  for (auto& [m, c] : t_) {
    Monomial mm = m;
    mm.eps = 0;
    mm.hbar = 0;
    raw.emplace_back(std::move(mm), c);
  }
  return DiffPolyBuilder::build(std::move(raw));
}

DiffPoly DiffPoly::set_var_zero(Alphabet a, int index) const {
  DiffPoly r;
  for (auto& [m, c] : t_) {
    bool kill = false;
    for (auto& [code, e] : m.vars)
      if (JetVar::alphabet(code) == a && JetVar::index(code) == index) {
        kill = true;
        break;
      }
    if (!kill) r.t_.emplace_back(m, c);
  }
  return r;
}

DiffPoly DiffPoly::rescale_eps_inv_sqrt2() const {
  DiffPoly r = *this;
  Scalar half_sqrt2 = Scalar::sqrt2() * Scalar::rational(1, 2);  // 1/sqrt2
  std::vector<Scalar> pw{Scalar(1)};
  for (auto& [m, c] : r.t_) {
    while (int(pw.size()) <= m.eps) pw.push_back(pw.back() * half_sqrt2);
    if (m.eps > 0) c *= pw[m.eps];
    if (m.eps < 0) throw structure_error("negative eps power in rescale");
  }
  return r;
}

// --- calculus ---------------------------------------------------------------

DiffPoly d_x(const DiffPoly& f) {
  std::vector<DiffPoly::Term> raw;
  raw.reserve(f.size() * 3);
  for (auto& [m, c] : f.terms()) {
    for (size_t i = 0; i < m.vars.size(); ++i) {
      auto [code, e] = m.vars[i];
      Monomial mm;
      mm.eps = m.eps;
      mm.hbar = m.hbar;
      mm.vars = shift_exp(m.vars, code, -1);
      mm.vars = shift_exp(mm.vars, JetVar::raise(code), +1);
      raw.emplace_back(std::move(mm), c * Scalar(e));
    }
  }
  return DiffPolyBuilder::build(std::move(raw));
}

DiffPoly d_x(const DiffPoly& f, int k) {
  DiffPoly r = f;
  for (int i = 0; i < k; ++i) r = d_x(r);
  return r;
}

std::vector<DiffPoly> dx_table(const DiffPoly& f, int k) {
  std::vector<DiffPoly> out;
  out.reserve(k + 1);
  out.push_back(f);
  for (int i = 1; i <= k; ++i) out.push_back(d_x(out.back()));
  return out;
}

DiffPoly partial(const DiffPoly& f, uint32_t code) {
  std::vector<DiffPoly::Term> raw;
  for (auto& [m, c] : f.terms()) {
    int e = m.exponent(code);
    if (e == 0) continue;
    Monomial mm;
    mm.eps = m.eps;
    mm.hbar = m.hbar;
    mm.vars = shift_exp(m.vars, code, -1);
    raw.emplace_back(std::move(mm), c * Scalar(e));
  }
  return DiffPolyBuilder::build(std::move(raw));
}

DiffPoly partial(const DiffPoly& f, Alphabet a, int index, int order) {
  return partial(f, JetVar::make(a, index, order));
}

DiffPoly partial_eps(const DiffPoly& f) {
  std::vector<DiffPoly::Term> raw;
  for (auto& [m, c] : f.terms()) {
    if (m.eps == 0) continue;
    Monomial mm = m;
    mm.eps = int16_t(m.eps - 1);
    raw.emplace_back(std::move(mm), c * Scalar(m.eps));
  }
  return DiffPolyBuilder::build(std::move(raw));
}

DiffPoly variational(const DiffPoly& f, Alphabet a, int index) {
  long top = f.max_jet_order(a, index);
  DiffPoly acc;
  for (long k = 0; k <= top; ++k) {
    DiffPoly p = partial(f, a, index, int(k));
    if (p.is_zero()) continue;
    p = d_x(p, int(k));
    if (k % 2)
      acc -= p;
    else
      acc += p;
  }
  return acc;
}

// --- gradings ----------------------------------------------------------------

long differential_deg(const Monomial& m) {
  return m.jet_weight() - m.eps - 2L * m.hbar;
}

GradingReport differential_grading(const DiffPoly& f) {
  GradingReport rep;
  bool first = true;
  for (auto& [m, c] : f.terms()) {
    Frac d(differential_deg(m));
    if (first) {
      rep.degree = d;
      first = false;
    } else if (d != rep.degree) {
      return rep;  // homogeneous stays false
    }
  }
  rep.homogeneous = !first;
  return rep;
}

Frac cohft_weight(const Monomial& m) {
  static const Frac wt[5] = {Frac(0), Frac(1), Frac(2, 3), Frac(1, 3),
                             Frac(2, 3)};
  Frac w = Frac(m.eps) / 6 + Frac(4 * m.hbar) / 3;
  for (auto& [code, e] : m.vars) {
    Alphabet a = JetVar::alphabet(code);
    if (a != Alphabet::u && a != Alphabet::ut)
      throw structure_error("CohFT weight defined on u/ut alphabets only");
    w += wt[JetVar::index(code)] * e;
  }
  return w;
}

GradingReport cohft_grading(const DiffPoly& f) {
  GradingReport rep;
  bool first = true;
  for (auto& [m, c] : f.terms()) {
    Frac w = cohft_weight(m);
    if (first) {
      rep.degree = w;
      first = false;
    } else if (w != rep.degree) {
      return rep;
    }
  }
  rep.homogeneous = !first;
  return rep;
}

DiffPoly select_cohft_weight(const DiffPoly& f, const Frac& w) {
  DiffPoly out;
  for (auto& [m, c] : f.terms())
    if (cohft_weight(m) == w) out += DiffPoly::monomial(m, c);
  return out;
}

// --- Miura -------------------------------------------------------------------

void Miura::set_image(Alphabet a, int index, DiffPoly image) {
  images_[{a, index}] = std::move(image);
  prolong_.clear();
}

const DiffPoly& Miura::image(Alphabet a, int index) const {
  auto it = images_.find({a, index});
  if (it == images_.end()) throw structure_error("Miura: missing field image");
  return it->second;
}

bool Miura::has_image(Alphabet a, int index) const {
  return images_.count({a, index}) != 0;
}

const DiffPoly& Miura::prolonged(Alphabet a, int index, int order) const {
  auto& tab = prolong_[{a, index}];
  if (tab.empty()) tab.push_back(image(a, index));
  while (int(tab.size()) <= order) tab.push_back(d_x(tab.back()));
  return tab[order];
}

void Miura::check_invertible() const {
  // dispersionless Jacobian at the origin: d(image of field_i)/d(field_j)
  // restricted to jet order 0, eps=hbar=0, evaluated at zero fields
  std::vector<std::pair<Alphabet, int>> keys;
  for (auto& [k, v] : images_) keys.push_back(k);
  const size_t n = keys.size();
  // collect the target fields appearing at jet order 0
  std::vector<uint32_t> target;
  for (auto& [k, img] : images_)
    for (auto code : img.variables())
      if (JetVar::order(code) == 0) target.push_back(code);
  std::sort(target.begin(), target.end());
  target.erase(std::unique(target.begin(), target.end()), target.end());
  if (target.size() < n) throw structure_error("non-invertible dispersionless Jacobian");
  // matrix rank over the first n candidate columns must be n: test via solve
  LinearSystem sys(n);
  for (auto code : target) {
    std::vector<std::pair<size_t, Scalar>> row;
    for (size_t j = 0; j < n; ++j) {
      Monomial lin;
      lin.vars.emplace_back(code, 1);
      Scalar c = images_.at(keys[j]).coefficient(lin);
      if (!c.is_zero()) row.emplace_back(j, c);
    }
    sys.add_row(std::move(row), Scalar());
  }
  auto sol = solve(sys);
  if (!sol.consistent || sol.nullity() != 0)
    throw structure_error("non-invertible dispersionless Jacobian");
}

DiffPoly Miura::apply(const DiffPoly& f) const {
  DiffPoly out;
  for (auto& [m, c] : f.terms()) {
    DiffPoly term(c);
    Monomial passthrough;
    passthrough.eps = m.eps;
    passthrough.hbar = m.hbar;
    term *= DiffPoly::monomial(passthrough, Scalar(1));
    for (auto& [code, e] : m.vars) {
      Alphabet a = JetVar::alphabet(code);
      int idx = JetVar::index(code);
      if (!has_image(a, idx))
        throw structure_error(std::string("Miura: no image for field ") +
                              alphabet_name(a) + std::to_string(idx));
      if (e < 0) throw structure_error("Miura: negative exponent substitution");
      term *= prolonged(a, idx, JetVar::order(code)).pow(e);
      if (term.is_zero()) break;
    }
    out += term;
  }
  return out;
}

Miura Miura::invert(
    const std::vector<std::pair<Alphabet, int>>& domain_fields,
    const std::vector<std::pair<Alphabet, int>>& image_fields) const {
  check_invertible();
  const size_t n = domain_fields.size();
  if (image_fields.size() != n)
    throw structure_error("Miura: field count mismatch in inversion");

  // domain field i maps to a polynomial in the image alphabet; split it as
  // L[i][j] image_j + nonlinear rest
  std::vector<std::vector<Scalar>> L(n, std::vector<Scalar>(n));
  std::vector<DiffPoly> nonlin(n);
  for (size_t i = 0; i < n; ++i) {
    DiffPoly img = image(domain_fields[i].first, domain_fields[i].second);
    for (size_t j = 0; j < n; ++j) {
      Monomial lin;
      lin.vars.emplace_back(
          JetVar::make(image_fields[j].first, image_fields[j].second, 0), 1);
      L[i][j] = img.coefficient(lin);
      img -= DiffPoly::var(image_fields[j].first, image_fields[j].second) *
             L[i][j];
    }
    nonlin[i] = std::move(img);
  }
  // invert L column by column
  std::vector<std::vector<Scalar>> Linv(n, std::vector<Scalar>(n));
  for (size_t col = 0; col < n; ++col) {
    LinearSystem sys(n);
    for (size_t i = 0; i < n; ++i) {
      std::vector<std::pair<size_t, Scalar>> row;
      for (size_t j = 0; j < n; ++j)
        if (!L[i][j].is_zero()) row.emplace_back(j, L[i][j]);
      sys.add_row(std::move(row), Scalar(col == i ? 1 : 0));
    }
    auto sol = solve(sys);
    if (!sol.consistent || sol.nullity() != 0)
      throw structure_error("non-invertible dispersionless Jacobian");
    for (size_t j = 0; j < n; ++j) Linv[j][col] = sol.particular[j];
  }

  auto linear_solve = [&](const std::vector<DiffPoly>& y) {
    std::vector<DiffPoly> x(n);
    for (size_t i = 0; i < n; ++i)
      for (size_t j = 0; j < n; ++j) x[i] += y[j] * Linv[i][j];
    return x;
  };

  // fixed point: image_j = g_j(domain) with g = Linv (domain - nonlin(g))
  std::vector<DiffPoly> target(n);
  for (size_t i = 0; i < n; ++i)
    target[i] = DiffPoly::var(domain_fields[i].first, domain_fields[i].second);

  std::vector<DiffPoly> g = linear_solve(target);
  for (int iter = 0; iter < 64; ++iter) {
    Miura cur;
    for (size_t j = 0; j < n; ++j)
      cur.set_image(image_fields[j].first, image_fields[j].second, g[j]);
    std::vector<DiffPoly> rhs(n);
    for (size_t i = 0; i < n; ++i)
      rhs[i] = target[i] - cur.apply(nonlin[i]);
    std::vector<DiffPoly> next = linear_solve(rhs);
    size_t total = 0;
    for (auto& p : next) total += p.terms().size();
    if (total > 20000)
      throw structure_error(
          "Miura inversion did not stabilize (non-polynomial inverse?)");
    if (next == g) {
      Miura inv;
      for (size_t j = 0; j < n; ++j)
        inv.set_image(image_fields[j].first, image_fields[j].second, g[j]);
      // round-trip sanity: substituting the inverse into each stored image
      // must return the matching domain variable
      for (size_t i = 0; i < n; ++i) {
        DiffPoly back = inv.apply(
            image(domain_fields[i].first, domain_fields[i].second));
        if (back != target[i])
          throw structure_error("Miura inversion round-trip failed");
      }
      return inv;
    }
    g = std::move(next);
  }
  throw structure_error("Miura inversion did not stabilize (non-polynomial inverse?)");
}

// --- printing ----------------------------------------------------------------

namespace {

std::string var_name(uint32_t code) {
  Alphabet a = JetVar::alphabet(code);
  std::string n = alphabet_name(a);
  // single-field alphabets print without an index digit
  if (a != Alphabet::rho && a != Alphabet::dX && a != Alphabet::dY)
    n += std::to_string(JetVar::index(code));
  int k = JetVar::order(code);
  if (k > 0) n += "_" + std::to_string(k);
  return n;
}

}  // namespace

std::string DiffPoly::str() const {
  if (t_.empty()) return "0";
  std::string out;
  // leading term first: iterate in descending monomial order
  for (auto it = t_.rbegin(); it != t_.rend(); ++it) {
    const Monomial& m = it->first;
    Scalar c = it->second;
    std::string sign;
    if (c.is_rational() && sgn(c.comp(0)) < 0) {
      sign = out.empty() ? "-" : " - ";
      c = -c;
    } else {
      sign = out.empty() ? "" : " + ";
    }
    std::vector<std::string> factors;
    bool coef_is_one = c.is_rational() && c.comp(0) == 1;
    if (!coef_is_one) {
      std::string cs = c.str();
      if (!c.is_rational()) cs = "(" + cs + ")";
      factors.push_back(cs);
    }
    for (auto& [code, e] : m.vars) {
      std::string v = var_name(code);
      if (e != 1) v += "^" + std::to_string(e);
      factors.push_back(v);
    }
    if (m.eps != 0)
      factors.push_back(m.eps == 1 ? "eps" : "eps^" + std::to_string(m.eps));
    if (m.hbar != 0)
      factors.push_back(m.hbar == 1 ? "hbar" : "hbar^" + std::to_string(m.hbar));
    if (factors.empty()) factors.push_back("1");
    std::string term = factors[0];
    for (size_t i = 1; i < factors.size(); ++i) term += "*" + factors[i];
    out += sign + term;
  }
  return out;
}

}  // namespace d4dr
