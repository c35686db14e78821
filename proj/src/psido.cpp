#include "d4dr/psido.hpp"

#include <algorithm>
#include <climits>
#include <sstream>

namespace d4dr {

namespace {

const DiffPoly kZeroPoly{};

// binomial C(n,k) for arbitrary integer n, as an exact rational scalar
Scalar binomial(long n, long k) {
  mpq_class b(1);
  for (long j = 0; j < k; ++j) {
    b *= mpq_class(n - j);
    b /= mpq_class(j + 1);
  }
  return Scalar(b);
}

// derivative table of f with eps^k attached to the k-th entry
std::vector<DiffPoly> eps_dx_table(const DiffPoly& f, int kmax) {
  std::vector<DiffPoly> tab = dx_table(f, kmax);
  for (int k = 1; k <= kmax; ++k) tab[size_t(k)] *= DiffPoly::eps(k);
  return tab;
}

}  // namespace

// --- PsiDO1 basics ----------------------------------------------------------

void PsiDO1::trim() {
  size_t lead = 0;
  while (lead < c_.size() && c_[lead].is_zero()) ++lead;
  if (exact_) {
    size_t tail = 0;
    while (lead + tail < c_.size() && c_[c_.size() - 1 - tail].is_zero())
      ++tail;
    if (lead + tail >= c_.size()) {
      c_.clear();
      top_ = 0;
      return;
    }
    c_.erase(c_.end() - long(tail), c_.end());
    c_.erase(c_.begin(), c_.begin() + long(lead));
    top_ -= int(lead);
  } else {
    // keep at least the floor slot so the truncation depth survives
    if (lead >= c_.size()) {
      int floor = top_ - int(c_.size()) + 1;
      c_.assign(1, DiffPoly());
      top_ = floor;
      return;
    }
    c_.erase(c_.begin(), c_.begin() + long(lead));
    top_ -= int(lead);
  }
}

PsiDO1 PsiDO1::derivative(int k) { return monomial_op(DiffPoly(1), k); }

PsiDO1 PsiDO1::multiplication(const DiffPoly& f) { return monomial_op(f, 0); }

PsiDO1 PsiDO1::monomial_op(const DiffPoly& f, int k) {
  PsiDO1 x;
  if (f.is_zero()) return x;
  x.top_ = k;
  x.c_ = {f};
  x.exact_ = true;
  return x;
}

PsiDO1 PsiDO1::from_slots(int top, int floor, std::vector<DiffPoly> coeffs,
                          bool exact) {
  if (coeffs.size() != size_t(top - floor + 1))
    throw structure_error("operator slot count mismatch");
  PsiDO1 x;
  x.top_ = top;
  x.c_ = std::move(coeffs);
  x.exact_ = exact;
  x.trim();
  return x;
}

int PsiDO1::top() const {
  if (c_.empty()) throw structure_error("empty operator has no top power");
  return top_;
}

int PsiDO1::floor_power() const {
  if (c_.empty()) throw structure_error("empty operator has no floor power");
  return top_ - int(c_.size()) + 1;
}

const DiffPoly& PsiDO1::coeff(int k) const {
  if (c_.empty()) return kZeroPoly;  // only exact operators can be empty
  if (k > top_) return kZeroPoly;
  if (k < floor_power()) {
    if (!exact_) throw truncation_error("coefficient below truncation floor");
    return kZeroPoly;
  }
  return c_[size_t(top_ - k)];
}

bool PsiDO1::is_zero() const {
  for (auto& f : c_)
    if (!f.is_zero()) return false;
  return true;
}

PsiDO1 PsiDO1::operator-() const {
  PsiDO1 x = *this;
  for (auto& f : x.c_) f = -f;
  return x;
}

PsiDO1 add_impl(const PsiDO1& a, const PsiDO1& b, bool negate_b) {
  if (a.c_.empty()) return negate_b ? -b : b;
  if (b.c_.empty()) return a;
  int top = std::max(a.top_, b.top_);
  int fa = a.floor_power(), fb = b.floor_power();
  bool exact = a.exact_ && b.exact_;
  int floor = exact ? std::min(fa, fb)
                    : (a.exact_ ? fb : (b.exact_ ? fa : std::max(fa, fb)));
  std::vector<DiffPoly> out(size_t(top - floor + 1));
  for (int k = floor; k <= top; ++k) {
    DiffPoly v = a.coeff(k);
    if (negate_b)
      v -= b.coeff(k);
    else
      v += b.coeff(k);
    out[size_t(top - k)] = std::move(v);
  }
  return PsiDO1::from_slots(top, floor, std::move(out), exact);
}

PsiDO1 operator+(const PsiDO1& a, const PsiDO1& b) {
  return add_impl(a, b, false);
}
PsiDO1 operator-(const PsiDO1& a, const PsiDO1& b) {
  return add_impl(a, b, true);
}

std::string PsiDO1::str() const {
  std::ostringstream os;
  bool first = true;
  for (int k = top_; !c_.empty() && k >= floor_power(); --k) {
    const DiffPoly& f = coeff(k);
    if (f.is_zero()) continue;
    if (!first) os << " + ";
    first = false;
    os << "(" << f.str() << ")";
    if (k != 0) os << "*D^" << k;
  }
  if (first) os << "0";
  if (!exact_ && !c_.empty()) os << " + O(D^" << (floor_power() - 1) << ")";
  return os.str();
}

PsiDO1 scale(const PsiDO1& x, const Scalar& c) {
  return left_mul_poly(DiffPoly(c), x);
}

PsiDO1 left_mul_poly(const DiffPoly& f, const PsiDO1& x) {
  if (x.empty_range()) return x;
  int top = x.top(), floor = x.floor_power();
  std::vector<DiffPoly> out(size_t(top - floor + 1));
  for (int k = floor; k <= top; ++k) out[size_t(top - k)] = f * x.coeff(k);
  return PsiDO1::from_slots(top, floor, std::move(out), x.exact_tail());
}

// --- composition ------------------------------------------------------------

namespace {

// core product over stored slots, all output powers >= out_floor; the caller
// guarantees powers >= out_floor receive no contribution from truncated tails
PsiDO1 mul_core(const PsiDO1& a, const PsiDO1& b, int out_floor, bool exact) {
  if (a.empty_range() || b.empty_range() || a.is_zero() || b.is_zero()) {
    if (exact) return PsiDO1();
    return PsiDO1::from_slots(out_floor, out_floor, {DiffPoly()}, false);
  }
  int top = a.top() + b.top();
  if (top < out_floor)
    return PsiDO1::from_slots(out_floor, out_floor, {DiffPoly()}, exact);
  std::vector<std::map<Monomial, Scalar>> acc(size_t(top - out_floor + 1));
  for (int m = b.floor_power(); m <= b.top(); ++m) {
    const DiffPoly& bc = b.coeff(m);
    if (bc.is_zero()) continue;
    int kmax = a.top() + m - out_floor;
    if (kmax < 0) continue;
    std::vector<DiffPoly> tab = eps_dx_table(bc, kmax);
    for (int n = a.floor_power(); n <= a.top(); ++n) {
      const DiffPoly& ac = a.coeff(n);
      if (ac.is_zero()) continue;
      int klim = n + m - out_floor;
      if (klim < 0) continue;
      if (n >= 0) klim = std::min(klim, n);
      Scalar binom(1);
      for (int k = 0; k <= klim; ++k) {
        if (k > 0) {
          binom = binom * Scalar(mpq_class(n - k + 1));
          binom = binom / Scalar(mpq_class(k));
        }
        DiffPoly::mul_into(acc[size_t(top - (n + m - k))], ac, tab[size_t(k)],
                           binom);
      }
    }
  }
  std::vector<DiffPoly> out(acc.size());
  for (size_t i = 0; i < acc.size(); ++i)
    out[i] = DiffPoly::from_map(std::move(acc[i]));
  return PsiDO1::from_slots(top, out_floor, std::move(out), exact);
}

bool exact_zero(const PsiDO1& x) { return x.empty_range(); }

}  // namespace

PsiDO1 mul(const PsiDO1& a, const PsiDO1& b) {
  if (exact_zero(a) || exact_zero(b)) return PsiDO1();
  bool ea = a.exact_tail(), eb = b.exact_tail();
  if (ea && eb) {
    if (a.floor_power() >= 0)
      return mul_core(a, b, a.floor_power() + b.floor_power(), true);
    throw truncation_error(
        "product of exact operators with negative left floor needs an "
        "explicit truncation floor");
  }
  int floor = INT_MIN;
  if (!ea) floor = std::max(floor, a.floor_power() + b.top());
  if (!eb) floor = std::max(floor, b.floor_power() + a.top());
  return mul_core(a, b, floor, false);
}

PsiDO1 mul_trunc(const PsiDO1& a, const PsiDO1& b, int floor) {
  if (exact_zero(a) || exact_zero(b)) return PsiDO1();
  if (!a.exact_tail() && floor < a.floor_power() + b.top())
    throw truncation_error("left factor truncation too shallow for product");
  if (!b.exact_tail() && floor < b.floor_power() + a.top())
    throw truncation_error("right factor truncation too shallow for product");
  bool exact = a.exact_tail() && b.exact_tail() && a.floor_power() >= 0 &&
               floor <= a.floor_power() + b.floor_power();
  return mul_core(a, b, floor, exact);
}

DiffPoly mul_slot(const PsiDO1& a, const PsiDO1& b, int power) {
  if (exact_zero(a) || exact_zero(b)) return DiffPoly();
  if (!a.exact_tail() && power < a.floor_power() + b.top())
    throw truncation_error("left factor truncation too shallow for slot");
  if (!b.exact_tail() && power < b.floor_power() + a.top())
    throw truncation_error("right factor truncation too shallow for slot");
  std::map<Monomial, Scalar> acc;
  for (int m = b.floor_power(); m <= b.top(); ++m) {
    const DiffPoly& bc = b.coeff(m);
    if (bc.is_zero()) continue;
    int kmax = a.top() + m - power;
    if (kmax < 0) continue;
    std::vector<DiffPoly> tab = eps_dx_table(bc, kmax);
    for (int n = a.floor_power(); n <= a.top(); ++n) {
      const DiffPoly& ac = a.coeff(n);
      if (ac.is_zero()) continue;
      int k = n + m - power;
      if (k < 0) continue;
      if (n >= 0 && k > n) continue;
      DiffPoly::mul_into(acc, ac, tab[size_t(k)], binomial(n, k));
    }
  }
  return DiffPoly::from_map(std::move(acc));
}

PsiDO1 shift_right(const PsiDO1& a, int k) {
  if (a.empty_range()) return a;
  int top = a.top(), floor = a.floor_power();
  std::vector<DiffPoly> out;
  out.reserve(size_t(top - floor + 1));
  for (int j = top; j >= floor; --j) out.push_back(a.coeff(j));
  return PsiDO1::from_slots(top + k, floor + k, std::move(out),
                            a.exact_tail());
}

PsiDO1 power(const PsiDO1& x, int e) {
  if (e < 1) throw structure_error("operator power must be positive");
  PsiDO1 out = x;
  for (int i = 1; i < e; ++i) out = mul(out, x);
  return out;
}

PsiDO1 adjoint(const PsiDO1& x) {
  if (x.empty_range()) return x;
  int top = x.top(), floor = x.floor_power();
  bool exact = x.exact_tail() && floor >= 0;
  int out_floor = exact ? std::min(0, floor) : floor;
  std::vector<std::map<Monomial, Scalar>> acc(size_t(top - out_floor + 1));
  for (int k = floor; k <= top; ++k) {
    const DiffPoly& a = x.coeff(k);
    if (a.is_zero()) continue;
    int jmax = k - out_floor;
    if (k >= 0) jmax = std::min(jmax, k);
    if (jmax < 0) continue;
    std::vector<DiffPoly> tab = eps_dx_table(a, jmax);
    Scalar sign = (k % 2 == 0) ? Scalar(1) : Scalar(-1);
    Scalar binom(1);
    for (int j = 0; j <= jmax; ++j) {
      if (j > 0) {
        binom = binom * Scalar(mpq_class(k - j + 1));
        binom = binom / Scalar(mpq_class(j));
      }
      DiffPoly::mul_into(acc[size_t(top - (k - j))], tab[size_t(j)],
                         DiffPoly(1), sign * binom);
    }
  }
  std::vector<DiffPoly> out(acc.size());
  for (size_t i = 0; i < acc.size(); ++i)
    out[i] = DiffPoly::from_map(std::move(acc[i]));
  return PsiDO1::from_slots(top, out_floor, std::move(out), exact);
}

PsiDO1 positive_part(const PsiDO1& x) {
  if (x.empty_range() || x.top() < 0) return PsiDO1();
  int floor = std::max(0, x.floor_power());
  std::vector<DiffPoly> out;
  for (int k = x.top(); k >= floor; --k) out.push_back(x.coeff(k));
  bool exact = x.exact_tail() || x.floor_power() <= 0;
  return PsiDO1::from_slots(x.top(), floor, std::move(out), exact);
}

PsiDO1 negative_part(const PsiDO1& x) {
  if (x.empty_range()) return x;
  int top = std::min(-1, x.top());
  if (top < x.floor_power()) {
    if (x.exact_tail()) return PsiDO1();
    return PsiDO1::from_slots(x.floor_power() - 1, x.floor_power() - 1,
                              {DiffPoly()}, false);
  }
  std::vector<DiffPoly> out;
  for (int k = top; k >= x.floor_power(); --k) out.push_back(x.coeff(k));
  return PsiDO1::from_slots(top, x.floor_power(), std::move(out),
                            x.exact_tail());
}

DiffPoly res(const PsiDO1& x) { return x.coeff(-1); }

DiffPoly op_apply(const PsiDO1& x, const DiffPoly& f) {
  if (x.empty_range()) return DiffPoly();
  for (int k = std::min(-1, x.top()); k >= x.floor_power(); --k)
    if (!x.coeff(k).is_zero())
      throw structure_error("operator application needs a differential part");
  if (x.top() < 0) return DiffPoly();
  DiffPoly out;
  std::vector<DiffPoly> tab = eps_dx_table(f, x.top());
  for (int k = std::max(0, x.floor_power()); k <= x.top(); ++k) {
    const DiffPoly& a = x.coeff(k);
    if (a.is_zero()) continue;
    out += a * tab[size_t(k)];
  }
  return out;
}

PsiDO1 truncate(const PsiDO1& x, int floor) {
  if (x.empty_range())
    return PsiDO1::from_slots(floor, floor, {DiffPoly()}, true);
  if (floor <= x.floor_power()) return x;
  if (floor > x.top())
    return PsiDO1::from_slots(floor, floor, {DiffPoly()}, false);
  bool dropped = false;
  for (int k = x.floor_power(); k < floor; ++k)
    if (!x.coeff(k).is_zero()) dropped = true;
  std::vector<DiffPoly> out;
  for (int k = x.top(); k >= floor; --k) out.push_back(x.coeff(k));
  return PsiDO1::from_slots(x.top(), floor, std::move(out),
                            x.exact_tail() && !dropped);
}

PsiDO1 presented(const PsiDO1& x) {
  if (x.empty_range()) return x;
  std::vector<DiffPoly> out;
  for (int k = x.top(); k >= x.floor_power(); --k)
    out.push_back(x.coeff(k).rescale_eps_inv_sqrt2());
  return PsiDO1::from_slots(x.top(), x.floor_power(), std::move(out),
                            x.exact_tail());
}

bool coefficients_degree_zero(const PsiDO1& x) {
  if (x.empty_range()) return true;
  for (int k = x.floor_power(); k <= x.top(); ++k)
    for (auto& [m, c] : x.coeff(k).terms())
      if (m.jet_weight() != m.eps || m.hbar != 0) return false;
  return true;
}

// --- roots ------------------------------------------------------------------

namespace {

// p-th root (p = 2 or 3) of a monic operator whose top power is divisible by
// p, solved power by power from the top. The running root stays exact on its
// solved range; its p-th power is maintained incrementally through
// single-slot delta updates.
PsiDO1 root_p(const PsiDO1& l, int p, int out_floor) {
  if (l.empty_range()) throw structure_error("root of empty operator");
  int ltop = l.top();
  if (ltop % p != 0 || ltop <= 0)
    throw structure_error("root: top power not a positive multiple");
  int t = ltop / p;
  if (l.coeff(ltop) != DiffPoly(1))
    throw structure_error("root: operator not monic");
  int fl_needed = out_floor + (p - 1) * t;
  if (!l.exact_tail() && l.floor_power() > fl_needed)
    throw truncation_error("root: input truncation too shallow");

  PsiDO1 x = PsiDO1::derivative(t);
  int f3 = fl_needed;            // floor of the maintained p-th power
  int f2 = (p == 2) ? fl_needed : out_floor + t;  // floor of the square
  PsiDO1 x2 = truncate(PsiDO1::derivative(2 * t), f2);
  PsiDO1 x3 = (p == 3) ? truncate(PsiDO1::derivative(3 * t), f3) : PsiDO1();

  int imax = (t - 1) - out_floor;
  for (int i = 0; i <= imax; ++i) {
    int s = p * t - 1 - i;  // power of L being matched
    const PsiDO1& cur = (p == 2) ? x2 : x3;
    DiffPoly d = (l.coeff(s) - cur.coeff(s)) * Scalar::rational(1, p);
    if (d.is_zero()) continue;
    int ds = t - 1 - i;  // power carrying the new root coefficient
    PsiDO1 delta = PsiDO1::monomial_op(d, ds);
    PsiDO1 x2new = x2 + truncate(mul_trunc(x, delta, f2), f2) +
                   truncate(mul_trunc(delta, x, f2), f2) +
                   truncate(mul_trunc(delta, delta, f2), f2);
    if (p == 3) {
      PsiDO1 xd = mul_trunc(x, delta, f3 - t);   // X delta, deep for reuse
      PsiDO1 dd = mul_trunc(delta, delta, f3 - t);
      PsiDO1 upd = truncate(mul_trunc(x2, delta, f3), f3) +
                   truncate(mul_trunc(xd, x, f3), f3) +
                   truncate(mul_trunc(delta, x2, f3), f3) +
                   truncate(mul_trunc(x, dd, f3), f3) +
                   truncate(mul_trunc(delta, xd, f3), f3) +
                   truncate(mul_trunc(dd, x, f3), f3) +
                   truncate(mul_trunc(dd, delta, f3), f3);
      x3 = x3 + upd;
    }
    x2 = truncate(x2new, f2);
    x = x + delta;
  }
  // the true root continues below out_floor; mark the tail truncated
  std::vector<DiffPoly> v;
  for (int k = t; k >= out_floor; --k) v.push_back(x.coeff(k));
  return PsiDO1::from_slots(t, out_floor, std::move(v), false);
}

}  // namespace

PsiDO1 nth_root_first(const PsiDO1& l, int n, int floor) {
  if (n == 2 || n == 3) return root_p(l, n, floor);
  if (n == 6) {
    if (l.empty_range()) throw structure_error("root of empty operator");
    int t = l.top() / 6;
    PsiDO1 g = root_p(l, 2, floor + 2 * t);
    return root_p(g, 3, floor);
  }
  throw structure_error("unsupported root index");
}

// --- graded operators ---------------------------------------------------

int PsiDO2::min_deg() const { return comp.empty() ? 0 : comp.begin()->first; }

PsiDO2 decompose_graded(const PsiDO1& x, int eps_cap) {
  PsiDO2 out;
  out.eps_cap = eps_cap;
  out.ceiling = INT_MAX / 2;
  if (x.empty_range()) return out;
  std::map<int, std::map<int, DiffPoly>> slots;  // degree -> power -> coeff
  for (int k = x.floor_power(); k <= x.top(); ++k)
    for (auto& [m, c] : x.coeff(k).terms()) {
      int d = k + int(m.jet_weight());
      slots[d][k] += DiffPoly::monomial(m, c);
    }
  int base_floor = x.exact_tail() ? INT_MIN / 2 : x.floor_power();
  for (auto& [d, byk] : slots) {
    if (d - eps_cap < base_floor)
      throw truncation_error("graded split: truncation too shallow for degree");
    int floor = d - eps_cap;
    std::vector<DiffPoly> cs(size_t(d - floor + 1));
    for (auto& [k, f] : byk)
      if (k >= floor) cs[size_t(d - k)] = std::move(f);
    out.comp[d] = PsiDO1::from_slots(d, floor, std::move(cs), false);
  }
  return out;
}

PsiDO2 add2(const PsiDO2& a, const PsiDO2& b) {
  if (a.eps_cap != b.eps_cap) throw structure_error("eps cap mismatch");
  PsiDO2 out;
  out.eps_cap = a.eps_cap;
  out.ceiling = std::min(a.ceiling, b.ceiling);
  for (auto& [d, x] : a.comp)
    if (d <= out.ceiling) out.comp[d] = x;
  for (auto& [d, x] : b.comp) {
    if (d > out.ceiling) continue;
    auto it = out.comp.find(d);
    if (it == out.comp.end())
      out.comp[d] = x;
    else
      it->second = it->second + x;
  }
  return out;
}

PsiDO2 mul2(const PsiDO2& a, const PsiDO2& b) {
  if (a.eps_cap != b.eps_cap) throw structure_error("eps cap mismatch");
  PsiDO2 out;
  out.eps_cap = a.eps_cap;
  out.ceiling = std::min(a.ceiling + b.min_deg(), b.ceiling + a.min_deg());
  for (auto& [da, xa] : a.comp)
    for (auto& [db, xb] : b.comp) {
      int d = da + db;
      if (d > out.ceiling) continue;
      PsiDO1 prod = mul_trunc(xa, xb, d - out.eps_cap);
      auto it = out.comp.find(d);
      if (it == out.comp.end())
        out.comp[d] = std::move(prod);
      else
        it->second = it->second + prod;
    }
  for (auto it = out.comp.begin(); it != out.comp.end();)
    it = it->second.is_zero() ? out.comp.erase(it) : std::next(it);
  return out;
}

PsiDO2 adjoint2(const PsiDO2& a) {
  PsiDO2 out = a;
  for (auto& [d, x] : out.comp) x = adjoint(x);
  return out;
}

bool equal2(const PsiDO2& a, const PsiDO2& b) {
  if (a.eps_cap != b.eps_cap) throw structure_error("eps cap mismatch");
  int ceil = std::min(a.ceiling, b.ceiling);
  std::map<int, int> degs;
  for (auto& [d, x] : a.comp)
    if (d <= ceil) degs[d] = 0;
  for (auto& [d, x] : b.comp)
    if (d <= ceil) degs[d] = 0;
  const PsiDO1 zero;
  for (auto& [d, unused] : degs) {
    auto ia = a.comp.find(d);
    auto ib = b.comp.find(d);
    const PsiDO1& xa = ia == a.comp.end() ? zero : ia->second;
    const PsiDO1& xb = ib == b.comp.end() ? zero : ib->second;
    if (!(xa - xb).is_zero()) return false;
  }
  return true;
}

DiffPoly res2(const PsiDO2& a) {
  DiffPoly out;
  for (auto& [d, x] : a.comp) {
    if (d + 1 > a.eps_cap) continue;  // beyond the working eps order
    out += res(x);
  }
  return out;
}

PsiDO1 to_psido1(const PsiDO2& a, int floor) {
  PsiDO1 out = PsiDO1::from_slots(floor, floor, {DiffPoly()}, false);
  for (auto& [d, x] : a.comp) {
    if (d - a.eps_cap > floor)
      throw truncation_error("recombine: component floor above request");
    out = out + truncate(x, floor);
  }
  return out;
}

PsiDO2 sqrt_second(const PsiDO2& l, const DiffPoly& r, int mmax) {
  const int cap = l.eps_cap;
  PsiDO2 q;
  q.eps_cap = cap;
  q.ceiling = 2 * mmax + 2;
  q.comp[-1] = mul_trunc(PsiDO1::derivative(-1), PsiDO1::multiplication(r),
                         -1 - cap);
  const DiffPoly two_r = r * Scalar(2);
  const PsiDO1 rmul = PsiDO1::multiplication(r);

  for (int m = 0; m <= mmax; ++m) {
    int deg = 2 * m;  // degree of the block Q_m itself
    PsiDO1 rblock;
    {
      auto it = l.comp.find(deg);
      if (it != l.comp.end()) rblock = it->second;
    }
    for (int a2 = 0; a2 <= m - 1; ++a2) {
      auto ia = q.comp.find(2 * a2 + 1);
      auto ib = q.comp.find(2 * (m - 1 - a2) + 1);
      if (ia == q.comp.end() || ib == q.comp.end()) continue;
      rblock = rblock - mul_trunc(ia->second, ib->second, deg - cap);
    }
    // solve Q_m r + D^(-1) r Q_m D = R power by power from the top
    PsiDO1 qm;
    for (int s = deg; s >= deg - cap; --s) {
      DiffPoly have;
      if (!qm.empty_range()) {
        have = mul_slot(qm, rmul, s);
        PsiDO1 rqmd = mul(rmul, shift_right(qm, 1));
        have += mul_slot(PsiDO1::derivative(-1), rqmd, s);
      }
      DiffPoly num = rblock.coeff(s) - have;
      if (num.is_zero()) continue;
      DiffPoly qs = num.divide_exact(two_r);
      for (auto& [mm, cc] : qs.terms())
        for (auto& [code, e] : mm.vars)
          if (e < 0)
            throw arithmetic_error(
                "second-root slot not divisible by the leading field");
      qm = qm + PsiDO1::monomial_op(qs, s);
    }
    if (!qm.empty_range() && !qm.is_zero()) {
      PsiDO1 qmd = shift_right(qm, 1);
      std::vector<DiffPoly> cs;
      for (int k = 2 * m + 1; k >= 2 * m + 1 - cap; --k)
        cs.push_back(qmd.coeff(k));
      q.comp[2 * m + 1] =
          PsiDO1::from_slots(2 * m + 1, 2 * m + 1 - cap, std::move(cs), false);
    }
  }
  return q;
}

}  // namespace d4dr
