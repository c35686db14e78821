#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "d4dr/scalar.hpp"

namespace d4dr {

struct structure_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Jet-variable alphabets. rho is the standalone field with rho^2 playing the
// role of the fourth Lax coordinate; dX/dY are internal distribution symbols
// used by the Poisson-matrix evaluation.
enum class Alphabet : uint8_t { s = 0, v = 1, vt = 2, u = 3, ut = 4, rho = 5, dX = 6, dY = 7 };

const char* alphabet_name(Alphabet a);
std::optional<Alphabet> alphabet_from_name(const std::string& n);

// packed jet variable: order in the high bits so that numeric comparison of
// codes is (order, alphabet, index) lexicographic
struct JetVar {
  static uint32_t make(Alphabet a, int index, int order) {
    if (index < 1 || index > 9) throw structure_error("jet index out of range");
    if (order < 0 || order > 0xFFFFF) throw structure_error("jet order out of range");
    return (uint32_t(order) << 8) | (uint32_t(a) << 4) | uint32_t(index);
  }
  static Alphabet alphabet(uint32_t code) { return Alphabet((code >> 4) & 0xF); }
  static int index(uint32_t code) { return int(code & 0xF); }
  static int order(uint32_t code) { return int(code >> 8); }
  static uint32_t raise(uint32_t code) { return code + (1u << 8); }
  static uint32_t lower(uint32_t code) { return code - (1u << 8); }
};

// Monomial in jet variables times eps^e * hbar^h. Variable list is sorted by
// code; exponents are nonzero, and only rho may carry a negative exponent.
struct Monomial {
  std::vector<std::pair<uint32_t, int32_t>> vars;
  int16_t eps = 0;
  int16_t hbar = 0;

  bool operator==(const Monomial& o) const {
    return eps == o.eps && hbar == o.hbar && vars == o.vars;
  }
  // total order: descending-instance-lexicographic on variables (highest jet
  // first), then eps, then hbar; used for leading-term reduction
  bool operator<(const Monomial& o) const;

  bool is_constant() const { return vars.empty(); }
  int exponent(uint32_t code) const;
  // total number of x-derivatives, sum of order*exponent
  long jet_weight() const;
  long factor_count() const;  // sum of exponents (variables only)
  Monomial times(const Monomial& o) const;
  size_t hash() const;
};

struct MonomialHash {
  size_t operator()(const Monomial& m) const { return m.hash(); }
};

class DiffPoly {
 public:
  using Term = std::pair<Monomial, Scalar>;

  DiffPoly() = default;
  explicit DiffPoly(Scalar c);
  explicit DiffPoly(long n) : DiffPoly(Scalar(n)) {}

  static DiffPoly var(Alphabet a, int index, int order = 0);
  static DiffPoly rho(int order = 0) { return var(Alphabet::rho, 1, order); }
  static DiffPoly eps(int power = 1);
  static DiffPoly hbar(int power = 1);
  static DiffPoly monomial(Monomial m, Scalar c);

  const std::vector<Term>& terms() const { return t_; }
  bool is_zero() const { return t_.empty(); }
  size_t size() const { return t_.size(); }
  Scalar coefficient(const Monomial& m) const;
  // coefficient of the pure eps^e hbar^h constant monomial
  Scalar constant_part(int eps_pow = 0, int hbar_pow = 0) const;
  DiffPoly constant_terms() const;  // all variable-free terms

  DiffPoly operator-() const;
  DiffPoly& operator+=(const DiffPoly& o);
  DiffPoly& operator-=(const DiffPoly& o);
  friend DiffPoly operator+(DiffPoly a, const DiffPoly& b) { return a += b; }
  friend DiffPoly operator-(DiffPoly a, const DiffPoly& b) { return a -= b; }
  friend DiffPoly operator*(const DiffPoly& a, const DiffPoly& b);
  DiffPoly& operator*=(const DiffPoly& o) { return *this = *this * o; }
  DiffPoly operator*(const Scalar& c) const;
  bool operator==(const DiffPoly& o) const { return t_ == o.t_; }
  bool operator!=(const DiffPoly& o) const { return !(*this == o); }

  // out += c * a * b, fused into an accumulator map
  static void mul_into(std::map<Monomial, Scalar>& acc, const DiffPoly& a,
                       const DiffPoly& b, const Scalar& c);
  static DiffPoly from_map(std::map<Monomial, Scalar>&& acc);

  DiffPoly pow(int e) const;
  // exact division; throws if not divisible
  DiffPoly divide_exact(const DiffPoly& divisor) const;

  // structural queries
  long max_jet_order(Alphabet a, int index) const;
  std::vector<uint32_t> variables() const;  // distinct codes, sorted
  bool has_alphabet(Alphabet a) const;
  bool depends_on(Alphabet a, int index) const;

  // filters
  DiffPoly select_eps(int power) const;       // terms with eps == power
  DiffPoly select_eps_leq(int power) const;   // terms with eps <= power
  DiffPoly select_hbar(int power) const;
  DiffPoly select_hbar_leq(int power) const;
  DiffPoly drop_eps_hbar() const;  // set formal parameters to 1 (tests only)
  DiffPoly set_var_zero(Alphabet a, int index) const;  // kill a field and its jets

  // presentation pass: eps -> eps / sqrt2
  DiffPoly rescale_eps_inv_sqrt2() const;

  std::string str() const;  // canonical text form

 private:
  std::vector<Term> t_;  // sorted by monomial, no zero coefficients
  void prune_and_sort(std::vector<Term>&& raw);
  friend class DiffPolyBuilder;
};

// --- calculus -------------------------------------------------------------

// total x-derivative (raises jet orders; eps and hbar are constants)
DiffPoly d_x(const DiffPoly& f);
DiffPoly d_x(const DiffPoly& f, int k);
// memoized prolongation table f, f', ..., f^{(k)}
std::vector<DiffPoly> dx_table(const DiffPoly& f, int k);

// partial derivative with respect to one jet variable
DiffPoly partial(const DiffPoly& f, uint32_t code);
DiffPoly partial(const DiffPoly& f, Alphabet a, int index, int order);
DiffPoly partial_eps(const DiffPoly& f);

// variational derivative delta f / delta (a,index) = sum (-d_x)^k df/du_k
DiffPoly variational(const DiffPoly& f, Alphabet a, int index);

// --- gradings --------------------------------------------------------------

using Frac = mpq_class;

// differential degree: deg u^a_k = k, deg eps = -1, deg hbar = -2
long differential_deg(const Monomial& m);
struct GradingReport {
  bool homogeneous = false;
  Frac degree;  // defined when homogeneous
};
GradingReport differential_grading(const DiffPoly& f);

// CohFT weight for the u/ut alphabets: |u^1|=1, |u^2|=|u^4|=2/3, |u^3|=1/3,
// |eps|=1/6, |hbar|=4/3, independent of jet order
Frac cohft_weight(const Monomial& m);
GradingReport cohft_grading(const DiffPoly& f);
DiffPoly select_cohft_weight(const DiffPoly& f, const Frac& w);

// --- substitution ----------------------------------------------------------

// Miura-type change of alphabet: images of the order-0 fields, prolonged by
// d_x onto jets. Fields of the source alphabet not listed are a hard error.
class Miura {
 public:
  void set_image(Alphabet a, int index, DiffPoly image);
  const DiffPoly& image(Alphabet a, int index) const;
  bool has_image(Alphabet a, int index) const;

  // checks the dispersionless Jacobian at jet order 0, eps=hbar=0, fields=0
  void check_invertible() const;

  DiffPoly apply(const DiffPoly& f) const;

  // Fixed-point inversion. `domain_fields` are the keys of this map (the
  // variables `apply` substitutes); `image_fields` span the alphabet of the
  // stored image polynomials. Returns the map keyed by `image_fields` that
  // undoes this one. Throws if iteration fails to stabilize.
  Miura invert(const std::vector<std::pair<Alphabet, int>>& domain_fields,
               const std::vector<std::pair<Alphabet, int>>& image_fields) const;

 private:
  std::map<std::pair<Alphabet, int>, DiffPoly> images_;
  mutable std::map<std::pair<Alphabet, int>, std::vector<DiffPoly>> prolong_;
  const DiffPoly& prolonged(Alphabet a, int index, int order) const;
};

}  // namespace d4dr
