#pragma once

#include <map>
#include <vector>

#include "d4dr/diffpoly.hpp"

namespace d4dr {

struct truncation_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// One-dimensional pseudo-differential operator sum_k a_k D^k with DiffPoly
// coefficients, finite above, stored down to a floor power. exact_tail()
// means every power below the floor is identically zero; otherwise powers
// below the floor are unknown (truncated) and reading them throws.
//
// Composition follows the dispersive product rule
//   a D^n . b D^m = sum_k C(n,k) a b^(k) eps^k D^(n+m-k),
// so each Leibniz term carries an explicit power of eps.
class PsiDO1 {
 public:
  PsiDO1() = default;  // zero operator, exact

  static PsiDO1 derivative(int k);                    // D^k
  static PsiDO1 multiplication(const DiffPoly& f);    // f D^0
  static PsiDO1 monomial_op(const DiffPoly& f, int k);  // f D^k
  static PsiDO1 from_slots(int top, int floor, std::vector<DiffPoly> coeffs,
                           bool exact);  // coeffs[i] at power top-i

  bool empty_range() const { return c_.empty(); }
  int top() const;           // highest stored power; throws when empty
  int floor_power() const;   // lowest stored power
  bool exact_tail() const { return exact_; }
  // coefficient of D^k; zero above top or (for exact operators) below the
  // floor; throws truncation_error below the floor of a truncated operator
  const DiffPoly& coeff(int k) const;
  bool is_zero() const;  // all stored coefficients vanish

  PsiDO1 operator-() const;
  friend PsiDO1 operator+(const PsiDO1& a, const PsiDO1& b);
  friend PsiDO1 operator-(const PsiDO1& a, const PsiDO1& b);

  std::string str() const;

 private:
  int top_ = 0;
  bool exact_ = true;
  std::vector<DiffPoly> c_;  // c_[i] = coefficient of D^(top_ - i)
  void trim();
  friend PsiDO1 add_impl(const PsiDO1&, const PsiDO1&, bool negate_b);
};

PsiDO1 scale(const PsiDO1& x, const Scalar& c);
PsiDO1 left_mul_poly(const DiffPoly& f, const PsiDO1& x);

// composition with automatic floor propagation: exact when both factors are
// exact and the left factor is purely differential (floor >= 0); throws
// truncation_error when both are exact with negative left floor (an explicit
// floor is required then)
PsiDO1 mul(const PsiDO1& a, const PsiDO1& b);
// composition truncated at an explicit floor; throws if the requested floor
// is deeper than the truncations of the factors support
PsiDO1 mul_trunc(const PsiDO1& a, const PsiDO1& b, int floor);
// single output power of a composition, with the same safety check
DiffPoly mul_slot(const PsiDO1& a, const PsiDO1& b, int power);
// right composition with D^k is a pure power shift
PsiDO1 shift_right(const PsiDO1& a, int k);

PsiDO1 power(const PsiDO1& x, int e);  // repeated mul

// formal adjoint: (a D^k)* = (-D)^k . a expanded by the product rule
PsiDO1 adjoint(const PsiDO1& x);

PsiDO1 positive_part(const PsiDO1& x);  // powers >= 0
PsiDO1 negative_part(const PsiDO1& x);  // powers <= -1
DiffPoly res(const PsiDO1& x);          // coefficient of D^(-1)

// X(f) = sum_k a_k eps^k d_x^k(f) for a purely differential operator
DiffPoly op_apply(const PsiDO1& x, const DiffPoly& f);

// drop powers below `floor` (marks the tail inexact if content is discarded)
PsiDO1 truncate(const PsiDO1& x, int floor);

// coefficient-wise presentation pass eps -> eps/sqrt2
PsiDO1 presented(const PsiDO1& x);

// every coefficient monomial has jet weight equal to its eps power (operator
// of internal degree equal to the power index slotwise)
bool coefficients_degree_zero(const PsiDO1& x);

// n-th root with leading term D^(top/n), solved power by power; n in
// {2, 3, 6}. The input must be monic with unit leading coefficient and carry
// enough tail for the requested floor.
PsiDO1 nth_root_first(const PsiDO1& l, int n, int floor);

// ---------------------------------------------------------------------------
// Degree-graded operator: finitely many homogeneous components indexed by
// internal degree (deg u^a_k = k, deg D = 1, eps degree 0). The component of
// degree d is stored down to power d - eps_cap, i.e. through eps^eps_cap.
// Degrees above `ceiling` are unknown; components below the lowest stored
// degree are assumed absent.
struct PsiDO2 {
  std::map<int, PsiDO1> comp;
  int eps_cap = 0;
  int ceiling = 0;

  bool has(int deg) const { return comp.count(deg) != 0; }
  int min_deg() const;  // lowest stored degree; 0 when empty
};

// split a PsiDO1 into homogeneous components; throws if content appears at a
// degree whose required floor lies below the input truncation
PsiDO2 decompose_graded(const PsiDO1& x, int eps_cap);

PsiDO2 add2(const PsiDO2& a, const PsiDO2& b);
PsiDO2 mul2(const PsiDO2& a, const PsiDO2& b);
PsiDO2 adjoint2(const PsiDO2& a);
// equality on every degree both sides know (up to the smaller ceiling)
bool equal2(const PsiDO2& a, const PsiDO2& b);
// sum of component residues; components whose residue would exceed eps_cap
// are skipped (they lie beyond the working eps order)
DiffPoly res2(const PsiDO2& a);
// recombine components into a single operator truncated at `floor`
PsiDO1 to_psido1(const PsiDO2& a, int floor);

// square root of the graded operator with leading part D^(-1) . r: returns
// Q = D^(-1) r + sum_{m=0..mmax} Q_m D with Q_m homogeneous of degree 2m,
// solved degree by degree from Q^2 = L. `r` is the order-0 square-root field.
PsiDO2 sqrt_second(const PsiDO2& l, const DiffPoly& r, int mmax);

}  // namespace d4dr
