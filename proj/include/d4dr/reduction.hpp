#pragma once

#include "d4dr/diffpoly.hpp"

namespace d4dr {

// Leading-term reduction modulo total x-derivatives. The monomial order of
// DiffPoly makes the leading monomial of d_x(m) injective in m, so a density
// splits uniquely as f = d_x(A) + N with N spanned by irreducible monomials.
// Requires polynomial input (no negative exponents anywhere).

// true iff m is the leading monomial of d_x of some monomial, i.e. the top
// instance has order >= 1, bare exponent 1, and the next instance sits at
// least one order below it
bool monomial_reducible(const Monomial& m);

struct Reduction {
  DiffPoly antiderivative;  // A
  DiffPoly remainder;       // N(f), supported on irreducible monomials
};

Reduction reduce_mod_dx(const DiffPoly& f);
DiffPoly normal_form(const DiffPoly& f);

bool is_dx_exact(const DiffPoly& f);
// antiderivative of an exact density; throws arithmetic_error otherwise
DiffPoly dx_antiderivative(const DiffPoly& f);
// f in the image of d_x^2
bool in_im_dx2(const DiffPoly& f);

// density compared modulo Im d_x and constants (the natural equivalence for
// integrated quantities)
class LocalFunctional {
 public:
  LocalFunctional() = default;
  explicit LocalFunctional(const DiffPoly& density)
      : nf_(d4dr::normal_form(density)) {
    nf_ -= nf_.constant_terms();
  }
  const DiffPoly& normal_form() const { return nf_; }
  bool operator==(const LocalFunctional& o) const { return nf_ == o.nf_; }
  bool operator!=(const LocalFunctional& o) const { return !(*this == o); }
  bool is_zero() const { return nf_.is_zero(); }

 private:
  DiffPoly nf_;
};

// Zero test for integrals of densities that may carry negative powers of the
// square-root field r (peeling handles only polynomial densities).  A Laurent
// density integrates to zero iff every variational derivative vanishes and the
// coefficient of the single non-exact closed class r_1/r vanishes; additive
// constants integrate to zero by convention.  `fields` lists the order-0 jet
// variables of the alphabet in use.
bool laurent_functional_is_zero(
    const DiffPoly& density,
    const std::vector<std::pair<Alphabet, int>>& fields);

// scaling weight under u^a_k d/du^a_k + eps d/deps + 2 hbar d/dhbar
long dilaton_lambda(const Monomial& m);
DiffPoly select_dilaton(const DiffPoly& f, long lambda);
// applies (D - shift)^{-1} componentwise; throws if the shift eigenspace is hit
DiffPoly dilaton_inverse_shifted(const DiffPoly& f, long shift);

}  // namespace d4dr
