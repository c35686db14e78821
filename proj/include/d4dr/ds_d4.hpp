#pragma once

#include <array>
#include <map>

#include "d4dr/diffop.hpp"
#include "d4dr/psido.hpp"
#include "d4dr/reduction.hpp"

namespace d4dr {

// Scalar Lax side of the D4 hierarchy. All densities and operator
// coefficients here use the internal dispersive convention (every derivative
// produced by a composition carries a power of eps); the presentation pass
// sigma rescales eps -> eps/sqrt2 coefficientwise and is applied only at the
// comparison boundary.

// pairing on the four flow labels: antidiagonal 6 on the first three, 2 on
// the fourth; inverse entries 1/6 and 1/2
Scalar ds_eta_upper(int a, int b);
Scalar ds_eta_lower(int a, int b);
// shifted scaling exponents: (2a-4)/6 for a=1..3, 0 for a=4
Frac ds_spectrum(int a);

struct LaxPair {
  int floor = -8;
  PsiDO1 L;   // D^6 + D^-1 sum_m (s^m D^(2m-1) + D^(2m-1) s^m) + (D^-1 r)^2
  PsiDO1 Lt;  // D . L, finite top 7
  // coefficients of the finite form at odd/even powers, in the s alphabet
  std::array<DiffPoly, 3> v_of_s;
  std::array<DiffPoly, 3> vt_of_s;
  // the even-power coefficients rewritten in the v alphabet
  std::array<DiffPoly, 3> vt_of_v;
  Miura v_in_s;  // substitutes v-alphabet densities into the s alphabet
  Miura s_in_v;
};

LaxPair build_lax(int floor = -8);

// Lt with coefficients in the v alphabet (+ r), used by the brackets
PsiDO1 lax_v_form(const LaxPair& lp, int floor = -8);

// sixth root P of L and a cache of its powers; res P^k stays exact for
// k <= 13 at the default floor
struct RootCache {
  PsiDO1 P;
  std::map<int, PsiDO1> powers;
  const PsiDO1& ensure_power(int k);
  DiffPoly res_power(int k);
};
RootCache sixth_root(const LaxPair& lp, int floor = -13);

// graded square root Q of L with blocks through degree 2*mmax+1
PsiDO2 second_root(const LaxPair& lp, int mmax = 3, int eps_cap = 6);

// first normal coordinates and the substitution maps between the three
// alphabets (s, v, ut)
struct NormalCoordinates {
  std::array<DiffPoly, 4> ut_of_s;
  std::array<DiffPoly, 4> ut_of_v;
  Miura ut_in_s;  // ut-density -> s-density
  Miura s_in_ut;
  Miura ut_in_v;
  Miura v_in_ut;
};
NormalCoordinates normal_coordinates(const LaxPair& lp, RootCache& rc);

// tau-symmetric Hamiltonian densities h_{a,p} in the s alphabet: p = -1 and
// p = 0 for a = 1..4, plus (1,1) when with_first_flow is set
std::map<std::pair<int, int>, DiffPoly> tau_densities_s(
    const LaxPair& lp, RootCache& rc, const NormalCoordinates& nc,
    bool with_first_flow);

// hierarchy bracket of two local functionals, densities in the v alphabet
// (+ r). which selects the first or second structure; the result is the
// bracket density with the 1/eps prefactor applied (may be Laurent in r).
DiffPoly bracket_ds(const DiffPoly& f_density, const DiffPoly& g_density,
                    int which, const LaxPair& lp);

// first Poisson structure in the normal coordinates, presented convention;
// the sixteen entries are independent and run on up to `jobs` threads
DiffOpMatrix poisson_matrix_first(const LaxPair& lp,
                                  const NormalCoordinates& nc, int jobs = 1);

// d f / d t for the flow generated by the density g through the presented
// operator matrix K (all in ut coordinates, plain calculus)
DiffPoly flow_derivative(const DiffPoly& f, const DiffPoly& g_density,
                         const DiffOpMatrix& k_presented);

// divide a bracket density by eps exactly; throws when not divisible
DiffPoly divide_eps(const DiffPoly& f);

}  // namespace d4dr
