#pragma once

#include "d4dr/dr_classical.hpp"

namespace d4dr {

// Star-product side: commutators carry explicit powers of hbar and the
// imaginary unit; scalars stay in Q(i, sqrt2).

// coefficients of the expansion prod_i Li_{-d_i}(z) = sum_j Ct_j Li_{-j}(z)
// with Li_{-d}(z) = sum_{k>=0} k^d z^k, all d_i >= 1; entry j-1 holds Ct_j,
// j = 1 .. n-1+sum(d). Values are computed from exact series samples and a
// power-basis solve, then cached.
const std::vector<Scalar>& polylog_coeffs(const std::vector<int>& d);

// re-derives both sides of the expansion on `extra` series samples beyond
// the defining ones
bool polylog_expansion_valid(const std::vector<int>& d, int extra);

// signed commutator coefficient: zero unless j matches the parity of
// n-1+sum(a); otherwise (-1)^((n-1+sum(a)-j)/2) * Ct_j
Scalar star_coeff(const std::vector<int>& a, int j);

// [f, int g dx] modulo hbar^(cap+1)
DiffPoly star_commutator(const DiffPoly& f, const DiffPoly& g_density,
                         const DrSetting& st, int hbar_cap);

// solves d_x (D-1) G' = (1/hbar)[G, H] with the hbar-extended dilaton count
DiffPoly quantum_recursion_step(const DiffPoly& g, const DiffPoly& h_density,
                                const DrSetting& st, int hbar_cap);

struct QuantumTables {
  std::map<std::pair<int, int>, DiffPoly> g;
};
QuantumTables run_quantum_recursion(const DiffPoly& h_density,
                                    const DrSetting& st, int zcap,
                                    int hbar_cap);

// candidate monomials (without the i*hbar prefactor) for the hbar-linear
// correction: weight 1, differential degree of monomial*hbar at most 0,
// irreducible mod Im d_x, no constants
std::vector<Monomial> quantum_basis(const DrSetting& st, int eps_power);

// determine the hbar-linear correction of the resolved classical Hamiltonian
// from the quantum recursion, the seed condition (constants allowed) and the
// self-consistency of the second flow; one-point normalization
// Coef_{i hbar u^1} = -1/6 when a scaling direction survives
struct QuantumSolveReport {
  DiffPoly g11;     // classical part + hbar-linear correction
  int nullity = 0;  // solution-space dimension before normalization
  int ansatz = 0;   // candidate monomial count
  int rank = 0;     // rank of the constraint rows
  std::string normalization;  // how the scaling freedom was pinned, if any
};
QuantumSolveReport solve_quantum_g11(const DiffPoly& classical_g11,
                                     const DrSetting& st, int zcap);

}  // namespace d4dr
