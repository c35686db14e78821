#pragma once

#include <array>
#include <map>

#include "d4dr/diffop.hpp"

// Frozen reference expressions used by the verification suite. Everything in
// this header is stated in the presented convention (derivatives carry
// eps/sqrt2) unless noted otherwise; the engine computes in the internal
// convention and is rescaled before comparison.
namespace d4dr::fx {

// scalar-Lax coordinate relations: vt^mu in terms of v jets
std::array<DiffPoly, 3> vt_of_v();

// inverse normal-coordinate map: s^1..s^3 and rho in terms of ut jets
std::array<DiffPoly, 4> s_of_ut();

// normal coordinates in terms of v jets (ut^4 = 2 rho)
std::array<DiffPoly, 4> ut_of_v();

// tau-symmetric densities in normal coordinates, keys (alpha, level) for
// (1,0), (2,0), (3,0), (4,0), (1,1); each defined modulo Im d_x
std::map<std::pair<int, int>, DiffPoly> h_densities();

// first hamiltonian operator in normal coordinates
DiffOpMatrix poisson_first();

// dispersionless first DR hamiltonian density (u alphabet)
DiffPoly dless();

// full first DR hamiltonian density (u alphabet), exact normalization
DiffPoly dr_hamiltonian();

// tau normal coordinates of the DR hierarchy in terms of u jets
std::array<DiffPoly, 4> dr_normal();

// the DR g_{1,1} density rewritten in normal coordinates (ut alphabet),
// defined modulo Im d_x
DiffPoly g11_normal();

// hbar-linear correction of the quantum hamiltonian: i*hbar times a real
// density (u alphabet), defined modulo Im d_x and constants
DiffPoly quantum_correction();

}  // namespace d4dr::fx
