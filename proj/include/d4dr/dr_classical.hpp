#pragma once

#include <array>
#include <map>
#include <vector>

#include "d4dr/diffop.hpp"
#include "d4dr/reduction.hpp"

namespace d4dr {

// Dispersive-deformation side of the correspondence, plain calculus on the
// u alphabet (no eps attached to derivatives; eps and hbar appear explicitly
// in the monomials). A setting is the list of active field labels, in the
// four-field numbering, with the induced pairing; dropping labels gives the
// restricted sub-hierarchies.
struct DrSetting {
  std::vector<int> fields;

  bool active(int a) const;
  Scalar eta_upper(int a, int b) const;
  Scalar eta_lower(int a, int b) const;

  static DrSetting full();                       // {1,2,3,4}
  static DrSetting without(std::vector<int> kill);
};

// cubic-and-higher prepotential of the rank-four Frobenius structure, as a
// polynomial in the order-0 fields
DiffPoly frobenius_potential();

// dispersionless first Hamiltonian density: (D-2) applied to the potential
DiffPoly genus_zero_g11(const DrSetting& st);

// 1/2 eta_{mn} u^m u^n
DiffPoly quadratic_seed(const DrSetting& st);

// {f, int g dx} under the operator eta d_x:
//   sum_{a,k} df/du^a_k d_x^k ( eta^{ab} d_x (delta g / delta u^b) )
DiffPoly eta_bracket(const DiffPoly& f, const DiffPoly& g_density,
                     const DrSetting& st);

// one step of the dispersive recursion: solves d_x (D - 1) g' = {g, h};
// throws when the right side is not d_x-exact or the shifted kernel is hit
DiffPoly recursion_step(const DiffPoly& g, const DiffPoly& h_density,
                        const DrSetting& st);

// densities g_{a,d} for active a and d = -1..zcap
struct DrTables {
  std::map<std::pair<int, int>, DiffPoly> g;
};
DrTables run_recursion(const DiffPoly& h_density, const DrSetting& st,
                       int zcap);

// candidate monomials for the weight-7/3 deformation at a fixed eps power:
// differential degree zero, no constants, irreducible mod Im d_x
std::vector<Monomial> deformation_basis(const DrSetting& st, int eps_power);

// determine the first Hamiltonian level by level in eps from the recursion
// solvability and the quadratic-seed condition on delta/delta u^1, with the
// two-point normalization Coef_{(u^1_1)^2 eps^2} = -1/6
struct DrSolveReport {
  DiffPoly g11;                  // resolved density, normal form mod Im d_x
  std::map<int, int> nullity;    // eps level -> solution-space dimension
  std::map<int, int> ansatz;     // eps level -> candidate monomial count
  std::map<int, int> rank;       // eps level -> rank of the constraint rows
  std::string normalization;     // how the scaling freedom was pinned
  int zcap_used = 0;
};
DrSolveReport solve_g11(const DrSetting& st, int zcap, int eps_cap);

// normal coordinates of the tau structure: eta^{am} delta(int g_{m,0})/du^1
std::array<DiffPoly, 4> dr_normal_images(const DrTables& t,
                                         const DrSetting& st);

// conjugate eta d_x by the jet Jacobian of ut = ut(u) and rewrite the
// coefficients in the ut alphabet
DiffOpMatrix transport_eta(const std::array<DiffPoly, 4>& ut_images,
                           const DrSetting& st);

// linear symmetries of the potential: sign flip of the fourth field, and the
// order-three mix of the second and fourth fields
DiffPoly flip4_pullback(const DiffPoly& f);
DiffPoly order3_pullback(const DiffPoly& f);

// kill the listed fields (and all their jets)
DiffPoly restrict_density(const DiffPoly& f, const std::vector<int>& kill);

}  // namespace d4dr
