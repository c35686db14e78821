"""Exact computer algebra for a rank-four integrable hierarchy.

Thin wrapper around the compiled extension: differential polynomials over
Q(i, sqrt2), the scalar-Lax densities and first hamiltonian operator in
normal coordinates, the dispersive deformation solver and its hbar-linear
correction, and the verification suite.
"""

from _d4dr import (
    Poly,
    densities,
    eta_bracket,
    frobenius_potential,
    functional_equal,
    parse,
    poisson_matrix,
    polylog,
    restrict,
    solve_classical,
    solve_quantum,
    star_commutator,
    verify,
)

__all__ = [
    "Poly",
    "densities",
    "eta_bracket",
    "frobenius_potential",
    "functional_equal",
    "parse",
    "poisson_matrix",
    "polylog",
    "restrict",
    "solve_classical",
    "solve_quantum",
    "star_commutator",
    "verify",
]
