#pragma once

#include <string>

#include "d4dr/diffop.hpp"

namespace d4dr {

// Parses the canonical text form produced by DiffPoly::str and used by the
// built-in tables:
//   - rationals "7" or "7/12" (no spaces around the slash)
//   - I, sqrt2, eps, hbar
//   - jet variables: alphabet name + field index + optional _order, e.g.
//     u1, ut3_2, v2_1, s3, rho, rho_4, dX, dY_2 (rho/dX/dY take no index)
//   - operators + - * ^, parentheses, and dx(f) or dx(f, k) for the total
//     x-derivative
DiffPoly parse_poly(const std::string& text);

// LaTeX renderings, deterministic term order (leading term first)
std::string latex(const DiffPoly& f);
std::string latex(const DiffOp& op);

}  // namespace d4dr
