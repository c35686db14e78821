#pragma once

#include <string>

#include "json.hpp"

#include "d4dr/diffop.hpp"

namespace d4dr {

// insertion-ordered documents so serialization is byte-stable
using Json = nlohmann::ordered_json;

// Canonical JSON forms. A polynomial is {"text", "terms"} with the terms in
// the engine's canonical ascending monomial order; each term carries the
// coefficient as four exact rational strings (components 1, i, sqrt2,
// i*sqrt2), the eps/hbar powers, and the jet variables.
Json poly_json(const DiffPoly& f);
// an operator is {"text", "orders": [{"order", "coeff"}]}, highest order last
Json op_json(const DiffOp& op);
Json matrix_json(const DiffOpMatrix& m);

// two-space indent plus trailing newline
std::string dump_json(const Json& j);

// writes text to path, creating parent directories as needed
void write_file(const std::string& path, const std::string& text);

}  // namespace d4dr
