#pragma once

#include <string>

#include "crg/geometry/polytope.hpp"

namespace crg::geometry {

// Plain-text H-rep format: one half-space per line, whitespace-separated row
// coefficients followed by the offset, printed with 17 significant digits so
// doubles round-trip exactly.  Lines starting with '#' and blank lines are
// ignored on input.
//
//   # optional comment
//   f_1 f_2 ... f_n g
//
// from_text throws std::runtime_error on ragged rows or unparsable tokens.
std::string to_text(const Polytope& P);
Polytope from_text(const std::string& text);

}  // namespace crg::geometry
