#pragma once

#include <string_view>

#include "dlab/nevanlinna.hpp"

namespace dlab {

/// Parses the surface-expression grammar over the coordinates x, y, z:
///   expr   := term (('+'|'-') term)*
///   term   := factor (('*'|'/') factor)*
///   factor := atom ('^' uint)?
///   atom   := complex-literal | 'x' | 'y' | 'z' | 'exp' '(' expr ')' | '(' expr ')'
/// Division is allowed; evaluation at a pole goes non-finite, which the
/// samplers count as a skipped draw. Throws ParseError with the byte offset
/// on malformed input, including unknown identifiers.
SurfaceFunction parse_surface_expr(std::string_view text);

}  // namespace dlab
