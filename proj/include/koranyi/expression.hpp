#ifndef KORANYI_EXPRESSION_HPP
#define KORANYI_EXPRESSION_HPP

#include <string>

#include "koranyi/heisenberg.hpp"

namespace koranyi {

// Tiny arithmetic grammar over the circular coordinates r2 = |z|² and t:
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := ('-')* power
//   power  := atom ('^' unsigned-integer)?
//   atom   := number | 'r2' | 't' | 'sqrt' '(' expr ')' | '(' expr ')'
// Fields built from it are circular by construction.
ScalarField parse_circular_expression(const std::string& text, int n);

} // namespace koranyi

#endif
