#pragma once

#include <string>

#include "expr.hpp"

namespace pqn {

/// Parse the expression grammar:
///   expr   := ['+'|'-'] term (('+'|'-') term)*
///   term   := factor (('*'|'/') factor)*
///   factor := base ('^' ['-'] digits)?
///   base   := digits | q<digits> | p<digits> | 'exp' '(' expr ')'
///           | fname '\''* '(' expr ')' | '(' expr ')'
/// exp arguments must normalize to linear combinations of q's with integer or
/// half-integer coefficients; formal-function arguments to integer ones.
/// Throws Error("parse", ...) with a character position on bad input.
Expr parseExpr(const std::string& text, bool allowSlot = false);

}  // namespace pqn
