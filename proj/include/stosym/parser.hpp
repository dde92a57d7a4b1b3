#pragma once

#include <stdexcept>
#include <string>

#include "stosym/context.hpp"
#include "stosym/expr.hpp"

namespace stosym {

/// Parse failure; `position` is the 1-based offset of the offending character.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string message, size_t position)
      : std::runtime_error(message + " at offset " + std::to_string(position)),
        position_(position) {}
  size_t position() const { return position_; }

 private:
  size_t position_;
};

/// Grammar:
///   expr   := term (('+'|'-') term)*
///   term   := unary (('*'|'/') unary)*
///   unary  := '-' unary | power
///   power  := primary ['^' exponent]        (right associative)
///   primary:= number | ident | ident '(' expr (',' expr)* ')' | '(' expr ')'
/// Exponents must be integer or rational literals, optionally negated or
/// parenthesized: x^2, x^-2, x^(1/2). Numbers are integers, fractions p/q
/// or decimals; decimals become exact rationals. All identifiers must be
/// declared in the context.
Expr parse(const std::string& text, const Context& ctx);

}  // namespace stosym
