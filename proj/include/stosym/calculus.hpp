#pragma once

#include <map>
#include <string>

#include "stosym/canon.hpp"
#include "stosym/context.hpp"
#include "stosym/expr.hpp"

namespace stosym {

/// Exact partial derivative with respect to a declared variable; parameters
/// differentiate to zero. Atom derivative rules are applied eagerly, with a
/// nesting bound of 16 rule applications.
Expr differentiate(const Expr& e, const std::string& var, const Context& ctx);

/// Derivative on canonical forms (the workhorse used by the operators).
RatFunc rf_differentiate(const RatFunc& f, const std::string& var, const Context& ctx);

/// Simultaneous substitution; replacements are not re-substituted.
Expr substitute(const Expr& e, const std::map<std::string, Expr>& bindings);

constexpr int kAtomRuleDepthLimit = 16;

}  // namespace stosym
