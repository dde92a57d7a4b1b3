#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "stosym/expr.hpp"

namespace stosym {

struct ParamDecl {
  std::string name;
  bool nonzero = false;
  bool positive = false;
};

/// A declared opaque function symbol, e.g. kp(x) standing for k'(x).
///
/// Each formal argument may carry a derivative rule: an expression over the
/// formals (and parameters, and any declared atom) giving the partial
/// derivative of the atom with respect to that argument. Rules are applied
/// eagerly during differentiation. The optional numeric model is a closed
/// form used only for sampling; it should satisfy the rules exactly.
struct AtomDecl {
  std::string name;
  std::vector<std::string> formals;
  std::map<std::string, Expr> rules;  // formal name -> derivative expression
  std::optional<Expr> numeric_model;
};

enum class SymbolRole { Time, State, Parameter, AtomName, Unknown };

/// Declaration set shared by every expression of one problem: the time
/// variable, state variables (ordered), parameters and function atoms.
class Context {
 public:
  Context() = default;
  Context(std::string time, std::vector<std::string> states,
          std::vector<ParamDecl> params, std::vector<AtomDecl> atoms = {});

  const std::string& time() const { return time_; }
  const std::vector<std::string>& states() const { return states_; }
  const std::vector<ParamDecl>& params() const { return params_; }
  const std::vector<AtomDecl>& atoms() const { return atoms_; }

  SymbolRole role(const std::string& name) const;
  bool declared(const std::string& name) const { return role(name) != SymbolRole::Unknown; }
  const AtomDecl* atom(const std::string& name) const;
  const ParamDecl* param(const std::string& name) const;
  int state_index(const std::string& name) const;  // -1 when not a state

  /// Variables a coefficient expression may depend on: time then states.
  std::vector<std::string> space_time() const;

 private:
  std::string time_ = "t";
  std::vector<std::string> states_;
  std::vector<ParamDecl> params_;
  std::vector<AtomDecl> atoms_;
};

}  // namespace stosym
