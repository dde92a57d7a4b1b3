#include "stosym/context.hpp"

#include <algorithm>
#include <stdexcept>

namespace stosym {

Context::Context(std::string time, std::vector<std::string> states,
                 std::vector<ParamDecl> params, std::vector<AtomDecl> atoms)
    : time_(std::move(time)),
      states_(std::move(states)),
      params_(std::move(params)),
      atoms_(std::move(atoms)) {
  std::vector<std::string> seen{time_};
  auto check = [&seen](const std::string& n) {
    if (std::find(seen.begin(), seen.end(), n) != seen.end())
      throw std::invalid_argument("duplicate declaration: " + n);
    seen.push_back(n);
  };
  for (const auto& s : states_) check(s);
  for (const auto& p : params_) check(p.name);
  for (const auto& a : atoms_) check(a.name);
}

SymbolRole Context::role(const std::string& name) const {
  if (name == time_) return SymbolRole::Time;
  if (state_index(name) >= 0) return SymbolRole::State;
  if (param(name) != nullptr) return SymbolRole::Parameter;
  if (atom(name) != nullptr) return SymbolRole::AtomName;
  return SymbolRole::Unknown;
}

const AtomDecl* Context::atom(const std::string& name) const {
  for (const auto& a : atoms_)
    if (a.name == name) return &a;
  return nullptr;
}

const ParamDecl* Context::param(const std::string& name) const {
  for (const auto& p : params_)
    if (p.name == name) return &p;
  return nullptr;
}

int Context::state_index(const std::string& name) const {
  for (size_t i = 0; i < states_.size(); ++i)
    if (states_[i] == name) return static_cast<int>(i);
  return -1;
}

std::vector<std::string> Context::space_time() const {
  std::vector<std::string> vars{time_};
  vars.insert(vars.end(), states_.begin(), states_.end());
  return vars;
}

}  // namespace stosym
