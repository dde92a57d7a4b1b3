#include "stosym/calculus.hpp"

#include <stdexcept>

namespace stosym {

namespace {

struct DiffState {
  const Context& ctx;
  int rule_depth = 0;
};

RatFunc diff_rf(const RatFunc& f, const std::string& var, DiffState& st);

RatFunc diff_expr(const Expr& e, const std::string& var, DiffState& st) {
  return diff_rf(canon(e, st.ctx), var, st);
}

// Derivative of a single generator; returns a canonical quotient.
RatFunc diff_gen(const Gen& g, const std::string& var, DiffState& st) {
  switch (g.tag) {
    case Gen::Tag::Symbol:
      return rf_const(g.name == var ? 1 : 0);
    case Gen::Tag::Radical: {
      // (b^(1/q))' = (1/q) b' b^(1/q - 1)
      RatFunc db = diff_expr(g.base, var, st);
      if (db.is_zero()) return RatFunc{};
      RatFunc self = rf_gen(g, 1 - g.root);  // folds through the base
      return rf_mul(rf_mul(rf_const(Rational(1, g.root)), db), self);
    }
    case Gen::Tag::Call: {
      const std::string& fn = g.name;
      if (fn == "ln") {
        RatFunc a = canon(g.args[0], st.ctx);
        RatFunc da = diff_rf(a, var, st);
        if (da.is_zero()) return RatFunc{};
        return rf_div(da, a);
      }
      if (fn == "exp") {
        RatFunc da = diff_expr(g.args[0], var, st);
        if (da.is_zero()) return RatFunc{};
        return rf_mul(da, rf_gen(g));
      }
      if (fn == "sin" || fn == "cos") {
        RatFunc da = diff_expr(g.args[0], var, st);
        if (da.is_zero()) return RatFunc{};
        RatFunc other = rf_gen(Gen::call(fn == "sin" ? "cos" : "sin", {g.args[0]}));
        return fn == "sin" ? rf_mul(da, other) : rf_neg(rf_mul(da, other));
      }
      const AtomDecl* atom = st.ctx.atom(fn);
      if (atom == nullptr) throw std::invalid_argument("unknown function '" + fn + "'");
      // The depth counter spans the chain-rule recursion into the arguments,
      // so a self-feeding rule cannot rewrite forever.
      if (++st.rule_depth > kAtomRuleDepthLimit)
        throw std::runtime_error("atom derivative rules nested deeper than " +
                                 std::to_string(kAtomRuleDepthLimit));
      RatFunc total;
      for (size_t k = 0; k < g.args.size(); ++k) {
        RatFunc darg = diff_expr(g.args[k], var, st);
        if (darg.is_zero()) continue;
        auto it = atom->rules.find(atom->formals[k]);
        if (it == atom->rules.end())
          throw std::invalid_argument("atom '" + fn + "' has no derivative rule for argument '" +
                                      atom->formals[k] + "'");
        std::map<std::string, Expr> bind;
        for (size_t i = 0; i < atom->formals.size(); ++i) bind[atom->formals[i]] = g.args[i];
        RatFunc partial = canon(substitute(it->second, bind), st.ctx);
        total = rf_add(total, rf_mul(partial, darg));
      }
      --st.rule_depth;
      return total;
    }
  }
  throw std::logic_error("unhandled generator");
}

RatFunc diff_poly(const Poly& p, const std::string& var, DiffState& st) {
  RatFunc total;
  for (const auto& [m, c] : p.terms) {
    for (size_t i = 0; i < m.factors.size(); ++i) {
      const auto& [g, e] = m.factors[i];
      RatFunc dg = diff_gen(g, var, st);
      if (dg.is_zero()) continue;
      // c * e * g^(e-1) * dg * (other factors)
      Monomial rest;
      for (size_t j = 0; j < m.factors.size(); ++j) {
        if (j == i) {
          if (e != 1) rest.factors.emplace_back(g, e - 1);
        } else {
          rest.factors.push_back(m.factors[j]);
        }
      }
      RatFunc term = rf_mul(rf_term(rest, c * e), dg);
      total = rf_add(total, term);
    }
  }
  return total;
}

RatFunc diff_rf(const RatFunc& f, const std::string& var, DiffState& st) {
  RatFunc dn = diff_poly(f.num, var, st);
  if (f.den.is_constant()) {
    return rf_div(dn, rf_const(f.den.constant_value()));
  }
  RatFunc dd = diff_poly(f.den, var, st);
  RatFunc den_rf{f.den, poly_const(1)};
  // (n/d)' = (n' d - n d') / d^2
  RatFunc num_rf{f.num, poly_const(1)};
  RatFunc top = rf_sub(rf_mul(dn, den_rf), rf_mul(num_rf, dd));
  return rf_div(top, rf_mul(den_rf, den_rf));
}

}  // namespace

RatFunc rf_differentiate(const RatFunc& f, const std::string& var, const Context& ctx) {
  DiffState st{ctx};
  return diff_rf(f, var, st);
}

Expr differentiate(const Expr& e, const std::string& var, const Context& ctx) {
  DiffState st{ctx};
  return uncanon(diff_expr(e, var, st));
}

Expr substitute(const Expr& e, const std::map<std::string, Expr>& bindings) {
  switch (e.kind()) {
    case NodeKind::Number:
      return e;
    case NodeKind::Symbol: {
      auto it = bindings.find(e.name());
      return it == bindings.end() ? e : it->second;
    }
    case NodeKind::Add:
    case NodeKind::Mul:
    case NodeKind::Call: {
      std::vector<Expr> ops;
      ops.reserve(e.operands().size());
      for (const auto& o : e.operands()) ops.push_back(substitute(o, bindings));
      if (e.kind() == NodeKind::Add) return Expr::add(std::move(ops));
      if (e.kind() == NodeKind::Mul) return Expr::mul(std::move(ops));
      return Expr::call(e.name(), std::move(ops));
    }
    case NodeKind::Div:
      return Expr::div(substitute(e.operands()[0], bindings),
                       substitute(e.operands()[1], bindings));
    case NodeKind::Pow:
      return Expr::pow(substitute(e.operands()[0], bindings), e.exponent());
  }
  throw std::logic_error("unhandled node kind");
}

}  // namespace stosym
