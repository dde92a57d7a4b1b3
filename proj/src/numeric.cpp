#include "stosym/numeric.hpp"

#include <cmath>
#include <random>

namespace stosym {

std::string to_string(ZeroVerdict::Kind kind) {
  switch (kind) {
    case ZeroVerdict::Kind::ZeroSymbolic:
      return "ZERO_SYMBOLIC";
    case ZeroVerdict::Kind::ZeroNumeric:
      return "ZERO_NUMERIC";
    case ZeroVerdict::Kind::NonZero:
      return "NONZERO";
  }
  return "?";
}

namespace {

double eval_impl(const Expr& e, const Point& point, const Context& ctx, int depth) {
  if (depth > 64) throw EvalError("evaluation recursion too deep");
  switch (e.kind()) {
    case NodeKind::Number:
      return to_double(e.number_value());
    case NodeKind::Symbol: {
      auto it = point.find(e.name());
      if (it == point.end()) throw EvalError("unbound symbol '" + e.name() + "'");
      return it->second;
    }
    case NodeKind::Add: {
      double s = 0;
      for (const auto& t : e.operands()) s += eval_impl(t, point, ctx, depth + 1);
      return s;
    }
    case NodeKind::Mul: {
      double p = 1;
      for (const auto& f : e.operands()) p *= eval_impl(f, point, ctx, depth + 1);
      return p;
    }
    case NodeKind::Div: {
      double n = eval_impl(e.operands()[0], point, ctx, depth + 1);
      double d = eval_impl(e.operands()[1], point, ctx, depth + 1);
      if (d == 0.0 || !std::isfinite(d)) throw EvalError("division by zero");
      return n / d;
    }
    case NodeKind::Pow: {
      double b = eval_impl(e.operands()[0], point, ctx, depth + 1);
      double k = to_double(e.exponent());
      if (b < 0 && !is_integer(e.exponent())) throw EvalError("fractional power of a negative value");
      if (b == 0 && k < 0) throw EvalError("zero to a negative power");
      double r = std::pow(b, k);
      if (!std::isfinite(r)) throw EvalError("non-finite power");
      return r;
    }
    case NodeKind::Call: {
      const std::string& fn = e.name();
      if (fn == "ln" || fn == "exp" || fn == "sqrt" || fn == "sin" || fn == "cos") {
        double a = eval_impl(e.operands()[0], point, ctx, depth + 1);
        if (fn == "ln") {
          if (a <= 0) throw EvalError("ln of a non-positive value");
          return std::log(a);
        }
        if (fn == "exp") {
          double r = std::exp(a);
          if (!std::isfinite(r)) throw EvalError("exp overflow");
          return r;
        }
        if (fn == "sqrt") {
          if (a < 0) throw EvalError("sqrt of a negative value");
          return std::sqrt(a);
        }
        return fn == "sin" ? std::sin(a) : std::cos(a);
      }
      const AtomDecl* atom = ctx.atom(fn);
      if (atom == nullptr) throw EvalError("unknown function '" + fn + "'");
      if (!atom->numeric_model)
        throw EvalError("atom '" + fn + "' has no numeric model");
      Point inner = point;
      for (size_t i = 0; i < atom->formals.size(); ++i)
        inner[atom->formals[i]] = eval_impl(e.operands()[i], point, ctx, depth + 1);
      return eval_impl(*atom->numeric_model, inner, ctx, depth + 1);
    }
  }
  throw EvalError("unhandled node kind");
}

}  // namespace

double eval_numeric(const Expr& e, const Point& point, const Context& ctx) {
  return eval_impl(e, point, ctx, 0);
}

std::pair<double, double> SamplingConfig::range_for(const std::string& name,
                                                    const Context& ctx) const {
  auto it = overrides.find(name);
  if (it != overrides.end()) return it->second;
  switch (ctx.role(name)) {
    case SymbolRole::Time:
      return time_range;
    case SymbolRole::State:
      return state_range;
    default:
      return param_range;
  }
}

Point sample_point(const Context& ctx, const SamplingConfig& cfg, int index) {
  // One generator per point keeps every point independent of how many draws
  // previous expressions consumed; reruns with one seed are bit-identical.
  std::mt19937_64 rng(cfg.seed + 0x9e3779b97f4a7c15ull * static_cast<std::uint64_t>(index + 1));
  Point p;
  auto draw = [&rng](std::pair<double, double> range) {
    std::uniform_real_distribution<double> d(range.first, range.second);
    return d(rng);
  };
  p[ctx.time()] = draw(cfg.range_for(ctx.time(), ctx));
  for (const auto& s : ctx.states()) p[s] = draw(cfg.range_for(s, ctx));
  for (const auto& pr : ctx.params()) p[pr.name] = draw(cfg.range_for(pr.name, ctx));
  return p;
}

namespace {

// Scaled residual of a canonical quotient: |sum of numerator terms| divided
// by (1 + max |term|), all over the denominator value.
double scaled_residual(const RatFunc& f, const Point& point, const Context& ctx) {
  double den = 1.0;
  if (!(f.den.is_constant() && f.den.constant_value() == 1)) {
    den = eval_numeric(uncanon_poly(f.den), point, ctx);
    if (den == 0.0 || !std::isfinite(den)) throw EvalError("denominator vanished at sample");
  }
  double sum = 0.0;
  double largest = 0.0;
  for (const auto& [m, c] : f.num.terms) {
    double term = eval_numeric(uncanon_poly(Poly{{{m, c}}}), point, ctx) / den;
    if (!std::isfinite(term)) throw EvalError("non-finite term at sample");
    sum += term;
    largest = std::max(largest, std::fabs(term));
  }
  return std::fabs(sum) / (1.0 + largest);
}

}  // namespace

ZeroVerdict is_zero(const Expr& e, const Context& ctx, const SamplingConfig& cfg,
                    ZeroMode mode) {
  if (cfg.points < 1) throw std::invalid_argument("sampling needs at least one point");
  if (cfg.tolerance <= 0) throw std::invalid_argument("tolerance must be positive");
  RatFunc f = canon(e, ctx);
  if (mode != ZeroMode::Numeric && f.is_zero()) {
    ZeroVerdict v;
    v.kind = ZeroVerdict::Kind::ZeroSymbolic;
    return v;
  }
  ZeroVerdict v;
  v.kind = ZeroVerdict::Kind::ZeroNumeric;
  int failures = 0;
  for (int i = 0; i < cfg.points; ++i) {
    Point p;
    double r = 0.0;
    bool ok = false;
    // A point hitting a singularity of the expression is redrawn a bounded
    // number of times before the whole test gives up.
    for (int attempt = 0; attempt <= cfg.retries; ++attempt) {
      p = sample_point(ctx, cfg, i + attempt * 7919);
      try {
        r = scaled_residual(f, p, ctx);
        ok = true;
        break;
      } catch (const EvalError&) {
        continue;
      }
    }
    if (!ok) {
      if (++failures > cfg.retries)
        throw EvalError("could not sample the expression away from its singularities");
      continue;
    }
    v.max_scaled_residual = std::max(v.max_scaled_residual, r);
    if (r > cfg.tolerance && !v.witness) {
      v.kind = ZeroVerdict::Kind::NonZero;
      v.witness = p;
      v.witness_residual = r;
    }
  }
  return v;
}

}  // namespace stosym
