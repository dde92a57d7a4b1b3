#include "stosym/checks.hpp"

#include <algorithm>
#include <stdexcept>

#include "stosym/calculus.hpp"

namespace stosym {

std::string to_string(CheckKind kind) {
  switch (kind) {
    case CheckKind::SdeSymmetry:
      return "sde-symmetry";
    case CheckKind::KbeSymmetry:
      return "kbe-symmetry";
    case CheckKind::KfeSymmetry:
      return "kfe-symmetry";
    case CheckKind::FirstIntegral:
      return "first-integral";
    case CheckKind::IntegralSymmetry:
      return "integral-symmetry";
    case CheckKind::TrivialSymmetry:
      return "trivial-symmetry";
    case CheckKind::ConverseSde:
      return "converse-sde";
    case CheckKind::ConverseIntegral:
      return "converse-integral";
  }
  return "?";
}

namespace {

struct ReportBuilder {
  CheckReport report;
  const Context& ctx;
  const SamplingConfig& cfg;
  ZeroMode mode;

  ReportBuilder(CheckKind kind, std::string candidate, const Context& c,
                const SamplingConfig& s, ZeroMode m)
      : ctx(c), cfg(s), mode(m) {
    report.kind = kind;
    report.candidate = std::move(candidate);
    report.pass = true;
  }

  void add(const std::string& label, const RatFunc& residual) {
    ResidualEntry entry;
    entry.label = label;
    entry.residual = uncanon(residual);
    entry.verdict = is_zero(entry.residual, ctx, cfg, mode);
    if (!entry.verdict.is_zero()) {
      report.pass = false;
      entry.factors = special_factors(residual, ctx);
    }
    note_denominator(residual);
    report.entries.push_back(std::move(entry));
  }

  // A parameter appearing in a denominator means the verdict silently
  // assumes it nonzero; surface that.
  void note_denominator(const RatFunc& residual) {
    if (residual.den.is_constant()) return;
    for (const auto& s : rf_symbols(RatFunc{residual.den, poly_const(1)})) {
      if (ctx.role(s) != SymbolRole::Parameter) continue;
      std::string cond = s + " != 0";
      if (std::find(report.side_conditions.begin(), report.side_conditions.end(), cond) ==
          report.side_conditions.end())
        report.side_conditions.push_back(cond);
    }
  }

  CheckReport take() { return std::move(report); }
};

void require_plain_field(const VectorField& x, const char* what) {
  if (x.multiplier && !x.multiplier->is_zero_literal())
    throw std::invalid_argument(std::string(what) + ": candidate must not carry a u-multiplier");
  if (x.shift && !x.shift->is_zero_literal())
    throw std::invalid_argument(std::string(what) + ": candidate must not carry a u-shift");
}

void require_no_shift(const VectorField& x, const char* what) {
  if (x.shift && !x.shift->is_zero_literal())
    throw std::invalid_argument(std::string(what) + ": candidate must not carry a u-shift");
}

void require_dimensions(const SdeSystem& s, const VectorField& x, const char* what) {
  if (x.n() != s.n())
    throw std::invalid_argument(std::string(what) + ": candidate dimension mismatch");
}

// X(h) = tau dh/dt + xi_j dh/dx_j; the multiplier never acts on coefficients.
RatFunc field_action(const SdeOperators& ops, const std::vector<RatFunc>& xi,
                     const RatFunc& tau, const RatFunc& h) {
  RatFunc out = rf_mul(tau, ops.dt(h));
  for (int j = 0; j < ops.n(); ++j) out = rf_add(out, rf_mul(xi[j], ops.dx(h, j)));
  return out;
}

struct CanonField {
  RatFunc tau;
  std::vector<RatFunc> xi;
  RatFunc multiplier;

  CanonField(const VectorField& x, const Context& ctx) {
    tau = canon(x.tau, ctx);
    for (const auto& e : x.xi) xi.push_back(canon(e, ctx));
    multiplier = x.multiplier ? canon(*x.multiplier, ctx) : RatFunc{};
  }
};

std::string wiener_label(int alpha) { return "W" + std::to_string(alpha); }

// diffusion(i, alpha) residual of the SDE determining system:
//   D_a(xi_i) - X(g_{i,a}) - (1/2) g_{i,a} D0(tau)
RatFunc sde_diffusion_residual(const SdeOperators& ops, const CanonField& cf, int i, int alpha) {
  RatFunc d0tau = ops.d0(cf.tau);
  RatFunc r = ops.dalpha(cf.xi[i], alpha);
  r = rf_sub(r, field_action(ops, cf.xi, cf.tau, ops.g(i, alpha)));
  r = rf_sub(r, rf_mul(rf_const(Rational(1, 2)), rf_mul(ops.g(i, alpha), d0tau)));
  return r;
}

// drift(i) residual shared by every determining system:
//   D0(xi_i) - X(f_i) - f_i D0(tau)
RatFunc drift_core_residual(const SdeOperators& ops, const CanonField& cf, int i) {
  RatFunc r = ops.d0(cf.xi[i]);
  r = rf_sub(r, field_action(ops, cf.xi, cf.tau, ops.f(i)));
  r = rf_sub(r, rf_mul(ops.f(i), ops.d0(cf.tau)));
  return r;
}

void add_surface_conditions(ReportBuilder& rb, const SdeOperators& ops, const CanonField& cf) {
  const auto& states = ops.ctx().states();
  // time-coefficient(i): g_{i,a} D_a(tau)
  for (int i = 0; i < ops.n(); ++i) {
    RatFunc r;
    for (int a = 1; a <= ops.m(); ++a)
      r = rf_add(r, rf_mul(ops.g(i, a), ops.dalpha(cf.tau, a)));
    rb.add("time-coefficient(" + states[i] + ")", r);
  }
  // diffusion-sym(i,j): the symmetrized diffusion condition
  for (int i = 0; i < ops.n(); ++i) {
    for (int j = i; j < ops.n(); ++j) {
      RatFunc r;
      for (int a = 1; a <= ops.m(); ++a) {
        RatFunc left = sde_diffusion_residual(ops, cf, j, a);
        RatFunc right = sde_diffusion_residual(ops, cf, i, a);
        r = rf_add(r, rf_add(rf_mul(ops.g(i, a), left), rf_mul(ops.g(j, a), right)));
      }
      rb.add("diffusion-sym(" + states[i] + "," + states[j] + ")", r);
    }
  }
}

}  // namespace

CheckReport check_sde_symmetry(const SdeSystem& s, const VectorField& x,
                               const SamplingConfig& cfg, ZeroMode mode) {
  s.validate();
  require_plain_field(x, "check_sde_symmetry");
  require_dimensions(s, x, "check_sde_symmetry");
  SdeOperators ops(s);
  CanonField cf(x, s.ctx);
  ReportBuilder rb(CheckKind::SdeSymmetry, x.name, s.ctx, cfg, mode);
  const auto& states = s.ctx.states();
  for (int i = 0; i < s.n(); ++i)
    rb.add("drift(" + states[i] + ")", drift_core_residual(ops, cf, i));
  for (int i = 0; i < s.n(); ++i)
    for (int a = 1; a <= s.m(); ++a)
      rb.add("diffusion(" + states[i] + "," + wiener_label(a) + ")",
             sde_diffusion_residual(ops, cf, i, a));
  for (int a = 1; a <= s.m(); ++a)
    rb.add("time(" + wiener_label(a) + ")", ops.dalpha(cf.tau, a));
  return rb.take();
}

CheckReport check_first_integral(const SdeSystem& s, const Expr& integral,
                                 const SamplingConfig& cfg, ZeroMode mode) {
  s.validate();
  SdeOperators ops(s);
  RatFunc value = canon(integral, s.ctx);
  ReportBuilder rb(CheckKind::FirstIntegral, integral.str(), s.ctx, cfg, mode);
  rb.add("drift", ops.d0(value));
  for (int a = 1; a <= s.m(); ++a)
    rb.add("diffusion(" + wiener_label(a) + ")", ops.dalpha(value, a));
  return rb.take();
}

CheckReport check_kbe_symmetry(const KolmogorovEquation& e, const VectorField& x,
                               const SamplingConfig& cfg, ZeroMode mode) {
  if (e.kind != PdeKind::Backward)
    throw std::invalid_argument("check_kbe_symmetry: backward equation required");
  require_no_shift(x, "check_kbe_symmetry");
  require_dimensions(e.sde, x, "check_kbe_symmetry");
  SdeOperators ops(e.sde);
  CanonField cf(x, e.sde.ctx);
  ReportBuilder rb(CheckKind::KbeSymmetry, x.name, e.sde.ctx, cfg, mode);
  add_surface_conditions(rb, ops, cf);
  const auto& states = e.sde.ctx.states();
  for (int i = 0; i < ops.n(); ++i) {
    RatFunc r = drift_core_residual(ops, cf, i);
    for (int a = 1; a <= ops.m(); ++a)
      r = rf_sub(r, rf_mul(ops.g(i, a), ops.dalpha(cf.multiplier, a)));
    rb.add("drift(" + states[i] + ")", r);
  }
  rb.add("multiplier-evolution", ops.d0(cf.multiplier));
  return rb.take();
}

CheckReport check_kfe_symmetry(const KolmogorovEquation& e, const VectorField& x,
                               const SamplingConfig& cfg, ZeroMode mode) {
  if (e.kind != PdeKind::Forward)
    throw std::invalid_argument("check_kfe_symmetry: forward equation required");
  require_no_shift(x, "check_kfe_symmetry");
  require_dimensions(e.sde, x, "check_kfe_symmetry");
  SdeOperators ops(e.sde);
  CanonField cf(x, e.sde.ctx);
  ReportBuilder rb(CheckKind::KfeSymmetry, x.name, e.sde.ctx, cfg, mode);
  add_surface_conditions(rb, ops, cf);
  // Q = chi + xi_i,i + tau_t - D0(tau)
  RatFunc q = cf.multiplier;
  for (int i = 0; i < ops.n(); ++i) q = rf_add(q, ops.dx(cf.xi[i], i));
  q = rf_add(q, ops.dt(cf.tau));
  q = rf_sub(q, ops.d0(cf.tau));
  rb.report.q = uncanon(q);
  const auto& states = e.sde.ctx.states();
  for (int i = 0; i < ops.n(); ++i) {
    RatFunc r = drift_core_residual(ops, cf, i);
    for (int a = 1; a <= ops.m(); ++a) r = rf_add(r, rf_mul(ops.g(i, a), ops.dalpha(q, a)));
    rb.add("drift(" + states[i] + ")", r);
  }
  rb.add("q-evolution", ops.d0(q));
  return rb.take();
}

CheckReport check_integral_symmetry(const KolmogorovEquation& e, const Expr& integral,
                                    const SamplingConfig& cfg, ZeroMode mode) {
  VectorField y;
  y.name = "(" + integral.str() + ")*u";
  y.tau = Expr::number(0);
  y.xi.assign(e.sde.n(), Expr::number(0));
  y.multiplier = integral;
  CheckReport r = check_kbe_symmetry(e, y, cfg, mode);
  r.kind = CheckKind::IntegralSymmetry;
  return r;
}

CheckReport check_trivial_symmetry(const KolmogorovEquation& e, const Expr& psi,
                                   const SamplingConfig& cfg, ZeroMode mode) {
  const Context& ctx = e.sde.ctx;
  ReportBuilder rb(CheckKind::TrivialSymmetry, psi.str(), ctx, cfg, mode);
  // psi must solve the equation: psi_t + ea psi_xx + eb psi_x + ec psi = 0.
  RatFunc p = canon(psi, ctx);
  RatFunc r = rf_differentiate(p, ctx.time(), ctx);
  int n = e.sde.n();
  for (int i = 0; i < n; ++i) {
    RatFunc pi = rf_differentiate(p, ctx.states()[i], ctx);
    r = rf_add(r, rf_mul(canon(e.eb[i], ctx), pi));
    for (int j = 0; j < n; ++j)
      r = rf_add(r, rf_mul(canon(e.ea[i][j], ctx),
                           rf_differentiate(pi, ctx.states()[j], ctx)));
  }
  r = rf_add(r, rf_mul(canon(e.ec, ctx), p));
  rb.add("pde-solution", r);
  return rb.take();
}

CheckReport converse_sde_from_kbe(const SdeSystem& s, const VectorField& x,
                                  const SamplingConfig& cfg, ZeroMode mode) {
  require_plain_field(x, "converse_sde_from_kbe");
  require_dimensions(s, x, "converse_sde_from_kbe");
  CheckReport surface = check_kbe_symmetry(kbe_of(s), x, cfg, mode);
  SdeOperators ops(s);
  CanonField cf(x, s.ctx);
  ReportBuilder rb(CheckKind::ConverseSde, x.name, s.ctx, cfg, mode);
  rb.report.entries = std::move(surface.entries);
  rb.report.pass = surface.pass;
  rb.report.side_conditions = std::move(surface.side_conditions);
  rb.report.group_boundary = static_cast<int>(rb.report.entries.size());
  const auto& states = s.ctx.states();
  for (int i = 0; i < s.n(); ++i)
    for (int a = 1; a <= s.m(); ++a)
      rb.add("diffusion(" + states[i] + "," + wiener_label(a) + ")",
             sde_diffusion_residual(ops, cf, i, a));
  for (int a = 1; a <= s.m(); ++a)
    rb.add("time(" + wiener_label(a) + ")", ops.dalpha(cf.tau, a));
  return rb.take();
}

CheckReport converse_integral_from_kbe(const SdeSystem& s, const Expr& integral,
                                       const SamplingConfig& cfg, ZeroMode mode) {
  CheckReport surface = check_integral_symmetry(kbe_of(s), integral, cfg, mode);
  SdeOperators ops(s);
  RatFunc value = canon(integral, s.ctx);
  ReportBuilder rb(CheckKind::ConverseIntegral, integral.str(), s.ctx, cfg, mode);
  rb.report.entries = std::move(surface.entries);
  rb.report.pass = surface.pass;
  rb.report.side_conditions = std::move(surface.side_conditions);
  rb.report.group_boundary = static_cast<int>(rb.report.entries.size());
  for (int a = 1; a <= s.m(); ++a)
    rb.add("diffusion(" + wiener_label(a) + ")", ops.dalpha(value, a));
  return rb.take();
}

}  // namespace stosym
