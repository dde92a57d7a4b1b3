#include "stosym/bridge.hpp"

#include "stosym/calculus.hpp"

namespace stosym {

namespace {

// D0(tau) - tau_t - xi_i,i : the multiplier budget both Kolmogorov kinds
// share; phi + chi always equals this quantity for paired symmetries.
RatFunc multiplier_budget(const SdeSystem& s, const VectorField& x) {
  SdeOperators ops(s);
  RatFunc tau = canon(x.tau, s.ctx);
  RatFunc out = rf_sub(ops.d0(tau), ops.dt(tau));
  for (int i = 0; i < s.n(); ++i) out = rf_sub(out, ops.dx(canon(x.xi[i], s.ctx), i));
  return out;
}

VectorField with_multiplier(const VectorField& x, Expr multiplier, const std::string& suffix) {
  VectorField out;
  out.name = x.name.empty() ? suffix : x.name + suffix;
  out.tau = x.tau;
  out.xi = x.xi;
  out.multiplier = std::move(multiplier);
  return out;
}

}  // namespace

TransferRecord sde_to_kbe(const SdeSystem& s, const VectorField& x,
                          const SamplingConfig& cfg, ZeroMode mode) {
  TransferRecord rec;
  rec.rule = "sde-kbe";
  rec.source = x;
  rec.source_report = check_sde_symmetry(s, x, cfg, mode);
  if (!rec.source_report.pass) throw TransferRefused(rec.rule, rec.source_report);
  rec.auxiliary = Expr::number(0);
  rec.target = with_multiplier(x, Expr::number(0), "");
  rec.target_report = check_kbe_symmetry(kbe_of(s), rec.target, cfg, mode);
  return rec;
}

TransferRecord integral_to_kbe(const SdeSystem& s, const Expr& integral,
                               const SamplingConfig& cfg, ZeroMode mode) {
  TransferRecord rec;
  rec.rule = "integral-kbe";
  rec.source_report = check_first_integral(s, integral, cfg, mode);
  if (!rec.source_report.pass) throw TransferRefused(rec.rule, rec.source_report);
  VectorField y;
  y.name = "(" + integral.str() + ")*u";
  y.tau = Expr::number(0);
  y.xi.assign(s.n(), Expr::number(0));
  y.multiplier = integral;
  rec.source = y;
  rec.auxiliary = integral;
  rec.target = y;
  rec.target_report = check_kbe_symmetry(kbe_of(s), y, cfg, mode);
  return rec;
}

TransferRecord kbe_to_kfe(const SdeSystem& s, const VectorField& x,
                          const SamplingConfig& cfg, ZeroMode mode) {
  TransferRecord rec;
  rec.rule = "kbe-kfe";
  rec.source = x;
  rec.source_report = check_kbe_symmetry(kbe_of(s), x, cfg, mode);
  if (!rec.source_report.pass) throw TransferRefused(rec.rule, rec.source_report);
  RatFunc phi = x.multiplier ? canon(*x.multiplier, s.ctx) : RatFunc{};
  Expr chi = uncanon(rf_sub(multiplier_budget(s, x), phi));
  rec.auxiliary = chi;
  rec.target = with_multiplier(x, chi, "");
  rec.target_report = check_kfe_symmetry(kfe_of(s), rec.target, cfg, mode);
  return rec;
}

TransferRecord kfe_to_kbe(const SdeSystem& s, const VectorField& x,
                          const SamplingConfig& cfg, ZeroMode mode) {
  TransferRecord rec;
  rec.rule = "kfe-kbe";
  rec.source = x;
  rec.source_report = check_kfe_symmetry(kfe_of(s), x, cfg, mode);
  if (!rec.source_report.pass) throw TransferRefused(rec.rule, rec.source_report);
  RatFunc chi = x.multiplier ? canon(*x.multiplier, s.ctx) : RatFunc{};
  Expr phi = uncanon(rf_sub(multiplier_budget(s, x), chi));
  rec.auxiliary = phi;
  rec.target = with_multiplier(x, phi, "");
  rec.target_report = check_kbe_symmetry(kbe_of(s), rec.target, cfg, mode);
  return rec;
}

TransferRecord sde_to_kfe(const SdeSystem& s, const VectorField& x,
                          const SamplingConfig& cfg, ZeroMode mode) {
  TransferRecord rec;
  rec.rule = "sde-kfe";
  rec.source = x;
  rec.source_report = check_sde_symmetry(s, x, cfg, mode);
  if (!rec.source_report.pass) throw TransferRefused(rec.rule, rec.source_report);
  Expr chi = uncanon(multiplier_budget(s, x));
  rec.auxiliary = chi;
  rec.target = with_multiplier(x, chi, "");
  rec.target_report = check_kfe_symmetry(kfe_of(s), rec.target, cfg, mode);
  return rec;
}

}  // namespace stosym
