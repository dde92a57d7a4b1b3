#include "stosym/sde.hpp"

#include <stdexcept>

#include "stosym/calculus.hpp"

namespace stosym {

void SdeSystem::validate() const {
  if (drift.empty()) throw std::invalid_argument("system needs at least one state");
  if (static_cast<int>(ctx.states().size()) != n())
    throw std::invalid_argument("drift size does not match the declared states");
  if (static_cast<int>(diffusion.size()) != n())
    throw std::invalid_argument("diffusion must have one row per state");
  size_t m_cols = diffusion.front().size();
  if (m_cols == 0) throw std::invalid_argument("system needs at least one Wiener channel");
  for (const auto& row : diffusion)
    if (row.size() != m_cols) throw std::invalid_argument("ragged diffusion matrix");
  bool any = false;
  for (const auto& row : diffusion)
    for (const auto& entry : row)
      if (!symbolic_zero(entry, ctx)) any = true;
  if (!any) throw std::invalid_argument("diffusion matrix is identically zero");
}

SdeOperators::SdeOperators(const SdeSystem& s) : s_(&s) {
  for (const auto& e : s.drift) f_.push_back(canon(e, s.ctx));
  for (const auto& row : s.diffusion) {
    std::vector<RatFunc> r;
    for (const auto& e : row) r.push_back(canon(e, s.ctx));
    g_.push_back(std::move(r));
  }
}

RatFunc SdeOperators::dt(const RatFunc& value) const {
  return rf_differentiate(value, ctx().time(), ctx());
}

RatFunc SdeOperators::dx(const RatFunc& value, int i) const {
  return rf_differentiate(value, ctx().states()[i], ctx());
}

RatFunc SdeOperators::d0(const RatFunc& value) const {
  RatFunc out = dt(value);
  std::vector<RatFunc> first;
  first.reserve(n());
  for (int j = 0; j < n(); ++j) first.push_back(dx(value, j));
  for (int j = 0; j < n(); ++j) out = rf_add(out, rf_mul(f_[j], first[j]));
  for (int j = 0; j < n(); ++j) {
    for (int k = 0; k < n(); ++k) {
      RatFunc gg;
      for (int a = 0; a < m(); ++a) gg = rf_add(gg, rf_mul(g_[j][a], g_[k][a]));
      if (gg.is_zero()) continue;
      out = rf_add(out, rf_mul(rf_mul(rf_const(Rational(1, 2)), gg), dx(first[j], k)));
    }
  }
  return out;
}

RatFunc SdeOperators::dalpha(const RatFunc& value, int alpha1) const {
  RatFunc out;
  for (int j = 0; j < n(); ++j) out = rf_add(out, rf_mul(g_[j][alpha1 - 1], dx(value, j)));
  return out;
}

Expr d0_apply(const SdeSystem& s, const Expr& f) {
  SdeOperators ops(s);
  return uncanon(ops.d0(canon(f, s.ctx)));
}

Expr dalpha_apply(const SdeSystem& s, const Expr& f, int alpha) {
  if (alpha < 1 || alpha > s.m()) throw std::out_of_range("Wiener channel index out of range");
  SdeOperators ops(s);
  return uncanon(ops.dalpha(canon(f, s.ctx), alpha));
}

ItoDifferential ito_differential(const SdeSystem& s, const Expr& f) {
  SdeOperators ops(s);
  RatFunc v = canon(f, s.ctx);
  ItoDifferential out;
  out.dt_coefficient = uncanon(ops.d0(v));
  for (int a = 1; a <= s.m(); ++a) out.dw_coefficients.push_back(uncanon(ops.dalpha(v, a)));
  return out;
}

namespace {

std::vector<std::vector<Expr>> half_ggt(const SdeOperators& ops) {
  int n = ops.n(), m = ops.m();
  std::vector<std::vector<Expr>> a(n, std::vector<Expr>(n));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      RatFunc acc;
      for (int al = 1; al <= m; ++al) acc = rf_add(acc, rf_mul(ops.g(i, al), ops.g(j, al)));
      a[i][j] = uncanon(rf_mul(rf_const(Rational(1, 2)), acc));
    }
  }
  return a;
}

}  // namespace

KolmogorovEquation kbe_of(const SdeSystem& s) {
  s.validate();
  SdeOperators ops(s);
  KolmogorovEquation e;
  e.kind = PdeKind::Backward;
  e.sde = s;
  e.a = half_ggt(ops);
  e.b.reserve(s.n());
  for (const auto& entry : s.drift) e.b.push_back(normalize(entry, s.ctx));
  // Backward surface: u_t + A_ij u_xi_xj + B_k u_xk = 0.
  e.ea = e.a;
  e.eb = e.b;
  e.ec = Expr::number(0);
  return e;
}

KolmogorovEquation kfe_of(const SdeSystem& s) {
  s.validate();
  SdeOperators ops(s);
  const Context& ctx = s.ctx;
  int n = s.n();
  KolmogorovEquation e;
  e.kind = PdeKind::Forward;
  e.sde = s;
  e.a = half_ggt(ops);
  e.b.reserve(n);
  for (const auto& entry : s.drift) e.b.push_back(normalize(entry, ctx));
  // Expanded divergence form
  //   u_t = (-f_i,i + A_ij,ij) u + (-f_i + 2 A_ij,j) u_xi + A_ij u_xi_xj,
  // stored as u_t + ea u_xx + eb u_x + ec u = 0.
  std::vector<std::vector<RatFunc>> a(n, std::vector<RatFunc>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a[i][j] = canon(e.a[i][j], ctx);
  RatFunc c0;
  for (int i = 0; i < n; ++i) {
    c0 = rf_sub(c0, ops.dx(ops.f(i), i));
    for (int j = 0; j < n; ++j) c0 = rf_add(c0, ops.dx(ops.dx(a[i][j], i), j));
  }
  e.ea.assign(n, std::vector<Expr>(n));
  e.eb.assign(n, Expr());
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) e.ea[i][j] = uncanon(rf_neg(a[i][j]));
    RatFunc bi = ops.f(i);
    for (int j = 0; j < n; ++j) bi = rf_sub(bi, rf_mul(rf_const(2), ops.dx(a[i][j], j)));
    e.eb[i] = uncanon(bi);
  }
  e.ec = uncanon(rf_neg(c0));
  return e;
}

}  // namespace stosym
