#include "stosym/jet.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "stosym/calculus.hpp"

namespace stosym {

JetVar JetVar::u(int n) { return JetVar{0, std::vector<int>(n, 0)}; }
JetVar JetVar::ut(int n) { return JetVar{1, std::vector<int>(n, 0)}; }
JetVar JetVar::ux(int n, int i) {
  JetVar v{0, std::vector<int>(n, 0)};
  v.x_orders[i] = 1;
  return v;
}
JetVar JetVar::uxx(int n, int i, int j) {
  JetVar v{0, std::vector<int>(n, 0)};
  v.x_orders[i] += 1;
  v.x_orders[j] += 1;
  return v;
}

int JetVar::compare(const JetVar& a, const JetVar& b) {
  int ta = a.total_order(), tb = b.total_order();
  if (ta != tb) return ta < tb ? -1 : 1;
  if (a.t_order != b.t_order) return a.t_order < b.t_order ? -1 : 1;
  if (a.x_orders.size() != b.x_orders.size())
    return a.x_orders.size() < b.x_orders.size() ? -1 : 1;
  for (size_t i = 0; i < a.x_orders.size(); ++i)
    if (a.x_orders[i] != b.x_orders[i]) return a.x_orders[i] < b.x_orders[i] ? -1 : 1;
  return 0;
}

int JetVar::total_order() const {
  int d = t_order;
  for (int k : x_orders) d += k;
  return d;
}

std::string JetVar::str(const Context& ctx) const {
  std::ostringstream os;
  os << "u";
  if (total_order() > 0) {
    os << "_";
    for (int k = 0; k < t_order; ++k) os << "[" << ctx.time() << "]";
    for (size_t i = 0; i < x_orders.size(); ++i)
      for (int k = 0; k < x_orders[i]; ++k) os << "[" << ctx.states()[i] << "]";
  }
  return os.str();
}

int JetMonomial::compare(const JetMonomial& a, const JetMonomial& b) {
  if (a.factors.size() != b.factors.size())
    return a.factors.size() < b.factors.size() ? -1 : 1;
  for (size_t i = 0; i < a.factors.size(); ++i) {
    int c = JetVar::compare(a.factors[i].first, b.factors[i].first);
    if (c != 0) return c;
    if (a.factors[i].second != b.factors[i].second)
      return a.factors[i].second < b.factors[i].second ? -1 : 1;
  }
  return 0;
}

std::string JetMonomial::str(const Context& ctx) const {
  if (factors.empty()) return "1";
  std::ostringstream os;
  bool first = true;
  for (const auto& [v, e] : factors) {
    if (!first) os << "*";
    os << v.str(ctx);
    if (e != 1) os << "^" << e;
    first = false;
  }
  return os.str();
}

std::string JetPoly::str(const Context& ctx) const {
  if (terms.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : terms) {
    if (!first) os << " + ";
    os << "(" << uncanon(c).str() << ")*" << m.str(ctx);
    first = false;
  }
  return os.str();
}

JetPoly jet_zero() { return JetPoly{}; }

JetPoly jet_coeff(const RatFunc& c) {
  JetPoly p;
  if (!c.is_zero()) p.terms.emplace_back(JetMonomial{}, c);
  return p;
}

JetPoly jet_var(const JetVar& v, const RatFunc& coeff) {
  JetPoly p;
  if (coeff.is_zero()) return p;
  JetMonomial m;
  m.factors.emplace_back(v, 1);
  p.terms.emplace_back(std::move(m), coeff);
  return p;
}

namespace {

void jet_sort(JetPoly& p) {
  std::sort(p.terms.begin(), p.terms.end(), [](const auto& a, const auto& b) {
    return JetMonomial::compare(a.first, b.first) < 0;
  });
}

JetPoly jet_compact(JetPoly p) {
  jet_sort(p);
  JetPoly out;
  for (auto& [m, c] : p.terms) {
    if (!out.terms.empty() && JetMonomial::compare(out.terms.back().first, m) == 0) {
      out.terms.back().second = rf_add(out.terms.back().second, c);
      if (out.terms.back().second.is_zero()) out.terms.pop_back();
    } else if (!c.is_zero()) {
      out.terms.emplace_back(std::move(m), std::move(c));
    }
  }
  return out;
}

JetMonomial jet_mono_mul(const JetMonomial& a, const JetMonomial& b) {
  JetMonomial out;
  size_t i = 0, j = 0;
  while (i < a.factors.size() || j < b.factors.size()) {
    if (j == b.factors.size() ||
        (i < a.factors.size() && JetVar::compare(a.factors[i].first, b.factors[j].first) < 0)) {
      out.factors.push_back(a.factors[i++]);
    } else if (i == a.factors.size() ||
               JetVar::compare(a.factors[i].first, b.factors[j].first) > 0) {
      out.factors.push_back(b.factors[j++]);
    } else {
      out.factors.emplace_back(a.factors[i].first, a.factors[i].second + b.factors[j].second);
      ++i;
      ++j;
    }
  }
  return out;
}

}  // namespace

JetPoly jet_add(const JetPoly& a, const JetPoly& b) {
  JetPoly p;
  p.terms = a.terms;
  p.terms.insert(p.terms.end(), b.terms.begin(), b.terms.end());
  return jet_compact(std::move(p));
}

JetPoly jet_scale(const JetPoly& a, const RatFunc& c) {
  if (c.is_zero()) return JetPoly{};
  JetPoly out;
  for (const auto& [m, v] : a.terms) out.terms.emplace_back(m, rf_mul(v, c));
  return jet_compact(std::move(out));
}

JetPoly jet_mul(const JetPoly& a, const JetPoly& b) {
  JetPoly out;
  for (const auto& [ma, ca] : a.terms)
    for (const auto& [mb, cb] : b.terms)
      out.terms.emplace_back(jet_mono_mul(ma, mb), rf_mul(ca, cb));
  return jet_compact(std::move(out));
}

bool jet_equal(const JetPoly& a, const JetPoly& b) {
  if (a.terms.size() != b.terms.size()) return false;
  for (size_t i = 0; i < a.terms.size(); ++i) {
    if (JetMonomial::compare(a.terms[i].first, b.terms[i].first) != 0) return false;
    if (!rf_equal(a.terms[i].second, b.terms[i].second)) return false;
  }
  return true;
}

namespace {

JetVar jet_var_derivative(const JetVar& v, int which, const Context& ctx) {
  JetVar out = v;
  if (which < 0) {
    if (out.t_order >= 1)
      throw std::logic_error("second time derivative is outside the jet truncation");
    out.t_order += 1;
  } else {
    out.x_orders[which] += 1;
  }
  (void)ctx;
  return out;
}

}  // namespace

JetPoly jet_total_derivative(const JetPoly& p, const std::string& var, const Context& ctx) {
  int which = var == ctx.time() ? -1 : ctx.state_index(var);
  if (which == -1 && var != ctx.time())
    throw std::invalid_argument("total derivative must be along t or a state variable");
  JetPoly out;
  for (const auto& [m, c] : p.terms) {
    // coefficient derivative times the monomial
    RatFunc dc = rf_differentiate(c, var, ctx);
    if (!dc.is_zero()) out.terms.emplace_back(m, dc);
    // derivative of each jet factor
    for (size_t i = 0; i < m.factors.size(); ++i) {
      const auto& [v, e] = m.factors[i];
      JetMonomial rest;
      for (size_t j = 0; j < m.factors.size(); ++j) {
        if (j == i) {
          if (e != 1) rest.factors.emplace_back(v, e - 1);
        } else {
          rest.factors.push_back(m.factors[j]);
        }
      }
      JetMonomial raised;
      raised.factors.emplace_back(jet_var_derivative(v, which, ctx), 1);
      out.terms.emplace_back(jet_mono_mul(rest, raised), rf_mul(c, rf_const(Rational(e))));
    }
  }
  return jet_compact(std::move(out));
}

ProlongedField prolong(const VectorField& x, const Context& ctx) {
  int n = static_cast<int>(ctx.states().size());
  if (x.n() != n) throw std::invalid_argument("prolong: dimension mismatch");
  // eta = multiplier * u + shift, linear in u by construction; tau and xi may
  // not depend on u, which the expression model already guarantees.
  RatFunc tau = canon(x.tau, ctx);
  std::vector<RatFunc> xi;
  for (const auto& e : x.xi) xi.push_back(canon(e, ctx));
  RatFunc phi = x.multiplier ? canon(*x.multiplier, ctx) : RatFunc{};
  RatFunc psi = x.shift ? canon(*x.shift, ctx) : RatFunc{};

  JetPoly eta = jet_add(jet_var(JetVar::u(n), phi), jet_coeff(psi));
  JetPoly tau_p = jet_coeff(tau);
  std::vector<JetPoly> xi_p;
  for (const auto& e : xi) xi_p.push_back(jet_coeff(e));

  ProlongedField out;
  out.base = x;

  auto d = [&](const JetPoly& p, int which) {
    return jet_total_derivative(p, which < 0 ? ctx.time() : ctx.states()[which], ctx);
  };

  // zeta_t = D_t(eta) - u_t D_t(tau) - u_xj D_t(xi_j)
  JetPoly zt = d(eta, -1);
  zt = jet_add(zt, jet_scale(jet_mul(jet_var(JetVar::ut(n), rf_const(1)), d(tau_p, -1)),
                             rf_const(-1)));
  for (int j = 0; j < n; ++j)
    zt = jet_add(zt, jet_scale(jet_mul(jet_var(JetVar::ux(n, j), rf_const(1)), d(xi_p[j], -1)),
                               rf_const(-1)));
  out.zeta_t = zt;

  // zeta_i = D_i(eta) - u_t D_i(tau) - u_xj D_i(xi_j)
  out.zeta_x.resize(n);
  for (int i = 0; i < n; ++i) {
    JetPoly zi = d(eta, i);
    zi = jet_add(zi, jet_scale(jet_mul(jet_var(JetVar::ut(n), rf_const(1)), d(tau_p, i)),
                               rf_const(-1)));
    for (int j = 0; j < n; ++j)
      zi = jet_add(zi, jet_scale(jet_mul(jet_var(JetVar::ux(n, j), rf_const(1)), d(xi_p[j], i)),
                                 rf_const(-1)));
    out.zeta_x[i] = zi;
  }

  // zeta_ij = D_j(zeta_i) - u_{t x_i} D_j(tau) - u_{x_i x_k} D_j(xi_k)
  out.zeta_xx.assign(n, std::vector<JetPoly>(n));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      JetPoly zij = d(out.zeta_x[i], j);
      JetVar utxi{1, std::vector<int>(n, 0)};
      utxi.x_orders[i] = 1;
      zij = jet_add(zij, jet_scale(jet_mul(jet_var(utxi, rf_const(1)), d(tau_p, j)),
                                   rf_const(-1)));
      for (int k = 0; k < n; ++k)
        zij = jet_add(zij,
                      jet_scale(jet_mul(jet_var(JetVar::uxx(n, i, k), rf_const(1)), d(xi_p[k], j)),
                                rf_const(-1)));
      out.zeta_xx[i][j] = zij;
    }
  }
  return out;
}

namespace {

// Substitute every occurrence of `v` (exponent-wise) by the polynomial `by`.
JetPoly jet_substitute(const JetPoly& p, const JetVar& v, const JetPoly& by) {
  JetPoly out;
  for (const auto& [m, c] : p.terms) {
    int count = 0;
    JetMonomial rest;
    for (const auto& [w, e] : m.factors) {
      if (JetVar::compare(w, v) == 0)
        count = e;
      else
        rest.factors.push_back({w, e});
    }
    JetPoly term;
    term.terms.emplace_back(rest, c);
    for (int k = 0; k < count; ++k) term = jet_mul(term, by);
    out = jet_add(out, term);
  }
  return out;
}

}  // namespace

JetPoly invariance_residual(const KolmogorovEquation& e, const VectorField& x) {
  const Context& ctx = e.sde.ctx;
  int n = e.sde.n();
  ProlongedField pf = prolong(x, ctx);
  RatFunc tau = canon(x.tau, ctx);
  std::vector<RatFunc> xi;
  for (const auto& f : x.xi) xi.push_back(canon(f, ctx));

  auto coeff_action = [&](const RatFunc& h) {
    RatFunc out = rf_mul(tau, rf_differentiate(h, ctx.time(), ctx));
    for (int j = 0; j < n; ++j)
      out = rf_add(out, rf_mul(xi[j], rf_differentiate(h, ctx.states()[j], ctx)));
    return out;
  };

  std::vector<std::vector<RatFunc>> ea(n, std::vector<RatFunc>(n));
  std::vector<RatFunc> eb(n);
  for (int i = 0; i < n; ++i) {
    eb[i] = canon(e.eb[i], ctx);
    for (int j = 0; j < n; ++j) ea[i][j] = canon(e.ea[i][j], ctx);
  }
  RatFunc ec = canon(e.ec, ctx);

  // pr X (Delta) with Delta = u_t + ea u_xx + eb u_x + ec u
  JetPoly r = pf.zeta_t;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (ea[i][j].is_zero()) continue;
      r = jet_add(r, jet_scale(pf.zeta_xx[i][j], ea[i][j]));
      r = jet_add(r, jet_var(JetVar::uxx(n, i, j), coeff_action(ea[i][j])));
    }
  }
  for (int i = 0; i < n; ++i) {
    if (!eb[i].is_zero()) r = jet_add(r, jet_scale(pf.zeta_x[i], eb[i]));
    r = jet_add(r, jet_var(JetVar::ux(n, i), coeff_action(eb[i])));
  }
  if (!ec.is_zero()) {
    RatFunc phi = x.multiplier ? canon(*x.multiplier, ctx) : RatFunc{};
    RatFunc psi = x.shift ? canon(*x.shift, ctx) : RatFunc{};
    JetPoly eta = jet_add(jet_var(JetVar::u(n), phi), jet_coeff(psi));
    r = jet_add(r, jet_scale(eta, ec));
  }
  r = jet_add(r, jet_var(JetVar::u(n), coeff_action(ec)));

  // Restrict to solutions: u_t = -(ea u_xx + eb u_x + ec u), and u_{t x_j}
  // is its total x_j derivative.
  JetPoly rhs;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j)
      rhs = jet_add(rhs, jet_var(JetVar::uxx(n, i, j), rf_neg(ea[i][j])));
    rhs = jet_add(rhs, jet_var(JetVar::ux(n, i), rf_neg(eb[i])));
  }
  rhs = jet_add(rhs, jet_var(JetVar::u(n), rf_neg(ec)));

  for (int j = 0; j < n; ++j) {
    JetVar utxj{1, std::vector<int>(n, 0)};
    utxj.x_orders[j] = 1;
    r = jet_substitute(r, utxj, jet_total_derivative(rhs, ctx.states()[j], ctx));
  }
  r = jet_substitute(r, JetVar::ut(n), rhs);
  return r;
}

std::vector<std::pair<JetMonomial, Expr>> split_by_monomials(const JetPoly& p) {
  std::vector<std::pair<JetMonomial, Expr>> out;
  out.reserve(p.terms.size());
  for (const auto& [m, c] : p.terms) out.emplace_back(m, uncanon(c));
  return out;
}

}  // namespace stosym
