#include "stosym/vectorfield.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <stdexcept>

#include "stosym/calculus.hpp"

namespace stosym {

namespace {

void reject_shift(const VectorField& x, const char* what) {
  if (x.shift && !x.shift->is_zero_literal())
    throw std::invalid_argument(std::string(what) + ": fields with a u-shift are not supported");
}

// X(h) = tau dh/dt + xi_j dh/dx_j
RatFunc field_action(const VectorField& x, const RatFunc& h, const Context& ctx) {
  RatFunc out = rf_mul(canon(x.tau, ctx), rf_differentiate(h, ctx.time(), ctx));
  for (int j = 0; j < x.n(); ++j)
    out = rf_add(out, rf_mul(canon(x.xi[j], ctx),
                             rf_differentiate(h, ctx.states()[j], ctx)));
  return out;
}

}  // namespace

VectorField lie_bracket(const VectorField& x, const VectorField& y, const Context& ctx) {
  if (x.n() != y.n()) throw std::invalid_argument("lie_bracket: dimension mismatch");
  if (x.n() != static_cast<int>(ctx.states().size()))
    throw std::invalid_argument("lie_bracket: field does not match the context");
  reject_shift(x, "lie_bracket");
  reject_shift(y, "lie_bracket");
  VectorField out;
  out.name = "[" + x.name + "," + y.name + "]";
  out.tau = uncanon(rf_sub(field_action(x, canon(y.tau, ctx), ctx),
                           field_action(y, canon(x.tau, ctx), ctx)));
  out.xi.reserve(x.n());
  for (int i = 0; i < x.n(); ++i)
    out.xi.push_back(uncanon(rf_sub(field_action(x, canon(y.xi[i], ctx), ctx),
                                    field_action(y, canon(x.xi[i], ctx), ctx))));
  if (x.multiplier || y.multiplier) {
    RatFunc px = x.multiplier ? canon(*x.multiplier, ctx) : RatFunc{};
    RatFunc py = y.multiplier ? canon(*y.multiplier, ctx) : RatFunc{};
    out.multiplier = uncanon(rf_sub(field_action(x, py, ctx), field_action(y, px, ctx)));
  }
  return out;
}

ModX0Result equals_mod_x0(const VectorField& x, const VectorField& y, const Context& ctx) {
  ModX0Result r;
  if (x.n() != y.n()) {
    r.mismatch = "dimension";
    return r;
  }
  if (!symbolic_zero(x.tau - y.tau, ctx)) {
    r.mismatch = "tau";
    return r;
  }
  for (int i = 0; i < x.n(); ++i) {
    if (!symbolic_zero(x.xi[i] - y.xi[i], ctx)) {
      r.mismatch = "xi(" + ctx.states()[i] + ")";
      return r;
    }
  }
  Expr sx = x.shift.value_or(Expr::number(0));
  Expr sy = y.shift.value_or(Expr::number(0));
  if (!symbolic_zero(sx - sy, ctx)) {
    r.mismatch = "shift";
    return r;
  }
  Expr mx = x.multiplier.value_or(Expr::number(0));
  Expr my = y.multiplier.value_or(Expr::number(0));
  RatFunc d = canon(mx - my, ctx);
  // Constant in t and x; parameters may remain.
  if (!rf_differentiate(d, ctx.time(), ctx).is_zero()) {
    r.mismatch = "multiplier";
    return r;
  }
  for (const auto& s : ctx.states()) {
    if (!rf_differentiate(d, s, ctx).is_zero()) {
      r.mismatch = "multiplier";
      return r;
    }
  }
  r.matches = true;
  r.constant = uncanon(d);
  return r;
}

namespace {

// Stacked coefficient functions of a field: tau, xi_1..xi_n, multiplier.
std::vector<Expr> field_components(const VectorField& f, bool with_multiplier) {
  std::vector<Expr> out{f.tau};
  out.insert(out.end(), f.xi.begin(), f.xi.end());
  if (with_multiplier) out.push_back(f.multiplier.value_or(Expr::number(0)));
  return out;
}

bool expr_params_only(const Expr& e, const Context& ctx) {
  switch (e.kind()) {
    case NodeKind::Number:
      return true;
    case NodeKind::Symbol:
      return ctx.role(e.name()) == SymbolRole::Parameter;
    default:
      for (const auto& o : e.operands())
        if (!expr_params_only(o, ctx)) return false;
      return true;
  }
}

bool gen_params_only(const Gen& g, const Context& ctx) {
  switch (g.tag) {
    case Gen::Tag::Symbol:
      return ctx.role(g.name) == SymbolRole::Parameter;
    case Gen::Tag::Call:
      return std::all_of(g.args.begin(), g.args.end(),
                         [&](const Expr& a) { return expr_params_only(a, ctx); });
    case Gen::Tag::Radical:
      return expr_params_only(g.base, ctx);
  }
  return false;
}

// Splits each monomial into its parameter-only part and the rest; groups the
// polynomial by the non-parameter part.
std::vector<std::pair<Monomial, Poly>> group_by_spatial(const Poly& p, const Context& ctx) {
  std::vector<std::pair<Monomial, Poly>> groups;
  for (const auto& [m, c] : p.terms) {
    Monomial spatial, param;
    for (const auto& [g, e] : m.factors)
      (gen_params_only(g, ctx) ? param : spatial).factors.emplace_back(g, e);
    Poly contrib;
    contrib.terms.emplace_back(param, c);
    bool found = false;
    for (auto& [key, poly] : groups) {
      if (Monomial::compare(key, spatial) == 0) {
        poly = poly_add(poly, contrib);
        found = true;
        break;
      }
    }
    if (!found) groups.emplace_back(spatial, contrib);
  }
  return groups;
}

// Gauss-Jordan over the field of rational functions of the parameters.
// Returns false when the system is inconsistent.
bool solve_exact(std::vector<std::vector<RatFunc>>& rows, int unknowns,
                 std::vector<RatFunc>& solution) {
  int nrows = static_cast<int>(rows.size());
  std::vector<int> pivot_row(unknowns, -1);
  int rank = 0;
  for (int col = 0; col < unknowns && rank < nrows; ++col) {
    int sel = -1;
    for (int r = rank; r < nrows; ++r) {
      if (!rows[r][col].is_zero()) {
        sel = r;
        break;
      }
    }
    if (sel < 0) continue;
    std::swap(rows[sel], rows[rank]);
    RatFunc inv = rf_div(rf_const(1), rows[rank][col]);
    for (int c = col; c <= unknowns; ++c) rows[rank][c] = rf_mul(rows[rank][c], inv);
    for (int r = 0; r < nrows; ++r) {
      if (r == rank || rows[r][col].is_zero()) continue;
      RatFunc factor = rows[r][col];
      for (int c = col; c <= unknowns; ++c)
        rows[r][c] = rf_sub(rows[r][c], rf_mul(factor, rows[rank][c]));
    }
    pivot_row[col] = rank;
    ++rank;
  }
  for (int r = rank; r < nrows; ++r)
    if (!rows[r][unknowns].is_zero()) return false;
  solution.assign(unknowns, RatFunc{});
  for (int col = 0; col < unknowns; ++col)
    if (pivot_row[col] >= 0) solution[col] = rows[pivot_row[col]][unknowns];
  return true;
}

}  // namespace

SpanResult span_membership(const VectorField& x, const FieldBasis& basis,
                           const Context& ctx, const SamplingConfig& cfg) {
  SpanResult result;
  if (basis.fields.empty()) throw std::invalid_argument("span_membership: empty basis");
  int k = static_cast<int>(basis.fields.size());
  bool with_multiplier = x.multiplier.has_value();
  for (const auto& b : basis.fields) with_multiplier = with_multiplier || b.multiplier.has_value();
  std::vector<Expr> target = field_components(x, with_multiplier);
  std::vector<std::vector<Expr>> cols;
  cols.reserve(k);
  for (const auto& b : basis.fields) {
    if (b.n() != x.n()) throw std::invalid_argument("span_membership: dimension mismatch");
    cols.push_back(field_components(b, with_multiplier));
  }
  int comps = static_cast<int>(target.size());

  // Numeric stage: the c_k are constants in (t, x) but may depend on the
  // parameters, so each least-squares fit holds one parameter draw fixed and
  // varies only time and states across the sample points.
  const int nparam_samples = 3;
  int npoints = std::max(2 * k, 8);
  for (int ps = 0; ps < nparam_samples; ++ps) {
    Point params = sample_point(ctx, cfg, 100000 + ps);
    Eigen::MatrixXd a(npoints * comps, k);
    Eigen::VectorXd rhs(npoints * comps);
    for (int p = 0; p < npoints; ++p) {
      Point pt = sample_point(ctx, cfg, ps * npoints + p);
      for (const auto& pr : ctx.params()) pt[pr.name] = params[pr.name];
      for (int c = 0; c < comps; ++c) {
        rhs(p * comps + c) = eval_numeric(target[c], pt, ctx);
        for (int j = 0; j < k; ++j) a(p * comps + c, j) = eval_numeric(cols[j][c], pt, ctx);
      }
    }
    Eigen::VectorXd coef = a.bdcSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(rhs);
    double scale = 1.0 + rhs.cwiseAbs().maxCoeff();
    double res = (a * coef - rhs).cwiseAbs().maxCoeff() / scale;
    result.least_squares_residual = std::max(result.least_squares_residual, res);
  }
  if (!(result.least_squares_residual < cfg.tolerance)) return result;

  // Exact stage: match coefficients of the non-parameter monomials, solving
  // for the c_k over the parameter field.
  std::vector<std::vector<RatFunc>> basis_rf(k);
  std::vector<RatFunc> target_rf;
  for (int c = 0; c < comps; ++c) target_rf.push_back(canon(target[c], ctx));
  for (int j = 0; j < k; ++j)
    for (int c = 0; c < comps; ++c) basis_rf[j].push_back(canon(cols[j][c], ctx));

  std::vector<std::vector<RatFunc>> rows;
  for (int c = 0; c < comps; ++c) {
    // Multiply through by the product of all denominators of the component,
    // so coefficient matching happens between polynomials.
    std::vector<RatFunc> entries;
    RatFunc dprod = rf_const(1);
    for (int j = 0; j < k; ++j) dprod = rf_mul(dprod, RatFunc{basis_rf[j][c].den, poly_const(1)});
    dprod = rf_mul(dprod, RatFunc{target_rf[c].den, poly_const(1)});
    for (int j = 0; j < k; ++j) entries.push_back(rf_mul(basis_rf[j][c], dprod));
    RatFunc rhs_rf = rf_mul(target_rf[c], dprod);

    // Collect every spatial monomial appearing in any entry.
    std::vector<Monomial> keys;
    auto add_keys = [&](const RatFunc& f) {
      for (const auto& [key, poly] : group_by_spatial(f.num, ctx)) {
        bool present = false;
        for (const auto& existing : keys)
          if (Monomial::compare(existing, key) == 0) present = true;
        if (!present) keys.push_back(key);
      }
    };
    for (const auto& e : entries) add_keys(e);
    add_keys(rhs_rf);

    for (const auto& key : keys) {
      std::vector<RatFunc> row(k + 1);
      auto coeff_of = [&](const RatFunc& f) -> RatFunc {
        for (const auto& [kk, poly] : group_by_spatial(f.num, ctx))
          if (Monomial::compare(kk, key) == 0)
            return rf_div(RatFunc{poly, poly_const(1)}, RatFunc{f.den, poly_const(1)});
        return RatFunc{};
      };
      for (int j = 0; j < k; ++j) row[j] = coeff_of(entries[j]);
      row[k] = coeff_of(rhs_rf);
      rows.push_back(std::move(row));
    }
  }
  std::vector<RatFunc> solution;
  if (!solve_exact(rows, k, solution)) return result;

  // Symbolic certificate: subtract the combination componentwise.
  for (int c = 0; c < comps; ++c) {
    RatFunc lhs = target_rf[c];
    for (int j = 0; j < k; ++j) lhs = rf_sub(lhs, rf_mul(solution[j], basis_rf[j][c]));
    if (!lhs.is_zero()) return result;
  }
  result.in_span = true;
  result.certified = true;
  result.coefficients.reserve(k);
  for (const auto& s : solution) result.coefficients.push_back(uncanon(s));
  return result;
}

}  // namespace stosym
