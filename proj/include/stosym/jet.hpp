#pragma once

#include <string>
#include <vector>

#include "stosym/canon.hpp"
#include "stosym/sde.hpp"
#include "stosym/vectorfield.hpp"

namespace stosym {

/// A formal derivative coordinate u_{t^a x_I}: t_order is 0 or 1, x_orders
/// counts derivatives per state variable. Spatial indices are symmetric, so
/// the counts are the canonical form.
struct JetVar {
  int t_order = 0;
  std::vector<int> x_orders;  // size n

  static JetVar u(int n);
  static JetVar ut(int n);
  static JetVar ux(int n, int i);
  static JetVar uxx(int n, int i, int j);
  static int compare(const JetVar& a, const JetVar& b);
  int total_order() const;
  std::string str(const Context& ctx) const;
};

/// Product of jet variables (possibly empty: a pure (t,x) term).
struct JetMonomial {
  std::vector<std::pair<JetVar, int>> factors;  // sorted, exponents > 0

  static int compare(const JetMonomial& a, const JetMonomial& b);
  std::string str(const Context& ctx) const;
};

/// Polynomial in jet variables with coefficients over (t, x, parameters).
struct JetPoly {
  std::vector<std::pair<JetMonomial, RatFunc>> terms;

  bool is_zero() const { return terms.empty(); }
  std::string str(const Context& ctx) const;
};

JetPoly jet_zero();
JetPoly jet_coeff(const RatFunc& c);                     // c * 1
JetPoly jet_var(const JetVar& v, const RatFunc& coeff);  // coeff * v
JetPoly jet_add(const JetPoly& a, const JetPoly& b);
JetPoly jet_scale(const JetPoly& a, const RatFunc& c);
JetPoly jet_mul(const JetPoly& a, const JetPoly& b);
bool jet_equal(const JetPoly& a, const JetPoly& b);

/// Total derivative D_t (var = time) or D_{x_i} (var = state name).
JetPoly jet_total_derivative(const JetPoly& p, const std::string& var, const Context& ctx);

/// Second prolongation of a point field with u-linear vertical part
///   eta = multiplier * u + shift.
struct ProlongedField {
  VectorField base;
  JetPoly zeta_t;
  std::vector<JetPoly> zeta_x;                // per state
  std::vector<std::vector<JetPoly>> zeta_xx;  // symmetric
};

ProlongedField prolong(const VectorField& x, const Context& ctx);

/// Applies the prolonged field to the equation surface
///   Delta = u_t + ea_{ij} u_{x_i x_j} + eb_k u_{x_k} + ec u
/// and restricts to solutions by substituting u_t and u_{t x_j}. The
/// candidate is a symmetry exactly when the returned polynomial vanishes.
JetPoly invariance_residual(const KolmogorovEquation& e, const VectorField& x);

/// Coefficients grouped by jet monomial; the empty monomial groups the
/// jet-free part. Vanishing of every coefficient is equivalent to vanishing
/// of the polynomial.
std::vector<std::pair<JetMonomial, Expr>> split_by_monomials(const JetPoly& p);

}  // namespace stosym
