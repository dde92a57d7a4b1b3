#pragma once

#include <string>
#include <vector>

#include "stosym/canon.hpp"
#include "stosym/context.hpp"
#include "stosym/expr.hpp"
#include "stosym/numeric.hpp"

namespace stosym {

/// Ito system dx_i = f_i(t,x) dt + g_{i,alpha}(t,x) dW_alpha.
struct SdeSystem {
  Context ctx;
  std::vector<Expr> drift;                  // n entries
  std::vector<std::vector<Expr>> diffusion; // n x m

  int n() const { return static_cast<int>(drift.size()); }
  int m() const { return drift.empty() ? 0 : static_cast<int>(diffusion.front().size()); }

  /// Checks shape consistency and that A = (1/2) g g^T is not identically
  /// zero; throws std::invalid_argument otherwise.
  void validate() const;
};

/// Drift operator D0 = d/dt + f_j d/dx_j + (1/2) g_{j,a} g_{k,a} d2/dx_j dx_k.
Expr d0_apply(const SdeSystem& s, const Expr& f);

/// Diffusion operator D_alpha = g_{j,alpha} d/dx_j; alpha is 1-based.
Expr dalpha_apply(const SdeSystem& s, const Expr& f, int alpha);

/// dF = D0(F) dt + D_alpha(F) dW_alpha.
struct ItoDifferential {
  Expr dt_coefficient;
  std::vector<Expr> dw_coefficients;  // m entries
};

ItoDifferential ito_differential(const SdeSystem& s, const Expr& f);

enum class PdeKind { Backward, Forward };

/// Kolmogorov equation attached to its generating SDE system.
///
/// `a` and `b` are the backward-form fields A_{ij} = (1/2) g_{i,a} g_{j,a}
/// and B_k = f_k. The expanded fields describe the PDE as
///   u_t + ea_{ij} u_{x_i x_j} + eb_k u_{x_k} + ec u = 0
/// for either kind, which is the single shape the checkers and the jet
/// oracle consume.
struct KolmogorovEquation {
  PdeKind kind = PdeKind::Backward;
  SdeSystem sde;
  std::vector<std::vector<Expr>> a;
  std::vector<Expr> b;
  std::vector<std::vector<Expr>> ea;
  std::vector<Expr> eb;
  Expr ec;
};

KolmogorovEquation kbe_of(const SdeSystem& s);
KolmogorovEquation kfe_of(const SdeSystem& s);

/// Canonical-form view of a system, caching f and g; the building block the
/// checkers and transfer maps share.
class SdeOperators {
 public:
  explicit SdeOperators(const SdeSystem& s);

  const SdeSystem& system() const { return *s_; }
  const Context& ctx() const { return s_->ctx; }
  int n() const { return s_->n(); }
  int m() const { return s_->m(); }
  const RatFunc& f(int i) const { return f_[i]; }
  const RatFunc& g(int i, int alpha1) const { return g_[i][alpha1 - 1]; }

  RatFunc d0(const RatFunc& value) const;
  RatFunc dalpha(const RatFunc& value, int alpha1) const;
  RatFunc dt(const RatFunc& value) const;            // plain d/dt
  RatFunc dx(const RatFunc& value, int i) const;     // plain d/dx_i

 private:
  const SdeSystem* s_;
  std::vector<RatFunc> f_;
  std::vector<std::vector<RatFunc>> g_;
};

}  // namespace stosym
