#pragma once

#include <optional>
#include <string>
#include <vector>

#include "stosym/context.hpp"
#include "stosym/expr.hpp"
#include "stosym/numeric.hpp"

namespace stosym {

/// Candidate symmetry generator
///   X = tau d/dt + xi_i d/dx_i [+ multiplier * u d/du] [+ shift d/du].
/// Coefficients depend on (t, x, parameters) only. SDE candidates carry
/// neither multiplier nor shift; KBE/KFE candidates carry a multiplier;
/// superposition fields carry only a shift.
struct VectorField {
  std::string name;
  Expr tau;
  std::vector<Expr> xi;
  std::optional<Expr> multiplier;
  std::optional<Expr> shift;

  int n() const { return static_cast<int>(xi.size()); }
};

struct FieldBasis {
  std::vector<VectorField> fields;  // names unique
};

/// Commutator [X, Y]. Multipliers transform as coefficients of u d/du:
/// the bracket multiplier is X(phi_Y) - Y(phi_X) with the fields acting
/// through tau d/dt + xi_i d/dx_i. Fields with shifts are rejected.
VectorField lie_bracket(const VectorField& x, const VectorField& y, const Context& ctx);

/// Result of comparing two fields up to the linearity symmetry u d/du:
/// match requires tau and xi to agree symbolically and the multipliers to
/// differ by a constant (in t and x; it may involve parameters).
struct ModX0Result {
  bool matches = false;
  Expr constant;          // first.multiplier - second.multiplier when matches
  std::string mismatch;   // label of the offending component otherwise
};

ModX0Result equals_mod_x0(const VectorField& x, const VectorField& y, const Context& ctx);

struct SpanResult {
  bool in_span = false;
  std::vector<Expr> coefficients;  // rational in the parameters
  double least_squares_residual = 0.0;
  bool certified = false;          // symbolic certificate of the combination
};

/// Decides X = sum c_k basis_k with constant c_k (rational functions of the
/// parameters). A numeric least-squares fit at sampled points filters first;
/// an exact linear solve over the parameter field finds the coefficients and
/// the combination is certified symbolically.
SpanResult span_membership(const VectorField& x, const FieldBasis& basis,
                           const Context& ctx, const SamplingConfig& cfg);

}  // namespace stosym
