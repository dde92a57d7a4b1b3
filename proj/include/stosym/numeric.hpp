#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "stosym/canon.hpp"
#include "stosym/context.hpp"
#include "stosym/expr.hpp"

namespace stosym {

class EvalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Point = std::map<std::string, double>;

/// Floating-point evaluation. Every free symbol must be bound; atoms are
/// evaluated through their declared numeric model. Throws EvalError on
/// domain faults (ln of a non-positive value, division by zero, ...).
double eval_numeric(const Expr& e, const Point& point, const Context& ctx);

struct SamplingConfig {
  int points = 100;
  double tolerance = 1e-9;
  std::uint64_t seed = 42;
  int retries = 32;  // extra draws allowed per point on domain errors
  std::pair<double, double> time_range{0.1, 2.0};
  std::pair<double, double> state_range{0.5, 2.0};
  std::pair<double, double> param_range{0.5, 2.0};
  std::map<std::string, std::pair<double, double>> overrides;

  std::pair<double, double> range_for(const std::string& name, const Context& ctx) const;
};

enum class ZeroMode { Symbolic, Numeric, Both };

struct ZeroVerdict {
  enum class Kind { ZeroSymbolic, ZeroNumeric, NonZero };
  Kind kind = Kind::ZeroSymbolic;
  std::optional<Point> witness;       // NonZero only
  double witness_residual = 0.0;      // scaled residual at the witness
  double max_scaled_residual = 0.0;   // over all sampled points

  bool is_zero() const { return kind != Kind::NonZero; }
};

std::string to_string(ZeroVerdict::Kind kind);

/// Decides whether an expression vanishes identically.
///
/// Symbolic stage: the canonical numerator is the zero polynomial. Numeric
/// stage: sample `points` pseudo-random points (deterministic in the seed)
/// and compare the scaled residual |value| / (1 + max |term|) against the
/// tolerance. NonZero verdicts always carry a witness point.
ZeroVerdict is_zero(const Expr& e, const Context& ctx, const SamplingConfig& cfg,
                    ZeroMode mode = ZeroMode::Both);

/// Samples one point for the free symbols of the context (all declared
/// variables and parameters). Index selects the point deterministically.
Point sample_point(const Context& ctx, const SamplingConfig& cfg, int index);

}  // namespace stosym
