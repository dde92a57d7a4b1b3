#pragma once

#include <stdexcept>
#include <string>

#include "stosym/checks.hpp"
#include "stosym/sde.hpp"
#include "stosym/vectorfield.hpp"

namespace stosym {

/// Thrown when a transfer is asked to map a field that fails its source
/// determining system; unverified fields are never propagated.
class TransferRefused : public std::runtime_error {
 public:
  TransferRefused(std::string rule, CheckReport source_report)
      : std::runtime_error("transfer " + rule + " refused: source check failed"),
        report(std::move(source_report)) {}
  CheckReport report;
};

struct TransferRecord {
  std::string rule;
  VectorField source;
  VectorField target;
  Expr auxiliary;        // the multiplier produced by the rule
  CheckReport source_report;
  CheckReport target_report;  // target re-verified, always
};

/// SDE symmetry -> backward-equation symmetry with zero multiplier.
TransferRecord sde_to_kbe(const SdeSystem& s, const VectorField& x,
                          const SamplingConfig& cfg, ZeroMode mode = ZeroMode::Both);

/// First integral I -> multiplier symmetry I u d/du of the backward equation.
TransferRecord integral_to_kbe(const SdeSystem& s, const Expr& integral,
                               const SamplingConfig& cfg, ZeroMode mode = ZeroMode::Both);

/// Backward <-> forward multiplier relation
///   phi + chi = D0(tau) - tau_t - div(xi).
TransferRecord kbe_to_kfe(const SdeSystem& s, const VectorField& x,
                          const SamplingConfig& cfg, ZeroMode mode = ZeroMode::Both);
TransferRecord kfe_to_kbe(const SdeSystem& s, const VectorField& x,
                          const SamplingConfig& cfg, ZeroMode mode = ZeroMode::Both);

/// SDE symmetry -> forward-equation symmetry with
///   chi = D0(tau) - tau_t - div(xi).
TransferRecord sde_to_kfe(const SdeSystem& s, const VectorField& x,
                          const SamplingConfig& cfg, ZeroMode mode = ZeroMode::Both);

}  // namespace stosym
