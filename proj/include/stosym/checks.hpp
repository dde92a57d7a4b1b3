#pragma once

#include <optional>
#include <string>
#include <vector>

#include "stosym/numeric.hpp"
#include "stosym/sde.hpp"
#include "stosym/vectorfield.hpp"

namespace stosym {

enum class CheckKind {
  SdeSymmetry,
  KbeSymmetry,
  KfeSymmetry,
  FirstIntegral,
  IntegralSymmetry,
  TrivialSymmetry,
  ConverseSde,
  ConverseIntegral,
};

std::string to_string(CheckKind kind);

struct ResidualEntry {
  std::string label;            // names the determining equation
  Expr residual;                // normalized
  ZeroVerdict verdict;
  std::vector<Expr> factors;    // parameter factors of a nonzero residual
};

struct CheckReport {
  CheckKind kind = CheckKind::SdeSymmetry;
  std::string candidate;
  std::vector<ResidualEntry> entries;
  bool pass = false;
  std::vector<std::string> side_conditions;  // nonzero assumptions used
  std::optional<Expr> q;                     // forward-equation auxiliary
  // Converse checks split their entries in two labeled groups.
  int group_boundary = -1;
};

/// Symmetry conditions of an Ito system for X = tau d/dt + xi_i d/dx_i:
///   drift(i):      D0(xi_i) - X(f_i) - f_i D0(tau)
///   diffusion(i,a): D_a(xi_i) - X(g_{i,a}) - (1/2) g_{i,a} D0(tau)
///   time(a):       D_a(tau)
CheckReport check_sde_symmetry(const SdeSystem& s, const VectorField& x,
                               const SamplingConfig& cfg, ZeroMode mode = ZeroMode::Both);

/// First-integral conditions D0(I) = 0 and D_a(I) = 0.
CheckReport check_first_integral(const SdeSystem& s, const Expr& integral,
                                 const SamplingConfig& cfg, ZeroMode mode = ZeroMode::Both);

/// Backward-equation symmetry conditions for X with multiplier phi:
///   time-coefficient(i):  g_{i,a} D_a(tau)
///   diffusion-sym(i,j):   symmetrized diffusion condition
///   drift(i):             D0(xi_i) - X(f_i) - f_i D0(tau) - g_{i,a} D_a(phi)
///   multiplier-evolution: D0(phi)
CheckReport check_kbe_symmetry(const KolmogorovEquation& e, const VectorField& x,
                               const SamplingConfig& cfg, ZeroMode mode = ZeroMode::Both);

/// Forward-equation symmetry conditions for X with multiplier chi; the
/// auxiliary Q = chi + div(xi) + tau_t - D0(tau) is computed and reported:
///   time-coefficient(i), diffusion-sym(i,j) as for the backward equation,
///   drift(i):    D0(xi_i) - X(f_i) - f_i D0(tau) + g_{i,a} D_a(Q)
///   q-evolution: D0(Q)
CheckReport check_kfe_symmetry(const KolmogorovEquation& e, const VectorField& x,
                               const SamplingConfig& cfg, ZeroMode mode = ZeroMode::Both);

/// Checks the multiplier field I * u d/du against the backward equation.
CheckReport check_integral_symmetry(const KolmogorovEquation& e, const Expr& integral,
                                    const SamplingConfig& cfg, ZeroMode mode = ZeroMode::Both);

/// Checks that psi solves the equation, i.e. psi d/du is a superposition
/// symmetry.
CheckReport check_trivial_symmetry(const KolmogorovEquation& e, const Expr& psi,
                                   const SamplingConfig& cfg, ZeroMode mode = ZeroMode::Both);

/// Backward-equation symmetry with zero multiplier plus the per-channel
/// diffusion and time conditions: together they certify an SDE symmetry.
CheckReport converse_sde_from_kbe(const SdeSystem& s, const VectorField& x,
                                  const SamplingConfig& cfg, ZeroMode mode = ZeroMode::Both);

/// Multiplier symmetry plus D_a(I) = 0: certifies a first integral.
CheckReport converse_integral_from_kbe(const SdeSystem& s, const Expr& integral,
                                       const SamplingConfig& cfg, ZeroMode mode = ZeroMode::Both);

}  // namespace stosym
