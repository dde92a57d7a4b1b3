#pragma once

#include <optional>
#include <string>
#include <vector>

#include "stosym/checks.hpp"
#include "stosym/sde.hpp"
#include "stosym/vectorfield.hpp"

namespace stosym {

enum class CandidateKind {
  Sde,
  Kbe,
  Kfe,
  FirstIntegral,
  IntegralSymmetry,
  Trivial,
  ConverseSde,
  ConverseIntegral,
};

std::string to_string(CandidateKind kind);
std::optional<CandidateKind> candidate_kind_from(const std::string& text);

struct Candidate {
  std::string name;
  CandidateKind kind = CandidateKind::Sde;
  VectorField field;   // field kinds
  Expr expression;     // integral and trivial kinds
  bool expect_pass = true;
  std::string origin;  // where the candidate comes from / how it was curated
};

struct BracketExpectation {
  std::string first;
  std::string second;
  bool expect_in_span = true;
  // Expected span coefficients over the SDE candidates, in declaration order.
  std::vector<Expr> coefficients;
};

struct TransferExpectation {
  std::string rule;    // sde-kbe | sde-kfe | kbe-kfe | kfe-kbe | integral-kbe
  std::string source;  // candidate name (or integral name)
  std::string target;  // declared candidate the mapped field should match
  bool exact = true;   // exact match; otherwise modulo u d/du with `offset`
  Expr offset;
  bool expect_refused = false;
};

struct Scenario {
  std::string name;
  SdeSystem sde;
  std::vector<Candidate> candidates;
  std::vector<BracketExpectation> brackets;
  std::vector<TransferExpectation> transfers;
  bool jet_cross_check = true;
};

struct CatalogCase {
  std::string name;
  std::vector<std::string> tags;
  std::vector<Scenario> scenarios;
};

const std::vector<CatalogCase>& catalog();
const CatalogCase* find_case(const std::string& name);
std::vector<std::string> list_cases(const std::string& tag = "");

struct CaseOutcome {
  std::string scenario;
  std::string item;  // "check X2", "bracket [X1,X2]", "map sde-kfe X2", ...
  bool matched = false;
  std::string detail;
  std::optional<CheckReport> report;
};

struct CaseRunResult {
  std::string name;
  bool all_matched = true;
  std::vector<CaseOutcome> outcomes;
};

/// Runs every check, bracket, transfer and jet cross-check a case declares
/// and compares against the expected verdicts.
CaseRunResult run_case(const std::string& name, const SamplingConfig& cfg,
                       ZeroMode mode = ZeroMode::Both);

/// Runs one candidate the way run_case would, without expectation matching.
CheckReport run_candidate(const SdeSystem& sde, const Candidate& c,
                          const SamplingConfig& cfg, ZeroMode mode);

}  // namespace stosym
