#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "stosym/corpus.hpp"
#include "stosym/numeric.hpp"
#include "stosym/sde.hpp"

namespace stosym {

/// One system plus its candidate blocks, as read from a problem file.
struct Problem {
  std::string name;
  SdeSystem sde;
  std::vector<Candidate> candidates;
  SamplingConfig sampling;
};

Problem problem_from_json(const nlohmann::json& j);
nlohmann::json problem_to_json(const Problem& p);
Problem load_problem(const std::string& path);

/// A catalog scenario as a standalone problem (candidates carry their
/// expected verdicts, so re-running reproduces the catalog).
Problem scenario_to_problem(const CatalogCase& c, const Scenario& s);

nlohmann::json report_to_json(const CheckReport& r);
CheckReport report_from_json(const nlohmann::json& j, const Context& ctx);
std::string report_to_text(const CheckReport& r);

nlohmann::json sampling_to_json(const SamplingConfig& cfg);
SamplingConfig sampling_from_json(const nlohmann::json& j);

}  // namespace stosym
