#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "stosym/bridge.hpp"
#include "stosym/corpus.hpp"
#include "testutil.hpp"

using namespace stosym;
using namespace stosym::testutil;

namespace {
const SamplingConfig cfg;
}

TEST_CASE("the case list is stable") {
  auto names = list_cases();
  std::vector<std::string> expect{"heat",    "driftAx",    "autonomous",      "gbm",
                                  "kfamily", "integral2d", "generic-negative"};
  CHECK(names == expect);
  CHECK(list_cases("kfe") == std::vector<std::string>{"heat", "gbm", "kfamily"});
  CHECK(list_cases("nosuchtag").empty());
  CHECK(find_case("nosuch") == nullptr);
  CHECK_THROWS_AS(run_case("nosuch", cfg), std::invalid_argument);
}

TEST_CASE("every case matches its expected verdicts") {
  for (const auto& name : list_cases()) {
    CaseRunResult r = run_case(name, cfg, ZeroMode::Both);
    CAPTURE(name);
    for (const auto& o : r.outcomes) {
      CAPTURE(o.scenario);
      CAPTURE(o.item);
      CAPTURE(o.detail);
      CHECK(o.matched);
    }
    CHECK(r.all_matched);
  }
}

TEST_CASE("expected passes are symbolic, expected failures carry witnesses") {
  for (const auto& cat : catalog()) {
    for (const auto& sc : cat.scenarios) {
      for (const auto& cand : sc.candidates) {
        CAPTURE(cat.name);
        CAPTURE(cand.name);
        CheckReport r = run_candidate(sc.sde, cand, cfg, ZeroMode::Both);
        REQUIRE(r.pass == cand.expect_pass);
        if (cand.expect_pass) {
          for (const auto& e : r.entries)
            CHECK(e.verdict.kind == ZeroVerdict::Kind::ZeroSymbolic);
        } else {
          bool witnessed = false;
          for (const auto& e : r.entries)
            if (e.verdict.kind == ZeroVerdict::Kind::NonZero && e.verdict.witness)
              witnessed = true;
          CHECK(witnessed);
        }
      }
    }
  }
}

TEST_CASE("system symmetries are always admitted by the backward equation") {
  for (const auto& cat : catalog()) {
    for (const auto& sc : cat.scenarios) {
      KolmogorovEquation kbe = kbe_of(sc.sde);
      for (const auto& cand : sc.candidates) {
        if (cand.kind != CandidateKind::Sde || !cand.expect_pass) continue;
        CAPTURE(cat.name);
        CAPTURE(cand.name);
        CHECK(check_kbe_symmetry(kbe, cand.field, cfg).pass);
      }
    }
  }
}

TEST_CASE("first integrals are always admitted as multiplier symmetries") {
  for (const auto& cat : catalog()) {
    for (const auto& sc : cat.scenarios) {
      for (const auto& cand : sc.candidates) {
        if (cand.kind != CandidateKind::FirstIntegral || !cand.expect_pass) continue;
        CAPTURE(cat.name);
        CAPTURE(cand.name);
        CHECK(check_integral_symmetry(kbe_of(sc.sde), cand.expression, cfg).pass);
        // and the stochastic differential of the integral vanishes entirely
        ItoDifferential d = ito_differential(sc.sde, cand.expression);
        CHECK(symbolic_zero(d.dt_coefficient, sc.sde.ctx));
        for (const auto& w : d.dw_coefficients) CHECK(symbolic_zero(w, sc.sde.ctx));
      }
    }
  }
}

TEST_CASE("backward and forward verdicts agree through the multiplier relation") {
  for (const auto& cat : catalog()) {
    for (const auto& sc : cat.scenarios) {
      for (const auto& cand : sc.candidates) {
        if (cand.kind != CandidateKind::Kbe || !cand.expect_pass) continue;
        CAPTURE(cat.name);
        CAPTURE(cand.name);
        TransferRecord rec = kbe_to_kfe(sc.sde, cand.field, cfg);
        CHECK(rec.target_report.pass);
        TransferRecord back = kfe_to_kbe(sc.sde, rec.target, cfg);
        ModX0Result cmp = equals_mod_x0(back.target, cand.field, sc.sde.ctx);
        CHECK(cmp.matches);
        CHECK(symbolic_zero(cmp.constant, sc.sde.ctx));
      }
    }
  }
}

TEST_CASE("numeric-only mode reproduces every verdict") {
  for (const auto& name : list_cases()) {
    CaseRunResult r = run_case(name, cfg, ZeroMode::Numeric);
    CAPTURE(name);
    CHECK(r.all_matched);
  }
}
