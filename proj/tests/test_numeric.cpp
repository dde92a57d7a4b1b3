#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "stosym/numeric.hpp"
#include "stosym/parser.hpp"
#include "testutil.hpp"

using namespace stosym;
using namespace stosym::testutil;

TEST_CASE("plain evaluation") {
  Context c = scalar_ctx();
  Point p{{"x", 3.0}, {"t", 1.0}, {"alpha", 2.0}, {"sigma", 1.0}};
  CHECK(eval_numeric(parse("x^2", c), p, c) == doctest::Approx(9.0));
  p["x"] = 0.5;
  CHECK(eval_numeric(parse("alpha*x", c), p, c) == doctest::Approx(1.0));
  CHECK(eval_numeric(parse("sqrt(x)", c), p, c) == doctest::Approx(std::sqrt(0.5)));
}

TEST_CASE("domain faults raise EvalError") {
  Context c = scalar_ctx();
  Point p{{"x", 0.0}, {"t", 1.0}, {"alpha", 1.0}, {"sigma", 1.0}};
  CHECK_THROWS_AS(eval_numeric(parse("1/x", c), p, c), EvalError);
  CHECK_THROWS_AS(eval_numeric(parse("ln(x)", c), p, c), EvalError);
  p["x"] = -1.0;
  CHECK_THROWS_AS(eval_numeric(parse("sqrt(x)", c), p, c), EvalError);
  CHECK_THROWS_AS(eval_numeric(parse("x", c), Point{}, c), EvalError);
}

TEST_CASE("atoms evaluate through their numeric model") {
  AtomDecl sq{"sq", {"y"}, {}, {}};
  {
    Context decl("t", {"x", "y"}, {});
    sq.numeric_model = parse("y^2", decl);
  }
  Context c("t", {"x"}, {}, {sq});
  Point p{{"x", 3.0}, {"t", 1.0}};
  CHECK(eval_numeric(parse("sq(x + 1)", c), p, c) == doctest::Approx(16.0));

  AtomDecl bare{"h", {"y"}, {}, {}};
  Context c2("t", {"x"}, {}, {bare});
  CHECK_THROWS_AS(eval_numeric(parse("h(x)", c2), p, c2), EvalError);
}

TEST_CASE("zero verdicts") {
  Context c = scalar_ctx();
  SamplingConfig cfg;
  CHECK(is_zero(parse("(x + 1)^2 - x^2 - 2*x - 1", c), c, cfg).kind ==
        ZeroVerdict::Kind::ZeroSymbolic);
  auto v = is_zero(parse("1", c), c, cfg);
  CHECK(v.kind == ZeroVerdict::Kind::NonZero);
  REQUIRE(v.witness.has_value());
  CHECK(v.witness_residual > 0.1);
  // aliased logarithms: symbolically distinct generators, numerically zero
  CHECK(is_zero(parse("ln(x^2)*0 + exp(ln(x)) - exp(ln(x))", c), c, cfg).kind ==
        ZeroVerdict::Kind::ZeroSymbolic);
}

TEST_CASE("numeric mode skips the symbolic stage") {
  Context c = scalar_ctx();
  SamplingConfig cfg;
  auto v = is_zero(parse("x - x", c), c, cfg, ZeroMode::Numeric);
  CHECK(v.kind == ZeroVerdict::Kind::ZeroNumeric);
}

TEST_CASE("witnesses are deterministic in the seed") {
  Context c = scalar_ctx();
  SamplingConfig cfg;
  auto v1 = is_zero(parse("alpha - x", c), c, cfg);
  auto v2 = is_zero(parse("alpha - x", c), c, cfg);
  REQUIRE(v1.witness.has_value());
  REQUIRE(v2.witness.has_value());
  CHECK(*v1.witness == *v2.witness);
  CHECK(v1.witness_residual == v2.witness_residual);
  SamplingConfig other = cfg;
  other.seed = 43;
  auto v3 = is_zero(parse("alpha - x", c), c, other);
  CHECK(v3.kind == ZeroVerdict::Kind::NonZero);
}

TEST_CASE("sampling ranges respect overrides and defaults") {
  Context c = scalar_ctx();
  SamplingConfig cfg;
  cfg.overrides["x"] = {5.0, 6.0};
  for (int i = 0; i < 10; ++i) {
    Point p = sample_point(c, cfg, i);
    CHECK(p.at("x") >= 5.0);
    CHECK(p.at("x") <= 6.0);
    CHECK(p.at("t") >= 0.1);
    CHECK(p.at("t") <= 2.0);
    CHECK(p.at("alpha") >= 0.5);
    CHECK(p.at("alpha") <= 2.0);
  }
}

TEST_CASE("points with domain faults are redrawn") {
  Context c = scalar_ctx();
  SamplingConfig cfg;
  cfg.overrides["x"] = {0.5, 2.0};
  // ln(x - 1) faults on part of the box; the verdict must still come back.
  auto v = is_zero(parse("ln(x + 1) - ln(x + 1)", c), c, cfg);
  CHECK(v.is_zero());
  auto v2 = is_zero(parse("ln(x + 1)", c), c, cfg);
  CHECK(v2.kind == ZeroVerdict::Kind::NonZero);
}

TEST_CASE("invalid configs are rejected") {
  Context c = scalar_ctx();
  SamplingConfig cfg;
  cfg.points = 0;
  CHECK_THROWS_AS(is_zero(parse("x", c), c, cfg), std::invalid_argument);
  cfg.points = 10;
  cfg.tolerance = 0.0;
  CHECK_THROWS_AS(is_zero(parse("x", c), c, cfg), std::invalid_argument);
}
