#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "stosym/calculus.hpp"
#include "stosym/parser.hpp"
#include "testutil.hpp"

using namespace stosym;
using namespace stosym::testutil;

namespace {

Context kfamily_ctx() {
  AtomDecl kp{"kp", {"x"}, {}, {}};
  Context decl("t", {"x"}, {{"lambda", true, false}}, {AtomDecl{"kp", {"x"}, {}, {}}});
  kp.rules["x"] = parse("kp(x)^2 + lambda/x^2", decl);
  return Context("t", {"x"}, {{"lambda", true, false}}, {kp});
}

}  // namespace

TEST_CASE("product, chain and quotient rules") {
  Context c = scalar_ctx();
  CHECK(same_expr(differentiate(parse("x*ln(x)", c), "x", c), parse("ln(x) + 1", c), c));
  CHECK(same_expr(differentiate(parse("2*t^2", c), "t", c), parse("4*t", c), c));
  CHECK(same_expr(differentiate(parse("1/x", c), "x", c), parse("-1/x^2", c), c));
  CHECK(same_expr(differentiate(parse("exp(2*t)", c), "t", c), parse("2*exp(2*t)", c), c));
  CHECK(same_expr(differentiate(parse("sin(x)*cos(x)", c), "x", c),
                  parse("cos(x)^2 - sin(x)^2", c), c));
  CHECK(same_expr(differentiate(parse("sqrt(1 + x^2)", c), "x", c),
                  parse("x/sqrt(1 + x^2)", c), c));
}

TEST_CASE("parameters differentiate to zero") {
  Context c = scalar_ctx();
  CHECK(symbolic_zero(differentiate(parse("alpha*sigma^2", c), "x", c), c));
  CHECK(symbolic_zero(differentiate(parse("alpha*x", c), "alpha", c) - parse("x", c), c));
}

TEST_CASE("atom derivatives go through the declared rewrite rule") {
  Context c = kfamily_ctx();
  CHECK(same_expr(differentiate(parse("kp(x)", c), "x", c),
                  parse("kp(x)^2 + lambda/x^2", c), c));
  // second derivative: 2 kp kp' - 2 lambda / x^3, with kp' rewritten again
  Expr k2 = differentiate(differentiate(parse("kp(x)", c), "x", c), "x", c);
  CHECK(same_expr(k2, parse("2*kp(x)*(kp(x)^2 + lambda/x^2) - 2*lambda/x^3", c), c));
  // chain rule through the argument
  CHECK(same_expr(differentiate(parse("kp(t^2)", c), "t", c),
                  parse("2*t*(kp(t^2)^2 + lambda/t^4)", c), c));
  CHECK(symbolic_zero(differentiate(parse("kp(x)", c), "t", c), c));
}

TEST_CASE("atoms without a rule for a touched argument are an error") {
  AtomDecl h{"h", {"x"}, {}, {}};
  Context c("t", {"x"}, {}, {h});
  CHECK_THROWS_AS(differentiate(parse("h(x)", c), "x", c), std::invalid_argument);
  // untouched argument is fine
  CHECK(symbolic_zero(differentiate(parse("h(x)", c), "t", c), c));
}

TEST_CASE("rule nesting beyond the depth bound is an error") {
  AtomDecl w{"w", {"x"}, {}, {}};
  Context decl("t", {"x"}, {}, {AtomDecl{"w", {"x"}, {}, {}}});
  w.rules["x"] = parse("w(x)", decl);
  Context c("t", {"x"}, {}, {w});
  // Differentiating w(w(...w(x)...)) chains one rule application per nesting
  // level; 20 levels exceed the bound of 16.
  Expr e = parse("x", c);
  for (int i = 0; i < 20; ++i) e = Expr::call("w", {e});
  CHECK_THROWS_AS(differentiate(e, "x", c), std::runtime_error);
  // shallow nesting stays fine
  Expr ok = parse("w(w(x))", c);
  CHECK(same_expr(differentiate(ok, "x", c), parse("w(w(x))*w(x)", c), c));
}

TEST_CASE("substitution is simultaneous and does not re-substitute") {
  Context c("t", {"x", "y"}, {{"A"}});
  Expr e = parse("x^2", c);
  CHECK(same_expr(substitute(e, {{"x", parse("t + 1", c)}}), parse("(t + 1)^2", c), c));
  CHECK(same_expr(substitute(parse("A/x", c), {{"A", parse("1", c)}}), parse("1/x", c), c));
  // no occurrence: unchanged
  Expr tau = parse("t^2 + 1", c);
  CHECK(substitute(tau, {{"x", parse("0", c)}}).same_as(tau));
  // swap must not cascade
  Expr swapped = substitute(parse("x + y", c), {{"x", parse("y", c)}, {"y", parse("x", c)}});
  CHECK(same_expr(swapped, parse("x + y", c), c));
}

TEST_CASE("substitution reaches atom arguments") {
  Context c = kfamily_ctx();
  Expr e = substitute(parse("kp(x)", c), {{"x", parse("t", c)}});
  CHECK(same_expr(e, parse("kp(t)", c), c));
}

TEST_CASE("mixed partials commute on a concrete expression") {
  Context c = scalar_ctx();
  Expr e = parse("t^2*x*ln(x) + exp(t)/x", c);
  Expr dtx = differentiate(differentiate(e, "t", c), "x", c);
  Expr dxt = differentiate(differentiate(e, "x", c), "t", c);
  CHECK(symbolic_zero(dtx - dxt, c));
}
