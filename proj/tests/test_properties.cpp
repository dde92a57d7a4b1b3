#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "stosym/calculus.hpp"
#include "stosym/numeric.hpp"
#include "stosym/parser.hpp"
#include "stosym/sde.hpp"
#include "stosym/vectorfield.hpp"
#include "testutil.hpp"

using namespace stosym;
using namespace stosym::testutil;

namespace {

const SamplingConfig cfg;

// Generation occasionally builds an identically-zero denominator; those
// draws don't count towards the instance budget.
template <typename F>
void for_instances(int count, std::uint64_t seed, F&& body) {
  Context c = scalar_ctx();
  ExprGen gen(c, seed);
  int done = 0;
  int guard = 0;
  while (done < count) {
    REQUIRE(++guard < count * 20);
    try {
      if (body(c, gen)) ++done;
    } catch (const std::domain_error&) {
      continue;
    }
  }
}

}  // namespace

TEST_CASE("mixed partial derivatives commute") {
  for_instances(250, 101, [](const Context& c, ExprGen& gen) {
    Expr e = gen(3);
    Expr dtx = differentiate(differentiate(e, "t", c), "x", c);
    Expr dxt = differentiate(differentiate(e, "x", c), "t", c);
    CAPTURE(e.str());
    CHECK(symbolic_zero(dtx - dxt, c));
    return true;
  });
}

TEST_CASE("normalize is idempotent on random expressions") {
  for_instances(250, 202, [](const Context& c, ExprGen& gen) {
    Expr e = gen(3);
    Expr n1 = normalize(e, c);
    Expr n2 = normalize(n1, c);
    CAPTURE(e.str());
    CHECK(n1.same_as(n2));
    return true;
  });
}

TEST_CASE("printing and reparsing preserves the value") {
  for_instances(250, 303, [](const Context& c, ExprGen& gen) {
    Expr e = gen(3);
    Expr back = parse(e.str(), c);
    CAPTURE(e.str());
    CHECK(symbolic_zero(e - back, c));
    return true;
  });
}

TEST_CASE("evaluation is additive across normalization") {
  Context c = scalar_ctx();
  ExprGen gen(c, 404);
  int done = 0, guard = 0;
  while (done < 1000) {
    REQUIRE(++guard < 20000);
    Expr a = gen(3), b = gen(3);
    Expr n;
    try {
      n = normalize(a + b, c);
    } catch (const std::domain_error&) {
      continue;
    }
    Point p = sample_point(c, cfg, done);
    double va, vb, vn;
    try {
      va = eval_numeric(a, p, c);
      vb = eval_numeric(b, p, c);
      vn = eval_numeric(n, p, c);
    } catch (const EvalError&) {
      continue;
    }
    if (!std::isfinite(va) || !std::isfinite(vb) || !std::isfinite(vn)) continue;
    double expect = va + vb;
    double scale = std::max(1.0, std::max(std::fabs(va), std::fabs(vb)));
    CAPTURE(a.str());
    CAPTURE(b.str());
    CHECK(std::fabs(vn - expect) / scale < 1e-9);
    ++done;
  }
}

TEST_CASE("derivatives agree with central finite differences") {
  Context c = scalar_ctx();
  ExprGen gen(c, 505);
  int done = 0, guard = 0;
  while (done < 60) {
    REQUIRE(++guard < 3000);
    Expr e = gen(3);
    Expr de;
    try {
      de = differentiate(e, "x", c);
    } catch (const std::domain_error&) {
      continue;
    }
    Point p = sample_point(c, cfg, done + 17);
    const double h = 1e-6;
    double plus, minus, sym;
    try {
      Point pp = p, pm = p;
      pp["x"] += h;
      pm["x"] -= h;
      plus = eval_numeric(e, pp, c);
      minus = eval_numeric(e, pm, c);
      sym = eval_numeric(de, p, c);
    } catch (const EvalError&) {
      continue;
    }
    double fd = (plus - minus) / (2 * h);
    if (!std::isfinite(fd) || !std::isfinite(sym)) continue;
    double scale = std::max(1.0, std::fabs(fd));
    CAPTURE(e.str());
    CHECK(std::fabs(sym - fd) / scale < 1e-4);
    ++done;
  }
}

TEST_CASE("symbolic zeros stay zero under sampling") {
  for_instances(100, 606, [](const Context& c, ExprGen& gen) {
    Expr e = gen(2);
    Expr silly = e - e;  // identically zero by construction
    ZeroVerdict both = is_zero(silly, c, cfg, ZeroMode::Both);
    CHECK(both.kind == ZeroVerdict::Kind::ZeroSymbolic);
    ZeroVerdict numeric = is_zero(silly, c, cfg, ZeroMode::Numeric);
    CHECK(numeric.is_zero());
    return true;
  });
}

TEST_CASE("drift and noise operators are linear") {
  SdeSystem s = gbm();
  const Context& c = s.ctx;
  ExprGen gen(c, 707);
  for (int i = 0; i < 100; ++i) {
    Expr f = gen.polynomial(3);
    Expr g = gen.polynomial(3);
    Expr lhs = d0_apply(s, Expr::number(3) * f + Expr::number(-2) * g);
    Expr rhs = Expr::number(3) * d0_apply(s, f) + Expr::number(-2) * d0_apply(s, g);
    CAPTURE(f.str());
    CAPTURE(g.str());
    CHECK(symbolic_zero(lhs - rhs, c));
    Expr dl = dalpha_apply(s, Expr::number(3) * f + Expr::number(-2) * g, 1);
    Expr dr = Expr::number(3) * dalpha_apply(s, f, 1) + Expr::number(-2) * dalpha_apply(s, g, 1);
    CHECK(symbolic_zero(dl - dr, c));
  }
}

TEST_CASE("product deviation identity over random polynomial pairs") {
  // D0(FG) - F D0(G) - G D0(F) = sum_a D_a(F) D_a(G): the algebraic trace of
  // the substitution rule dW_a dW_b = delta_ab dt.
  Context c2("t", {"x1", "x2"}, {{"alpha"}});
  SdeSystem two{c2,
                {parse("alpha*x1", c2), parse("x2 + x1", c2)},
                {{parse("1", c2), parse("x2", c2)}, {parse("x1", c2), parse("2", c2)}}};
  for (SdeSystem s : {gbm(), two}) {
    ExprGen gen(s.ctx, 808);
    for (int i = 0; i < 110; ++i) {
      Expr f = gen.polynomial(3);
      Expr g = gen.polynomial(3);
      Expr lhs = d0_apply(s, f * g) - f * d0_apply(s, g) - g * d0_apply(s, f);
      Expr rhs = Expr::number(0);
      for (int a = 1; a <= s.m(); ++a)
        rhs = rhs + dalpha_apply(s, f, a) * dalpha_apply(s, g, a);
      CAPTURE(f.str());
      CAPTURE(g.str());
      CHECK(symbolic_zero(lhs - rhs, s.ctx));
    }
  }
}

namespace {

VectorField random_field(ExprGen& gen, const std::string& name) {
  VectorField f;
  f.name = name;
  f.tau = gen.polynomial(2);
  f.xi = {gen.polynomial(2)};
  return f;
}

}  // namespace

TEST_CASE("brackets are antisymmetric") {
  Context c = scalar_ctx();
  ExprGen gen(c, 909);
  for (int i = 0; i < 250; ++i) {
    VectorField x = random_field(gen, "x");
    VectorField y = random_field(gen, "y");
    VectorField xy = lie_bracket(x, y, c);
    VectorField yx = lie_bracket(y, x, c);
    CHECK(symbolic_zero(xy.tau + yx.tau, c));
    CHECK(symbolic_zero(xy.xi[0] + yx.xi[0], c));
  }
}

TEST_CASE("brackets satisfy the Jacobi identity") {
  Context c = scalar_ctx();
  ExprGen gen(c, 1010);
  for (int i = 0; i < 210; ++i) {
    VectorField x = random_field(gen, "x");
    VectorField y = random_field(gen, "y");
    VectorField z = random_field(gen, "z");
    VectorField a = lie_bracket(lie_bracket(x, y, c), z, c);
    VectorField b = lie_bracket(lie_bracket(y, z, c), x, c);
    VectorField d = lie_bracket(lie_bracket(z, x, c), y, c);
    CHECK(symbolic_zero(a.tau + b.tau + d.tau, c));
    CHECK(symbolic_zero(a.xi[0] + b.xi[0] + d.xi[0], c));
  }
}
