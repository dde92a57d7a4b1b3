#include "stosym/corpus.hpp"

#include <optional>
#include <sstream>
#include <stdexcept>

#include "stosym/bridge.hpp"
#include "stosym/calculus.hpp"
#include "stosym/jet.hpp"
#include "stosym/parser.hpp"

namespace stosym {

std::string to_string(CandidateKind kind) {
  switch (kind) {
    case CandidateKind::Sde:
      return "sde";
    case CandidateKind::Kbe:
      return "kbe";
    case CandidateKind::Kfe:
      return "kfe";
    case CandidateKind::FirstIntegral:
      return "first-integral";
    case CandidateKind::IntegralSymmetry:
      return "integral-symmetry";
    case CandidateKind::Trivial:
      return "trivial";
    case CandidateKind::ConverseSde:
      return "converse-sde";
    case CandidateKind::ConverseIntegral:
      return "converse-integral";
  }
  return "?";
}

std::optional<CandidateKind> candidate_kind_from(const std::string& text) {
  for (CandidateKind k :
       {CandidateKind::Sde, CandidateKind::Kbe, CandidateKind::Kfe, CandidateKind::FirstIntegral,
        CandidateKind::IntegralSymmetry, CandidateKind::Trivial, CandidateKind::ConverseSde,
        CandidateKind::ConverseIntegral}) {
    if (to_string(k) == text) return k;
  }
  return std::nullopt;
}

namespace {

struct CaseBuilder {
  Scenario sc;
  const Context& ctx() { return sc.sde.ctx; }

  Candidate& field(std::string name, CandidateKind kind, const std::string& tau,
                   std::vector<std::string> xi, const char* multiplier, bool pass,
                   std::string origin) {
    Candidate c;
    c.name = std::move(name);
    c.kind = kind;
    c.field.name = c.name;
    c.field.tau = parse(tau, ctx());
    for (const auto& s : xi) c.field.xi.push_back(parse(s, ctx()));
    if (multiplier) c.field.multiplier = parse(multiplier, ctx());
    c.expect_pass = pass;
    c.origin = std::move(origin);
    sc.candidates.push_back(std::move(c));
    return sc.candidates.back();
  }

  Candidate& expression(std::string name, CandidateKind kind, const std::string& text, bool pass,
                        std::string origin) {
    Candidate c;
    c.name = std::move(name);
    c.kind = kind;
    c.expression = parse(text, ctx());
    c.expect_pass = pass;
    c.origin = std::move(origin);
    sc.candidates.push_back(std::move(c));
    return sc.candidates.back();
  }

  void bracket(std::string a, std::string b, std::vector<std::string> coeffs) {
    BracketExpectation e;
    e.first = std::move(a);
    e.second = std::move(b);
    for (const auto& s : coeffs) e.coefficients.push_back(parse(s, ctx()));
    sc.brackets.push_back(std::move(e));
  }

  void transfer(std::string rule, std::string source, std::string target, bool exact,
                const char* offset = nullptr, bool refused = false) {
    TransferExpectation e;
    e.rule = std::move(rule);
    e.source = std::move(source);
    e.target = std::move(target);
    e.exact = exact;
    e.offset = offset ? parse(offset, ctx()) : Expr::number(0);
    e.expect_refused = refused;
    sc.transfers.push_back(std::move(e));
  }
};

SdeSystem make_system(Context ctx, std::vector<std::string> drift,
                      std::vector<std::vector<std::string>> diffusion) {
  SdeSystem s;
  s.ctx = std::move(ctx);
  for (const auto& d : drift) s.drift.push_back(parse(d, s.ctx));
  for (const auto& row : diffusion) {
    std::vector<Expr> r;
    for (const auto& e : row) r.push_back(parse(e, s.ctx));
    s.diffusion.push_back(std::move(r));
  }
  s.validate();
  return s;
}

// ---- heat: dx = dW ---------------------------------------------------------

CatalogCase build_heat() {
  Context ctx("t", {"x"}, {});
  CaseBuilder b;
  b.sc.name = "base";
  b.sc.sde = make_system(ctx, {"0"}, {{"1"}});

  b.field("X1", CandidateKind::Sde, "1", {"0"}, nullptr, true, "catalog symmetry");
  b.field("X2", CandidateKind::Sde, "2*t", {"x"}, nullptr, true, "catalog symmetry");
  b.field("X3", CandidateKind::Sde, "0", {"1"}, nullptr, true, "catalog symmetry");
  b.field("scaling-x", CandidateKind::Sde, "0", {"x"}, nullptr, false,
          "curated negative: state scaling is not admitted by unit noise");

  b.field("X1k", CandidateKind::Kbe, "1", {"0"}, nullptr, true, "catalog symmetry, zero multiplier");
  b.field("X2k", CandidateKind::Kbe, "2*t", {"x"}, nullptr, true, "catalog symmetry, zero multiplier");
  b.field("X3k", CandidateKind::Kbe, "0", {"1"}, nullptr, true, "catalog symmetry, zero multiplier");
  b.field("Y1", CandidateKind::Kbe, "0", {"t"}, "x", true, "catalog symmetry");
  b.field("Y2", CandidateKind::Kbe, "2*t^2", {"2*t*x"}, "x^2 - t", true, "catalog symmetry");
  b.field("X0", CandidateKind::Kbe, "0", {"0"}, "1", true, "linearity symmetry");
  b.field("Y1-flipped", CandidateKind::Kbe, "0", {"t"}, "-x", false,
          "curated negative: multiplier sign flipped in Y1");

  b.field("F1", CandidateKind::Kfe, "1", {"0"}, nullptr, true, "forward-equation symmetry");
  b.field("F2", CandidateKind::Kfe, "2*t", {"x"}, "-1", true, "forward-equation symmetry");
  b.field("F3", CandidateKind::Kfe, "0", {"1"}, nullptr, true, "forward-equation symmetry");
  b.field("Y1f", CandidateKind::Kfe, "0", {"t"}, "-x", true, "forward image of Y1");
  b.field("Y2f", CandidateKind::Kfe, "2*t^2", {"2*t*x"}, "-x^2 - t", true, "forward image of Y2");

  b.expression("solution-x", CandidateKind::Trivial, "x", true, "linear solution");
  b.expression("solution-x2-t", CandidateKind::Trivial, "x^2 - t", true, "quadratic solution");
  b.expression("not-a-solution", CandidateKind::Trivial, "x^2", false,
               "curated negative: drops the -t term");

  b.bracket("X1", "X2", {"2", "0", "0"});
  b.bracket("X1", "X3", {"0", "0", "0"});
  b.bracket("X2", "X3", {"0", "0", "-1"});

  b.transfer("sde-kbe", "X1", "X1k", true);
  b.transfer("sde-kbe", "X2", "X2k", true);
  b.transfer("sde-kbe", "X3", "X3k", true);
  b.transfer("sde-kfe", "X1", "F1", true);
  b.transfer("sde-kfe", "X2", "F2", true);
  b.transfer("sde-kfe", "X3", "F3", true);
  b.transfer("kbe-kfe", "Y1", "Y1f", true);
  b.transfer("kbe-kfe", "Y2", "Y2f", true);
  b.transfer("sde-kbe", "scaling-x", "", false, nullptr, /*refused=*/true);

  CatalogCase c;
  c.name = "heat";
  c.tags = {"scalar", "sde", "kbe", "kfe", "bracket"};
  c.scenarios.push_back(std::move(b.sc));
  return c;
}

// ---- driftAx: dx = (A/x) dt + dW -------------------------------------------

Scenario drift_ax_scenario(const std::string& name, const char* a_value) {
  Context ctx("t", {"x"}, {{"A", true, false}});
  CaseBuilder b;
  b.sc.name = name;
  std::string a = a_value ? a_value : "A";
  b.sc.sde = make_system(ctx, {"(" + a + ")/x"}, {{"1"}});
  bool special = a_value != nullptr;  // A = 1

  b.field("X1", CandidateKind::Sde, "1", {"0"}, nullptr, true, "catalog symmetry");
  b.field("X2", CandidateKind::Sde, "2*t", {"x"}, nullptr, true, "catalog symmetry");

  b.field("X1k", CandidateKind::Kbe, "1", {"0"}, nullptr, true, "catalog symmetry, zero multiplier");
  b.field("X2k", CandidateKind::Kbe, "2*t", {"x"}, nullptr, true, "catalog symmetry, zero multiplier");
  b.field("Y1", CandidateKind::Kbe, "2*t^2", {"2*t*x"},
          special ? "x^2 - 3*t" : "x^2 - (1 + 2*A)*t", true, "catalog symmetry");
  // Admitted only in the special drift A = 1.
  b.field("Y2", CandidateKind::Kbe, "0", {"t"}, "x - t/x", special,
          special ? "catalog symmetry of the special drift"
                  : "catalog field of the special drift; fails for generic A");
  b.field("Y3", CandidateKind::Kbe, "0", {"1"}, "-1/x", special,
          special ? "catalog symmetry of the special drift"
                  : "catalog field of the special drift; fails for generic A");

  b.bracket("X1", "X2", {"2", "0"});
  b.transfer("sde-kbe", "X1", "X1k", true);
  b.transfer("sde-kbe", "X2", "X2k", true);
  return std::move(b.sc);
}

CatalogCase build_drift_ax() {
  CatalogCase c;
  c.name = "driftAx";
  c.tags = {"scalar", "sde", "kbe", "subcase"};
  c.scenarios.push_back(drift_ax_scenario("generic", nullptr));
  c.scenarios.push_back(drift_ax_scenario("A=1", "1"));
  return c;
}

// ---- autonomous: dx = F(x) dt + dW -----------------------------------------

CatalogCase build_autonomous() {
  AtomDecl fatom{"F", {"x"}, {}, {}};
  AtomDecl fp{"Fp", {"x"}, {}, {}};
  {
    Context decl("t", {"x"}, {}, {AtomDecl{"F", {"x"}, {}, {}}, AtomDecl{"Fp", {"x"}, {}, {}}});
    fatom.rules["x"] = parse("Fp(x)", decl);
    fatom.numeric_model = parse("sin(x) + x^2/4", decl);
    fp.numeric_model = parse("cos(x) + x/2", decl);
  }
  Context ctx("t", {"x"}, {}, {fatom, fp});
  CaseBuilder b;
  b.sc.name = "base";
  b.sc.sde = make_system(ctx, {"F(x)"}, {{"1"}});

  b.field("X1", CandidateKind::Sde, "1", {"0"}, nullptr, true, "catalog symmetry");
  b.field("shift-x", CandidateKind::Sde, "0", {"1"}, nullptr, false,
          "curated negative: space shift fails for generic drift");
  b.field("X1k", CandidateKind::Kbe, "1", {"0"}, nullptr, true, "catalog symmetry, zero multiplier");
  b.transfer("sde-kbe", "X1", "X1k", true);

  CatalogCase c;
  c.name = "autonomous";
  c.tags = {"scalar", "sde", "atom"};
  c.scenarios.push_back(std::move(b.sc));
  return c;
}

// ---- gbm: dx = alpha x dt + sigma x dW --------------------------------------

CatalogCase build_gbm() {
  Context ctx("t", {"x"}, {{"alpha", false, false}, {"sigma", true, true}});
  CaseBuilder b;
  b.sc.name = "base";
  b.sc.sde = make_system(ctx, {"alpha*x"}, {{"sigma*x"}});

  const char* xi2 = "(alpha - sigma^2/2)*t*x + x*ln(x)";
  b.field("X1", CandidateKind::Sde, "1", {"0"}, nullptr, true, "catalog symmetry");
  b.field("X2", CandidateKind::Sde, "2*t", {xi2}, nullptr, true, "catalog symmetry");
  b.field("X3", CandidateKind::Sde, "0", {"x"}, nullptr, true, "catalog symmetry");
  b.field("X2-truncated", CandidateKind::Sde, "2*t", {"x*ln(x)"}, nullptr, false,
          "curated negative: drift part of xi dropped from X2");

  b.field("X1k", CandidateKind::Kbe, "1", {"0"}, nullptr, true, "catalog symmetry, zero multiplier");
  b.field("X2k", CandidateKind::Kbe, "2*t", {xi2}, nullptr, true, "catalog symmetry, zero multiplier");
  b.field("X3k", CandidateKind::Kbe, "0", {"x"}, nullptr, true, "catalog symmetry, zero multiplier");
  b.field("Y1", CandidateKind::Kbe, "0", {"t*x"},
          "-1/sigma^2*((alpha - sigma^2/2)*t - ln(x))", true, "catalog symmetry");
  b.field("Y2", CandidateKind::Kbe, "2*t^2", {"2*t*x*ln(x)"},
          "1/sigma^2*((alpha - sigma^2/2)*t - ln(x))^2 - t", true, "catalog symmetry");
  b.field("X0", CandidateKind::Kbe, "0", {"0"}, "1", true, "linearity symmetry");
  b.field("Y1-flipped", CandidateKind::Kbe, "0", {"t*x"},
          "1/sigma^2*((alpha - sigma^2/2)*t - ln(x))", false,
          "curated negative: multiplier sign flipped in Y1");

  b.field("X1f", CandidateKind::Kfe, "1", {"0"}, nullptr, true, "forward-equation symmetry");
  b.field("X2f", CandidateKind::Kfe, "2*t", {xi2},
          "-((alpha - sigma^2/2)*t + ln(x))", true, "forward-equation symmetry");
  b.field("X3f", CandidateKind::Kfe, "0", {"x"}, nullptr, true, "forward-equation symmetry");
  b.field("Y1f", CandidateKind::Kfe, "0", {"t*x"},
          "1/sigma^2*((alpha - sigma^2/2)*t - ln(x)) - t", true, "forward-equation symmetry");
  b.field("Y2f", CandidateKind::Kfe, "2*t^2", {"2*t*x*ln(x)"},
          "-(1/sigma^2*((alpha - sigma^2/2)*t - ln(x))^2 + 2*t*ln(x) + t)", true,
          "forward-equation symmetry");
  b.field("negX0f", CandidateKind::Kfe, "0", {"0"}, "-1", true, "forward linearity symmetry");

  // No first integrals exist for this system.
  b.expression("I-x", CandidateKind::FirstIntegral, "x", false, "curated negative");
  b.expression("I-lnx", CandidateKind::FirstIntegral, "ln(x)", false, "curated negative");
  b.expression("I-lnx-drift", CandidateKind::IntegralSymmetry,
               "ln(x) - (alpha - sigma^2/2)*t", false,
               "curated negative: annihilated by the drift operator but not by the noise");

  b.bracket("X1", "X2", {"2", "0", "alpha - sigma^2/2"});
  b.bracket("X1", "X3", {"0", "0", "0"});
  b.bracket("X2", "X3", {"0", "0", "-1"});

  b.transfer("sde-kbe", "X1", "X1k", true);
  b.transfer("sde-kbe", "X2", "X2k", true);
  b.transfer("sde-kbe", "X3", "X3k", true);
  b.transfer("sde-kfe", "X1", "X1f", true);
  b.transfer("sde-kfe", "X2", "X2f", false, "-1");
  b.transfer("sde-kfe", "X3", "X3f", false, "-1");
  b.transfer("kbe-kfe", "Y1", "Y1f", true);
  b.transfer("kbe-kfe", "Y2", "Y2f", true);
  b.transfer("kbe-kfe", "X0", "negX0f", true);
  b.transfer("kfe-kbe", "X2f", "X2k", false, "-1");
  b.transfer("sde-kbe", "X2-truncated", "", false, nullptr, /*refused=*/true);

  CatalogCase c;
  c.name = "gbm";
  c.tags = {"scalar", "sde", "kbe", "kfe", "bracket", "transfer"};
  c.scenarios.push_back(std::move(b.sc));
  return c;
}

// ---- kfamily: -u_t = -2 k'(x) u_x + u_xx ------------------------------------

CatalogCase build_kfamily() {
  AtomDecl kp{"kp", {"x"}, {}, {}};
  {
    Context decl("t", {"x"}, {{"lambda", true, false}}, {AtomDecl{"kp", {"x"}, {}, {}}});
    kp.rules["x"] = parse("kp(x)^2 + lambda/x^2", decl);
    // Exact solution of the defining equation for lambda > 1/4, valid on the
    // sampling box.
    kp.numeric_model = parse(
        "(sqrt(lambda - 1/4)*sin(sqrt(lambda - 1/4)*ln(x))/cos(sqrt(lambda - 1/4)*ln(x)) - 1/2)/x",
        decl);
  }
  Context ctx("t", {"x"}, {{"lambda", true, false}}, {kp});
  CaseBuilder b;
  b.sc.name = "base";
  b.sc.sde = make_system(ctx, {"-2*kp(x)"}, {{"2^(1/2)"}});

  b.field("X1", CandidateKind::Kbe, "1", {"0"}, nullptr, true, "catalog symmetry");
  b.field("X2", CandidateKind::Kbe, "2*t", {"x"}, "x*kp(x)", true, "catalog symmetry");
  b.field("X3", CandidateKind::Kbe, "4*t^2", {"4*t*x"}, "x^2 + 4*t*x*kp(x) - 2*t", true,
          "catalog symmetry; constant term re-derived from the determining system");
  b.field("X3-variant", CandidateKind::Kbe, "4*t^2", {"4*t*x"}, "x^2 + 4*t*x*kp(x)", false,
          "curated negative: constant term -2t missing; evolution residual is 2");

  b.field("X1f", CandidateKind::Kfe, "1", {"0"}, nullptr, true, "catalog symmetry");
  b.field("X2f", CandidateKind::Kfe, "2*t", {"x"}, "-x*kp(x)", true, "catalog symmetry");
  b.field("X3f", CandidateKind::Kfe, "4*t^2", {"4*t*x"}, "-(x^2 + 2*t + 4*t*x*kp(x))", true,
          "catalog symmetry; constant term re-derived from the determining system");
  b.field("X3f-variant", CandidateKind::Kfe, "4*t^2", {"4*t*x"}, "-(x^2 + 4*t + 4*t*x*kp(x))",
          false, "curated negative: constant 4t instead of 2t; evolution residual is -2");

  // The scaling field never projects onto an SDE symmetry for a generic
  // k'(x); only its multiplier-carrying extension is admitted.
  b.field("X2-projection", CandidateKind::ConverseSde, "2*t", {"x"}, nullptr, false,
          "projection of X2 with the multiplier dropped");
  b.field("X1-converse", CandidateKind::ConverseSde, "1", {"0"}, nullptr, true,
          "time shift is an SDE symmetry as well");

  b.transfer("kbe-kfe", "X2", "X2f", false, "-1");
  b.transfer("kbe-kfe", "X3", "X3f", true);
  b.transfer("kfe-kbe", "X3f", "X3", true);

  CatalogCase c;
  c.name = "kfamily";
  c.tags = {"scalar", "kbe", "kfe", "atom"};
  c.scenarios.push_back(std::move(b.sc));
  return c;
}

// ---- integral2d: dx1 = dW, dx2 = dW (shared channel) ------------------------

CatalogCase build_integral2d() {
  CatalogCase c;
  c.name = "integral2d";
  c.tags = {"integral", "multidim"};
  {
    Context ctx("t", {"x1", "x2"}, {});
    CaseBuilder b;
    b.sc.name = "shared-channel";
    b.sc.sde = make_system(ctx, {"0", "0"}, {{"1"}, {"1"}});
    b.expression("I", CandidateKind::FirstIntegral, "x1 - x2", true, "difference of states");
    b.expression("I-const", CandidateKind::FirstIntegral, "1", true, "degenerate first integral");
    b.expression("I-time", CandidateKind::FirstIntegral, "t", false,
                 "curated negative: time is never a first integral");
    b.expression("I-sym", CandidateKind::IntegralSymmetry, "x1 - x2", true,
                 "multiplier symmetry built from the first integral");
    b.expression("I-conv", CandidateKind::ConverseIntegral, "x1 - x2", true,
                 "converse direction");
    b.expression("solution-diff", CandidateKind::Trivial, "x1 - x2", true,
                 "solution of the backward equation");
    b.field("translate-both", CandidateKind::Sde, "0", {"1", "1"}, nullptr, true,
            "simultaneous shift of both states");
    b.field("X0", CandidateKind::Kbe, "0", {"0", "0"}, "1", true, "linearity symmetry");
    b.transfer("integral-kbe", "I", "I-sym", true);
    c.scenarios.push_back(std::move(b.sc));
  }
  {
    Context ctx("t", {"x1", "x2"}, {});
    CaseBuilder b;
    b.sc.name = "independent-channels";
    b.sc.sde = make_system(ctx, {"0", "0"}, {{"1", "0"}, {"0", "1"}});
    b.expression("I", CandidateKind::FirstIntegral, "x1 - x2", false,
                 "curated negative: independent noise destroys the integral");
    b.expression("I-conv", CandidateKind::ConverseIntegral, "x1 - x2", false,
                 "curated negative: the multiplier symmetry survives, the noise condition fails");
    c.scenarios.push_back(std::move(b.sc));
  }
  return c;
}

// ---- generic-negative: dx = F(t,x) dt + dW ----------------------------------

CatalogCase build_generic_negative() {
  AtomDecl f{"F", {"t", "x"}, {}, {}};
  AtomDecl ft{"Ft", {"t", "x"}, {}, {}};
  AtomDecl fx{"Fx", {"t", "x"}, {}, {}};
  {
    Context decl("t", {"x"}, {},
                 {AtomDecl{"F", {"t", "x"}, {}, {}}, AtomDecl{"Ft", {"t", "x"}, {}, {}},
                  AtomDecl{"Fx", {"t", "x"}, {}, {}}});
    f.rules["t"] = parse("Ft(t, x)", decl);
    f.rules["x"] = parse("Fx(t, x)", decl);
    f.numeric_model = parse("x*sin(t) + x^2/4", decl);
    ft.numeric_model = parse("x*cos(t)", decl);
    fx.numeric_model = parse("sin(t) + x/2", decl);
  }
  Context ctx("t", {"x"}, {}, {f, ft, fx});
  CaseBuilder b;
  b.sc.name = "base";
  b.sc.sde = make_system(ctx, {"F(t, x)"}, {{"1"}});
  b.field("time-shift", CandidateKind::Sde, "1", {"0"}, nullptr, false,
          "curated negative: no symmetry survives a fully generic drift");
  b.field("space-shift", CandidateKind::Sde, "0", {"1"}, nullptr, false,
          "curated negative: no symmetry survives a fully generic drift");
  b.field("X0", CandidateKind::Kbe, "0", {"0"}, "1", true, "linearity symmetry");

  CatalogCase c;
  c.name = "generic-negative";
  c.tags = {"scalar", "atom", "negative"};
  c.scenarios.push_back(std::move(b.sc));
  return c;
}

}  // namespace

const std::vector<CatalogCase>& catalog() {
  static const std::vector<CatalogCase> cases = [] {
    std::vector<CatalogCase> cs;
    cs.push_back(build_heat());
    cs.push_back(build_drift_ax());
    cs.push_back(build_autonomous());
    cs.push_back(build_gbm());
    cs.push_back(build_kfamily());
    cs.push_back(build_integral2d());
    cs.push_back(build_generic_negative());
    return cs;
  }();
  return cases;
}

const CatalogCase* find_case(const std::string& name) {
  for (const auto& c : catalog())
    if (c.name == name) return &c;
  return nullptr;
}

std::vector<std::string> list_cases(const std::string& tag) {
  std::vector<std::string> names;
  for (const auto& c : catalog()) {
    if (tag.empty() ||
        std::find(c.tags.begin(), c.tags.end(), tag) != c.tags.end())
      names.push_back(c.name);
  }
  return names;
}

CheckReport run_candidate(const SdeSystem& sde, const Candidate& c,
                          const SamplingConfig& cfg, ZeroMode mode) {
  switch (c.kind) {
    case CandidateKind::Sde:
      return check_sde_symmetry(sde, c.field, cfg, mode);
    case CandidateKind::Kbe:
      return check_kbe_symmetry(kbe_of(sde), c.field, cfg, mode);
    case CandidateKind::Kfe:
      return check_kfe_symmetry(kfe_of(sde), c.field, cfg, mode);
    case CandidateKind::FirstIntegral:
      return check_first_integral(sde, c.expression, cfg, mode);
    case CandidateKind::IntegralSymmetry:
      return check_integral_symmetry(kbe_of(sde), c.expression, cfg, mode);
    case CandidateKind::Trivial:
      return check_trivial_symmetry(kbe_of(sde), c.expression, cfg, mode);
    case CandidateKind::ConverseSde:
      return converse_sde_from_kbe(sde, c.field, cfg, mode);
    case CandidateKind::ConverseIntegral:
      return converse_integral_from_kbe(sde, c.expression, cfg, mode);
  }
  throw std::logic_error("unhandled candidate kind");
}

namespace {

const Candidate* find_candidate(const Scenario& sc, const std::string& name) {
  for (const auto& c : sc.candidates)
    if (c.name == name) return &c;
  return nullptr;
}

// Expression-kind candidates compare as multiplier fields.
VectorField candidate_as_field(const Scenario& sc, const Candidate& c) {
  if (c.kind == CandidateKind::IntegralSymmetry || c.kind == CandidateKind::FirstIntegral) {
    VectorField f;
    f.name = c.name;
    f.tau = Expr::number(0);
    f.xi.assign(sc.sde.n(), Expr::number(0));
    f.multiplier = c.expression;
    return f;
  }
  return c.field;
}

// The jet oracle re-checks equation candidates from first principles; the
// verdicts must agree.
void jet_cross_check(const Scenario& sc, const Candidate& c, bool checker_pass,
                     const SamplingConfig& cfg, ZeroMode mode, CaseRunResult& result) {
  if (c.kind != CandidateKind::Kbe && c.kind != CandidateKind::Kfe &&
      c.kind != CandidateKind::IntegralSymmetry && c.kind != CandidateKind::Trivial)
    return;
  KolmogorovEquation eq =
      c.kind == CandidateKind::Kfe ? kfe_of(sc.sde) : kbe_of(sc.sde);
  VectorField field = c.field;
  if (c.kind == CandidateKind::IntegralSymmetry) {
    field = VectorField{};
    field.name = c.name;
    field.tau = Expr::number(0);
    field.xi.assign(sc.sde.n(), Expr::number(0));
    field.multiplier = c.expression;
  } else if (c.kind == CandidateKind::Trivial) {
    field = VectorField{};
    field.name = c.name;
    field.tau = Expr::number(0);
    field.xi.assign(sc.sde.n(), Expr::number(0));
    field.shift = c.expression;
  }
  JetPoly residual = invariance_residual(eq, field);
  bool jet_zero = true;
  for (const auto& [mono, coeff] : split_by_monomials(residual)) {
    if (!is_zero(coeff, sc.sde.ctx, cfg, mode).is_zero()) {
      jet_zero = false;
      break;
    }
  }
  CaseOutcome out;
  out.scenario = sc.name;
  out.item = "jet " + c.name;
  out.matched = jet_zero == checker_pass;
  out.detail = jet_zero ? "prolongation residual vanishes"
                        : "prolongation residual is nonzero";
  if (!out.matched) result.all_matched = false;
  result.outcomes.push_back(std::move(out));
}

void run_scenario(const CatalogCase& cat, const Scenario& sc, const SamplingConfig& cfg,
                  ZeroMode mode, CaseRunResult& result) {
  for (const auto& c : sc.candidates) {
    CaseOutcome out;
    out.scenario = sc.name;
    out.item = "check " + c.name;
    CheckReport report = run_candidate(sc.sde, c, cfg, mode);
    out.matched = report.pass == c.expect_pass;
    out.detail = std::string(report.pass ? "PASS" : "FAIL") + ", expected " +
                 (c.expect_pass ? "PASS" : "FAIL");
    bool checker_pass = report.pass;
    out.report = std::move(report);
    if (!out.matched) result.all_matched = false;
    result.outcomes.push_back(std::move(out));
    if (sc.jet_cross_check) jet_cross_check(sc, c, checker_pass, cfg, mode, result);
  }

  // Bracket expectations against the SDE candidates of the scenario.
  FieldBasis basis;
  for (const auto& c : sc.candidates)
    if (c.kind == CandidateKind::Sde && c.expect_pass) basis.fields.push_back(c.field);
  for (const auto& be : sc.brackets) {
    CaseOutcome out;
    out.scenario = sc.name;
    out.item = "bracket [" + be.first + "," + be.second + "]";
    const Candidate* a = find_candidate(sc, be.first);
    const Candidate* b = find_candidate(sc, be.second);
    if (!a || !b) {
      out.matched = false;
      out.detail = "unknown bracket operand";
    } else {
      VectorField br = lie_bracket(a->field, b->field, sc.sde.ctx);
      SpanResult span = span_membership(br, basis, sc.sde.ctx, cfg);
      out.matched = span.in_span == be.expect_in_span;
      if (span.in_span && !be.coefficients.empty()) {
        for (size_t i = 0; i < be.coefficients.size(); ++i) {
          if (!symbolic_zero(span.coefficients[i] - be.coefficients[i], sc.sde.ctx))
            out.matched = false;
        }
      }
      std::ostringstream os;
      os << (span.in_span ? "in span, coefficients" : "not in span");
      if (span.in_span)
        for (const auto& ce : span.coefficients) os << " " << ce.str() << ",";
      out.detail = os.str();
    }
    if (!out.matched) result.all_matched = false;
    result.outcomes.push_back(std::move(out));
  }

  for (const auto& te : sc.transfers) {
    CaseOutcome out;
    out.scenario = sc.name;
    out.item = "map " + te.rule + " " + te.source;
    try {
      const Candidate* src = find_candidate(sc, te.source);
      if (!src) throw std::invalid_argument("unknown transfer source " + te.source);
      TransferRecord rec = [&] {
        if (te.rule == "sde-kbe") return sde_to_kbe(sc.sde, src->field, cfg, mode);
        if (te.rule == "sde-kfe") return sde_to_kfe(sc.sde, src->field, cfg, mode);
        if (te.rule == "kbe-kfe") return kbe_to_kfe(sc.sde, src->field, cfg, mode);
        if (te.rule == "kfe-kbe") return kfe_to_kbe(sc.sde, src->field, cfg, mode);
        if (te.rule == "integral-kbe")
          return integral_to_kbe(sc.sde, src->expression, cfg, mode);
        throw std::invalid_argument("unknown transfer rule " + te.rule);
      }();
      if (te.expect_refused) {
        out.matched = false;
        out.detail = "transfer was accepted but refusal was expected";
      } else {
        const Candidate* tgt = find_candidate(sc, te.target);
        if (!tgt) throw std::invalid_argument("unknown transfer target " + te.target);
        ModX0Result cmp = equals_mod_x0(rec.target, candidate_as_field(sc, *tgt), sc.sde.ctx);
        bool offset_ok =
            cmp.matches && symbolic_zero(cmp.constant - (te.exact ? Expr::number(0) : te.offset),
                                         sc.sde.ctx);
        out.matched = rec.target_report.pass && offset_ok;
        std::ostringstream os;
        os << (rec.target_report.pass ? "target verified" : "target check failed");
        if (cmp.matches)
          os << ", offset " << normalize(cmp.constant, sc.sde.ctx).str();
        else
          os << ", mismatch on " << cmp.mismatch;
        out.detail = os.str();
      }
    } catch (const TransferRefused&) {
      out.matched = te.expect_refused;
      out.detail = "transfer refused";
    }
    if (!out.matched) result.all_matched = false;
    result.outcomes.push_back(std::move(out));
  }
  (void)cat;
}

}  // namespace

CaseRunResult run_case(const std::string& name, const SamplingConfig& cfg, ZeroMode mode) {
  const CatalogCase* c = find_case(name);
  if (!c) throw std::invalid_argument("unknown case '" + name + "'");
  CaseRunResult result;
  result.name = name;
  for (const auto& sc : c->scenarios) run_scenario(*c, sc, cfg, mode, result);
  return result;
}

}  // namespace stosym
