#include "stosym/problemfile.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

#include "stosym/parser.hpp"

namespace stosym {

using nlohmann::json;

namespace {

json expr_str(const Expr& e) { return e.str(); }

Context context_from_json(const json& sys) {
  std::string time = sys.value("time", "t");
  std::vector<std::string> states = sys.at("states").get<std::vector<std::string>>();
  std::vector<ParamDecl> params;
  if (sys.contains("params")) {
    for (const auto& p : sys.at("params")) {
      if (p.is_string()) {
        params.push_back({p.get<std::string>(), false, false});
      } else {
        params.push_back({p.at("name").get<std::string>(), p.value("nonzero", false),
                          p.value("positive", false)});
      }
    }
  }
  // First pass: atoms by name only, so rules can mention one another.
  std::vector<AtomDecl> skeletons;
  if (sys.contains("atoms")) {
    for (const auto& a : sys.at("atoms")) {
      AtomDecl d;
      d.name = a.at("name").get<std::string>();
      d.formals = a.at("args").get<std::vector<std::string>>();
      skeletons.push_back(std::move(d));
    }
  }
  Context skeleton(time, states, params, skeletons);
  std::vector<AtomDecl> atoms = skeletons;
  if (sys.contains("atoms")) {
    size_t i = 0;
    for (const auto& a : sys.at("atoms")) {
      AtomDecl& d = atoms[i++];
      // Formals not already declared parse as extra state-like symbols.
      std::vector<std::string> rule_states = states;
      for (const auto& f : d.formals)
        if (!skeleton.declared(f)) rule_states.push_back(f);
      Context rule_ctx(time, rule_states, params, skeletons);
      if (a.contains("rules")) {
        for (const auto& [formal, text] : a.at("rules").items())
          d.rules[formal] = parse(text.get<std::string>(), rule_ctx);
      }
      if (a.contains("numeric"))
        d.numeric_model = parse(a.at("numeric").get<std::string>(), rule_ctx);
    }
  }
  return Context(time, states, params, atoms);
}

json context_to_json(const SdeSystem& s) {
  const Context& ctx = s.ctx;
  json sys;
  sys["time"] = ctx.time();
  sys["states"] = ctx.states();
  sys["wiener"] = s.m();
  json params = json::array();
  for (const auto& p : ctx.params()) {
    json jp;
    jp["name"] = p.name;
    if (p.nonzero) jp["nonzero"] = true;
    if (p.positive) jp["positive"] = true;
    params.push_back(jp);
  }
  sys["params"] = params;
  if (!ctx.atoms().empty()) {
    json atoms = json::array();
    for (const auto& a : ctx.atoms()) {
      json ja;
      ja["name"] = a.name;
      ja["args"] = a.formals;
      if (!a.rules.empty()) {
        json rules;
        for (const auto& [formal, rule] : a.rules) rules[formal] = rule.str();
        ja["rules"] = rules;
      }
      if (a.numeric_model) ja["numeric"] = a.numeric_model->str();
      atoms.push_back(ja);
    }
    sys["atoms"] = atoms;
  }
  json drift = json::array();
  for (const auto& d : s.drift) drift.push_back(expr_str(d));
  sys["drift"] = drift;
  json diffusion = json::array();
  for (const auto& row : s.diffusion) {
    json r = json::array();
    for (const auto& g : row) r.push_back(expr_str(g));
    diffusion.push_back(r);
  }
  sys["diffusion"] = diffusion;
  return sys;
}

Candidate candidate_from_json(const json& j, const Context& ctx, int n) {
  Candidate c;
  c.name = j.at("name").get<std::string>();
  auto kind = candidate_kind_from(j.at("kind").get<std::string>());
  if (!kind) throw std::invalid_argument("unknown candidate kind in '" + c.name + "'");
  c.kind = *kind;
  if (j.contains("expect")) c.expect_pass = j.at("expect").get<std::string>() == "pass";
  c.origin = j.value("origin", "");
  switch (c.kind) {
    case CandidateKind::FirstIntegral:
    case CandidateKind::IntegralSymmetry:
    case CandidateKind::ConverseIntegral:
      c.expression = parse(j.at("integral").get<std::string>(), ctx);
      break;
    case CandidateKind::Trivial:
      c.expression = parse(j.at("shift").get<std::string>(), ctx);
      break;
    default: {
      c.field.name = c.name;
      c.field.tau = parse(j.value("tau", "0"), ctx);
      std::vector<std::string> xi =
          j.contains("xi") ? j.at("xi").get<std::vector<std::string>>()
                           : std::vector<std::string>(n, "0");
      if (static_cast<int>(xi.size()) != n)
        throw std::invalid_argument("candidate '" + c.name + "' has wrong xi arity");
      for (const auto& s : xi) c.field.xi.push_back(parse(s, ctx));
      if (j.contains("multiplier"))
        c.field.multiplier = parse(j.at("multiplier").get<std::string>(), ctx);
      if (j.contains("shift")) c.field.shift = parse(j.at("shift").get<std::string>(), ctx);
      break;
    }
  }
  return c;
}

json candidate_to_json(const Candidate& c) {
  json j;
  j["name"] = c.name;
  j["kind"] = to_string(c.kind);
  j["expect"] = c.expect_pass ? "pass" : "fail";
  if (!c.origin.empty()) j["origin"] = c.origin;
  switch (c.kind) {
    case CandidateKind::FirstIntegral:
    case CandidateKind::IntegralSymmetry:
    case CandidateKind::ConverseIntegral:
      j["integral"] = c.expression.str();
      break;
    case CandidateKind::Trivial:
      j["shift"] = c.expression.str();
      break;
    default: {
      j["tau"] = c.field.tau.str();
      json xi = json::array();
      for (const auto& e : c.field.xi) xi.push_back(e.str());
      j["xi"] = xi;
      if (c.field.multiplier) j["multiplier"] = c.field.multiplier->str();
      if (c.field.shift) j["shift"] = c.field.shift->str();
      break;
    }
  }
  return j;
}

}  // namespace

SamplingConfig sampling_from_json(const json& j) {
  SamplingConfig cfg;
  if (j.is_null()) return cfg;
  cfg.points = j.value("points", cfg.points);
  cfg.tolerance = j.value("tol", cfg.tolerance);
  cfg.seed = j.value("seed", cfg.seed);
  if (j.contains("ranges")) {
    for (const auto& [name, r] : j.at("ranges").items()) {
      auto v = r.get<std::vector<double>>();
      if (v.size() != 2) throw std::invalid_argument("range for " + name + " needs two numbers");
      cfg.overrides[name] = {v[0], v[1]};
    }
  }
  return cfg;
}

json sampling_to_json(const SamplingConfig& cfg) {
  json j;
  j["points"] = cfg.points;
  j["tol"] = cfg.tolerance;
  j["seed"] = cfg.seed;
  if (!cfg.overrides.empty()) {
    json r;
    for (const auto& [name, range] : cfg.overrides)
      r[name] = json::array({range.first, range.second});
    j["ranges"] = r;
  }
  return j;
}

Problem problem_from_json(const json& j) {
  Problem p;
  p.name = j.value("name", "problem");
  const json& sys = j.at("system");
  Context ctx = context_from_json(sys);
  p.sde.ctx = ctx;
  for (const auto& d : sys.at("drift")) p.sde.drift.push_back(parse(d.get<std::string>(), ctx));
  for (const auto& row : sys.at("diffusion")) {
    std::vector<Expr> r;
    for (const auto& g : row) r.push_back(parse(g.get<std::string>(), ctx));
    p.sde.diffusion.push_back(std::move(r));
  }
  if (sys.contains("wiener") && sys.at("wiener").get<int>() != p.sde.m())
    throw std::invalid_argument("wiener count does not match the diffusion matrix");
  p.sde.validate();
  if (j.contains("candidates"))
    for (const auto& c : j.at("candidates"))
      p.candidates.push_back(candidate_from_json(c, ctx, p.sde.n()));
  p.sampling = sampling_from_json(j.contains("sampling") ? j.at("sampling") : json());
  return p;
}

json problem_to_json(const Problem& p) {
  json j;
  j["name"] = p.name;
  j["system"] = context_to_json(p.sde);
  json cands = json::array();
  for (const auto& c : p.candidates) cands.push_back(candidate_to_json(c));
  j["candidates"] = cands;
  j["sampling"] = sampling_to_json(p.sampling);
  return j;
}

Problem load_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("malformed problem file: " + std::string(e.what()));
  }
  return problem_from_json(j);
}

Problem scenario_to_problem(const CatalogCase& c, const Scenario& s) {
  Problem p;
  p.name = c.name + (s.name == "base" ? "" : "-" + s.name);
  p.sde = s.sde;
  p.candidates = s.candidates;
  p.sampling = SamplingConfig{};
  return p;
}

json report_to_json(const CheckReport& r) {
  json j;
  j["check"] = to_string(r.kind);
  j["candidate"] = r.candidate;
  j["pass"] = r.pass;
  if (!r.side_conditions.empty()) j["side_conditions"] = r.side_conditions;
  if (r.q) j["q"] = r.q->str();
  if (r.group_boundary >= 0) j["group_boundary"] = r.group_boundary;
  json entries = json::array();
  for (const auto& e : r.entries) {
    json je;
    je["label"] = e.label;
    je["residual"] = e.residual.str();
    je["verdict"] = to_string(e.verdict.kind);
    je["max_scaled_residual"] = e.verdict.max_scaled_residual;
    if (e.verdict.witness) {
      json w;
      for (const auto& [k, v] : *e.verdict.witness) w[k] = v;
      je["witness"] = w;
      je["witness_residual"] = e.verdict.witness_residual;
    }
    if (!e.factors.empty()) {
      json fs = json::array();
      for (const auto& f : e.factors) fs.push_back(f.str());
      je["factors"] = fs;
    }
    entries.push_back(je);
  }
  j["residuals"] = entries;
  return j;
}

CheckReport report_from_json(const json& j, const Context& ctx) {
  CheckReport r;
  std::string kind = j.at("check").get<std::string>();
  for (CheckKind k : {CheckKind::SdeSymmetry, CheckKind::KbeSymmetry, CheckKind::KfeSymmetry,
                      CheckKind::FirstIntegral, CheckKind::IntegralSymmetry,
                      CheckKind::TrivialSymmetry, CheckKind::ConverseSde,
                      CheckKind::ConverseIntegral})
    if (to_string(k) == kind) r.kind = k;
  r.candidate = j.at("candidate").get<std::string>();
  r.pass = j.at("pass").get<bool>();
  if (j.contains("side_conditions"))
    r.side_conditions = j.at("side_conditions").get<std::vector<std::string>>();
  if (j.contains("q")) r.q = parse(j.at("q").get<std::string>(), ctx);
  r.group_boundary = j.value("group_boundary", -1);
  for (const auto& je : j.at("residuals")) {
    ResidualEntry e;
    e.label = je.at("label").get<std::string>();
    e.residual = parse(je.at("residual").get<std::string>(), ctx);
    std::string v = je.at("verdict").get<std::string>();
    e.verdict.kind = v == "ZERO_SYMBOLIC" ? ZeroVerdict::Kind::ZeroSymbolic
                     : v == "ZERO_NUMERIC" ? ZeroVerdict::Kind::ZeroNumeric
                                           : ZeroVerdict::Kind::NonZero;
    e.verdict.max_scaled_residual = je.value("max_scaled_residual", 0.0);
    if (je.contains("witness")) {
      Point w;
      for (const auto& [k, val] : je.at("witness").items()) w[k] = val.get<double>();
      e.verdict.witness = w;
      e.verdict.witness_residual = je.value("witness_residual", 0.0);
    }
    if (je.contains("factors"))
      for (const auto& f : je.at("factors")) e.factors.push_back(parse(f.get<std::string>(), ctx));
    r.entries.push_back(std::move(e));
  }
  return r;
}

std::string report_to_text(const CheckReport& r) {
  std::ostringstream os;
  os << to_string(r.kind) << "  " << r.candidate << "  ->  " << (r.pass ? "PASS" : "FAIL")
     << "\n";
  size_t width = 0;
  for (const auto& e : r.entries) width = std::max(width, e.label.size());
  int idx = 0;
  for (const auto& e : r.entries) {
    if (r.group_boundary == idx) os << "  -- converse conditions --\n";
    ++idx;
    os << "  " << std::left << std::setw(static_cast<int>(width) + 2) << e.label
       << to_string(e.verdict.kind);
    os << "   residual: " << e.residual.str();
    if (!e.factors.empty()) {
      os << "   factors:";
      for (const auto& f : e.factors) os << " (" << f.str() << ")";
    }
    if (e.verdict.witness) {
      os << "\n" << std::setw(static_cast<int>(width) + 4) << "" << "witness:";
      os << std::setprecision(17);
      for (const auto& [k, v] : *e.verdict.witness) os << " " << k << "=" << v;
      os << "  |residual|=" << e.verdict.witness_residual;
    }
    os << "\n";
  }
  if (r.q) os << "  q-function: " << r.q->str() << "\n";
  for (const auto& s : r.side_conditions) os << "  assumes: " << s << "\n";
  return os.str();
}

}  // namespace stosym
