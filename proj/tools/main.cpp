#include <CLI11.hpp>
#include <algorithm>
#include <fstream>
#include <iostream>

#include "stosym/bridge.hpp"
#include "stosym/parser.hpp"
#include "stosym/corpus.hpp"
#include "stosym/problemfile.hpp"

using namespace stosym;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

struct CommonOpts {
  std::string mode = "both";
  std::string format = "text";
  int points = 100;
  double tol = 1e-9;
  std::uint64_t seed = 42;

  void attach(CLI::App* cmd) {
    cmd->add_option("--mode", mode, "symbolic|numeric|both")->default_val("both");
    cmd->add_option("--format", format, "text|json")->default_val("text");
    cmd->add_option("--points", points, "sample points for the numeric stage")->default_val(100);
    cmd->add_option("--tol", tol, "numeric tolerance")->default_val(1e-9);
    cmd->add_option("--seed", seed, "sampling seed")->default_val(42);
  }

  ZeroMode zero_mode() const {
    if (mode == "symbolic") return ZeroMode::Symbolic;
    if (mode == "numeric") return ZeroMode::Numeric;
    if (mode == "both") return ZeroMode::Both;
    throw CLI::ValidationError("--mode must be symbolic, numeric or both");
  }

  SamplingConfig sampling(SamplingConfig base) const {
    base.points = points;
    base.tolerance = tol;
    base.seed = seed;
    return base;
  }
};

void emit_report(const CheckReport& r, const std::string& format, std::ostream& os) {
  if (format == "json")
    os << report_to_json(r).dump(2) << "\n";
  else
    os << report_to_text(r);
}

std::string field_description(const VectorField& f, const Context& ctx) {
  std::ostringstream os;
  os << "tau = " << normalize(f.tau, ctx).str();
  for (size_t i = 0; i < f.xi.size(); ++i)
    os << ", xi(" << ctx.states()[i] << ") = " << normalize(f.xi[i], ctx).str();
  if (f.multiplier) os << ", multiplier = " << normalize(*f.multiplier, ctx).str();
  if (f.shift) os << ", shift = " << normalize(*f.shift, ctx).str();
  return os.str();
}

int cmd_check(const std::string& path, const std::vector<std::string>& names,
              const CommonOpts& opts) {
  Problem p = load_problem(path);
  SamplingConfig cfg = opts.sampling(p.sampling);
  ZeroMode mode = opts.zero_mode();
  bool any_fail = false;
  bool any_run = false;
  for (const auto& c : p.candidates) {
    if (!names.empty() && std::find(names.begin(), names.end(), c.name) == names.end()) continue;
    any_run = true;
    CheckReport r = run_candidate(p.sde, c, cfg, mode);
    any_fail = any_fail || !r.pass;
    emit_report(r, opts.format, std::cout);
  }
  if (!any_run) {
    std::cerr << "no candidate matched the selection\n";
    return kExitUsage;
  }
  return any_fail ? kExitFail : kExitPass;
}

int cmd_map(const std::string& path, const std::string& name, const std::string& rule,
            const CommonOpts& opts) {
  Problem p = load_problem(path);
  SamplingConfig cfg = opts.sampling(p.sampling);
  ZeroMode mode = opts.zero_mode();
  const Candidate* src = nullptr;
  for (const auto& c : p.candidates)
    if (c.name == name) src = &c;
  if (!src) {
    std::cerr << "unknown candidate '" << name << "'\n";
    return kExitUsage;
  }
  try {
    TransferRecord rec = [&] {
      if (rule == "sde-kbe") return sde_to_kbe(p.sde, src->field, cfg, mode);
      if (rule == "sde-kfe") return sde_to_kfe(p.sde, src->field, cfg, mode);
      if (rule == "kbe-kfe") return kbe_to_kfe(p.sde, src->field, cfg, mode);
      if (rule == "kfe-kbe") return kfe_to_kbe(p.sde, src->field, cfg, mode);
      if (rule == "integral-kbe") return integral_to_kbe(p.sde, src->expression, cfg, mode);
      throw CLI::ValidationError("--rule must be one of sde-kbe, sde-kfe, kbe-kfe, kfe-kbe, "
                                 "integral-kbe");
    }();
    if (opts.format == "json") {
      nlohmann::json j;
      j["rule"] = rec.rule;
      j["source"] = rec.source.name;
      j["target"] = {{"tau", rec.target.tau.str()}};
      nlohmann::json xi = nlohmann::json::array();
      for (const auto& e : rec.target.xi) xi.push_back(e.str());
      j["target"]["xi"] = xi;
      if (rec.target.multiplier) j["target"]["multiplier"] = rec.target.multiplier->str();
      j["target_report"] = report_to_json(rec.target_report);
      std::cout << j.dump(2) << "\n";
    } else {
      std::cout << "mapped " << rec.rule << " applied to " << name << ":\n  "
                << field_description(rec.target, p.sde.ctx) << "\n";
      emit_report(rec.target_report, opts.format, std::cout);
    }
    return rec.target_report.pass ? kExitPass : kExitFail;
  } catch (const TransferRefused& refused) {
    std::cout << "transfer refused; source check:\n";
    emit_report(refused.report, opts.format, std::cout);
    return kExitFail;
  }
}

int cmd_bracket(const std::string& path, const std::string& first, const std::string& second,
                const CommonOpts& opts) {
  Problem p = load_problem(path);
  SamplingConfig cfg = opts.sampling(p.sampling);
  const Candidate* a = nullptr;
  const Candidate* b = nullptr;
  for (const auto& c : p.candidates) {
    if (c.name == first) a = &c;
    if (c.name == second) b = &c;
  }
  if (!a || !b) {
    std::cerr << "unknown candidate name\n";
    return kExitUsage;
  }
  VectorField br = lie_bracket(a->field, b->field, p.sde.ctx);
  std::cout << "[" << first << "," << second << "] : " << field_description(br, p.sde.ctx)
            << "\n";
  FieldBasis basis;
  for (const auto& c : p.candidates)
    if (c.kind == a->kind && c.expect_pass && !c.field.xi.empty()) basis.fields.push_back(c.field);
  SpanResult span = span_membership(br, basis, p.sde.ctx, cfg);
  if (span.in_span) {
    std::cout << "in span of declared " << to_string(a->kind) << " fields:";
    for (size_t i = 0; i < span.coefficients.size(); ++i)
      std::cout << " " << basis.fields[i].name << ": " << span.coefficients[i].str() << ";";
    std::cout << (span.certified ? "  (symbolically certified)" : "") << "\n";
  } else {
    std::cout << "NOT_IN_SPAN (least-squares residual " << span.least_squares_residual << ")\n";
  }
  return kExitPass;
}

int cmd_catalog(const std::string& name, const CommonOpts& opts) {
  SamplingConfig cfg = opts.sampling(SamplingConfig{});
  ZeroMode mode = opts.zero_mode();
  std::vector<std::string> names = name.empty() ? list_cases() : std::vector<std::string>{name};
  bool all_ok = true;
  for (const auto& n : names) {
    if (!find_case(n)) {
      std::cerr << "unknown case '" << n << "'\n";
      return kExitUsage;
    }
    CaseRunResult r = run_case(n, cfg, mode);
    all_ok = all_ok && r.all_matched;
    if (opts.format == "json") {
      nlohmann::json j;
      j["case"] = r.name;
      j["matched"] = r.all_matched;
      nlohmann::json items = nlohmann::json::array();
      for (const auto& o : r.outcomes) {
        nlohmann::json oj;
        oj["scenario"] = o.scenario;
        oj["item"] = o.item;
        oj["matched"] = o.matched;
        oj["detail"] = o.detail;
        items.push_back(oj);
      }
      j["outcomes"] = items;
      std::cout << j.dump(2) << "\n";
    } else {
      std::cout << r.name << " : " << (r.all_matched ? "ok" : "MISMATCH") << "\n";
      for (const auto& o : r.outcomes) {
        std::cout << "  " << (o.matched ? " ok " : " !! ") << "[" << o.scenario << "] " << o.item
                  << "  (" << o.detail << ")\n";
      }
    }
  }
  return all_ok ? kExitPass : kExitFail;
}

int cmd_export(const std::string& name, const std::string& dir) {
  const CatalogCase* c = find_case(name);
  if (!c) {
    std::cerr << "unknown case '" << name << "'\n";
    return kExitUsage;
  }
  for (const auto& sc : c->scenarios) {
    Problem p = scenario_to_problem(*c, sc);
    if (dir.empty()) {
      std::cout << problem_to_json(p).dump(2) << "\n";
    } else {
      std::string path = dir + "/" + p.name + ".json";
      std::ofstream out(path);
      if (!out) {
        std::cerr << "cannot write '" << path << "'\n";
        return kExitUsage;
      }
      out << problem_to_json(p).dump(2) << "\n";
      std::cout << path << "\n";
    }
  }
  return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Symmetry and first-integral verification for Ito systems and their "
               "Kolmogorov equations"};
  app.require_subcommand(1);

  CommonOpts opts;

  auto* check = app.add_subcommand("check", "run determining-equation checks from a problem file");
  std::string check_file;
  std::vector<std::string> check_names;
  check->add_option("file", check_file, "problem file (JSON)")->required();
  check->add_option("--candidate", check_names, "candidate selection (default: all)");
  opts.attach(check);

  auto* map = app.add_subcommand("map", "transfer a verified symmetry between representations");
  std::string map_file, map_name, map_rule;
  map->add_option("file", map_file)->required();
  map->add_option("--candidate", map_name)->required();
  map->add_option("--rule", map_rule, "sde-kbe|sde-kfe|kbe-kfe|kfe-kbe|integral-kbe")->required();
  opts.attach(map);

  auto* bracket = app.add_subcommand("bracket", "Lie bracket of two declared fields");
  std::string br_file, br_a, br_b;
  bracket->add_option("file", br_file)->required();
  bracket->add_option("first", br_a)->required();
  bracket->add_option("second", br_b)->required();
  opts.attach(bracket);

  auto* catalog_cmd = app.add_subcommand("catalog", "run the built-in worked examples");
  std::string cat_name;
  catalog_cmd->add_option("case", cat_name, "case name (default: all)");
  opts.attach(catalog_cmd);

  auto* export_cmd = app.add_subcommand("export", "write a catalog case as problem files");
  std::string exp_name, exp_dir;
  export_cmd->add_option("case", exp_name)->required();
  export_cmd->add_option("--dir", exp_dir, "output directory (default: stdout)");

  auto* list_cmd = app.add_subcommand("list", "list catalog cases");
  std::string list_tag;
  list_cmd->add_option("--tag", list_tag, "filter by tag");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitPass : kExitUsage;
  }

  try {
    if (check->parsed()) return cmd_check(check_file, check_names, opts);
    if (map->parsed()) return cmd_map(map_file, map_name, map_rule, opts);
    if (bracket->parsed()) return cmd_bracket(br_file, br_a, br_b, opts);
    if (catalog_cmd->parsed()) return cmd_catalog(cat_name, opts);
    if (export_cmd->parsed()) return cmd_export(exp_name, exp_dir);
    if (list_cmd->parsed()) {
      for (const auto& n : list_cases(list_tag)) std::cout << n << "\n";
      return kExitPass;
    }
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
