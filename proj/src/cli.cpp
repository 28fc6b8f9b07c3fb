#include "ofifs/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <ostream>

#include <CLI11.hpp>

#include "ofifs/error.hpp"
#include "ofifs/io.hpp"
#include "ofifs/verify.hpp"

namespace ofifs::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Settings {
  std::string config;
  std::string out;
  std::string report;
  std::vector<std::string> fixtures;
  std::string instance;
  std::uint64_t seed = 1;
  std::size_t count = 20;
  std::optional<double> eps;
  std::optional<std::size_t> budget;
  int grid_size = 129;
  bool no_grids = false;
  bool targeted = false;
};

PicardOptions picard_options(const io::RunConfig& cfg, const Settings& s) {
  PicardOptions opts;
  opts.eps = s.eps ? s.eps : cfg.eps;
  opts.budget = s.budget.value_or(cfg.budget);
  return opts;
}

json checks_to_json(const std::vector<verify::CheckReport>& checks, std::size_t& failures) {
  json out = json::array();
  for (const auto& c : checks) {
    if (!c.passed) ++failures;
    out.push_back(verify::to_json(c));
  }
  return out;
}

void print_checks(std::ostream& out, const std::string& scope,
                  const std::vector<verify::CheckReport>& checks) {
  for (const auto& c : checks) {
    out << (c.passed ? "PASS " : "FAIL ") << scope << ": " << c.name << '\n';
  }
}

int cmd_render(const Settings& s, std::ostream& out) {
  const io::RunConfig cfg = io::load_config(s.config);
  if (!cfg.space->is_grid()) throw ConfigError("render needs a grid space");
  const PicardResult r = picard_limit(cfg.system, cfg.initial, picard_options(cfg, s));
  io::write_pgm(s.out, io::render(r.limit));
  const std::string report = s.report.empty() ? s.out + ".json" : s.report;
  io::write_json(report,
                 {{"orbital", io::certificate_to_json(cfg.system.ifs().certificate(), *cfg.space)},
                  {"convergence", io::certificate_to_json(r.certificate)}});
  out << "render: " << to_string(r.certificate.terminal) << " after " << r.certificate.steps
      << " steps -> " << s.out << '\n';
  return r.certificate.terminal == Terminal::BudgetExhausted ? kExitFailure : kExitOk;
}

std::vector<verify::CheckReport> config_checks(const io::RunConfig& cfg, const PicardOptions& opts) {
  std::vector<verify::CheckReport> checks;
  if (cfg.space->is_finite()) checks.push_back(verify::orbit_structure(cfg.system.ifs()));
  verify::Verifier v(cfg.system, cfg.initial, opts);
  checks.push_back(v.decomposition());
  checks.push_back(v.apriori_bound());
  checks.push_back(v.cut_union());
  checks.push_back(v.peak_sufficiency());
  checks.push_back(v.envelope_well_formed());
  checks.push_back(v.part_self_consistency());
  checks.push_back(v.iterate_splitting());
  return checks;
}

int cmd_verify(const Settings& s, std::ostream& out) {
  json report;
  std::size_t total = 0;
  std::size_t failures = 0;
  if (!s.config.empty()) {
    const io::RunConfig cfg = io::load_config(s.config);
    const auto checks = config_checks(cfg, picard_options(cfg, s));
    print_checks(out, s.config, checks);
    total = checks.size();
    report = {{"config", fs::path(s.config).filename().string()},
              {"checks", checks_to_json(checks, failures)}};
  } else if (!s.fixtures.empty()) {
    json entries = json::array();
    for (const std::string& path : s.fixtures) {
      const io::Fixture fx = io::fixture_from_json(io::read_json(path));
      auto checks = verify::run_instance_checks(fx.instance);
      checks.insert(checks.begin(),
                    verify::recorded_limit(oracle::to_engine(fx.instance), fx.limit));
      print_checks(out, fx.instance.id, checks);
      total += checks.size();
      entries.push_back({{"id", fx.instance.id}, {"checks", checks_to_json(checks, failures)}});
    }
    report = {{"fixtures", entries}};
  } else {
    verify::SuiteOptions opts;
    opts.seed = s.seed;
    opts.count = s.count;
    if (!s.instance.empty()) opts.instance = s.instance;
    opts.grids = !s.no_grids;
    opts.grid_size = s.grid_size;
    const verify::SuiteResult r = verify::run_suite(opts);
    report = r.report;
    total = r.checks;
    failures = r.failures;
    for (const json& inst : report["instances"]) {
      for (const json& c : inst["checks"]) {
        out << (c["status"] == "pass" ? "PASS " : "FAIL ") << inst["id"].get<std::string>()
            << ": " << c["name"].get<std::string>() << '\n';
      }
    }
    for (const json& sc : report["grid_scenarios"]) {
      for (const json& c : sc["checks"]) {
        out << (c["status"] == "pass" ? "PASS " : "FAIL ") << sc["name"].get<std::string>()
            << ": " << c["name"].get<std::string>() << '\n';
      }
    }
  }
  report["summary"] = {{"checks", total},
                       {"failures", failures},
                       {"status", failures == 0 ? "pass" : "fail"}};
  if (!s.report.empty()) io::write_json(s.report, report);
  out << "verify: " << total - failures << "/" << total << " checks passed\n";
  return failures == 0 ? kExitOk : kExitFailure;
}

int cmd_decompose(const Settings& s, std::ostream& out) {
  const io::RunConfig cfg = io::load_config(s.config);
  const Decomposition dec = decompose(cfg.system, cfg.initial, picard_options(cfg, s));
  const fs::path dir = s.out;
  fs::create_directories(dir);
  const bool grid = cfg.space->is_grid();

  json parts = json::array();
  for (std::size_t k = 0; k < dec.parts.size(); ++k) {
    json entry = {{"representative", cfg.space->label(dec.representatives[k])},
                  {"gap_to_whole", d_infinity(dec.parts[k], dec.whole)}};
    if (grid) {
      const std::string name = "part_" + std::to_string(k) + ".pgm";
      io::write_pgm(dir / name, io::render(dec.parts[k]));
      entry["image"] = name;
    } else {
      entry["levels"] = oracle::from_engine(dec.parts[k]);
    }
    parts.push_back(entry);
  }
  json report = {{"whole_certificate", io::certificate_to_json(dec.whole_certificate)},
                 {"parts", parts},
                 {"support_points", dec.positive_points.size()},
                 {"peak_points", dec.peak_points.size()},
                 {"whole_vs_envelope", dec.whole_gap},
                 {"envelope_vs_peak_envelope", dec.peak_gap},
                 {"match_tolerance", match_tolerance(*cfg.space)}};
  if (grid) {
    io::write_pgm(dir / "whole.pgm", io::render(dec.whole));
    io::write_pgm(dir / "envelope.pgm", io::render(dec.envelope));
  } else {
    report["whole"] = oracle::from_engine(dec.whole);
    report["envelope"] = oracle::from_engine(dec.envelope);
  }
  const bool ok = fuzzy_match(dec.whole, dec.envelope) &&
                  fuzzy_match(dec.envelope, dec.peak_envelope) &&
                  dec.whole_certificate.terminal != Terminal::BudgetExhausted;
  report["status"] = ok ? "pass" : "fail";
  io::write_json(dir / "report.json", report);
  out << "decompose: " << dec.parts.size() << " parts, whole vs envelope gap " << dec.whole_gap
      << " -> " << dir.string() << '\n';
  return ok ? kExitOk : kExitFailure;
}

int cmd_fixtures(const Settings& s, std::ostream& out) {
  oracle::GenerateOptions opts;
  opts.targeted = s.targeted;
  const auto instances = oracle::generate_instances(s.seed, s.count, opts);
  const fs::path dir = s.out;
  fs::create_directories(dir);
  for (const auto& inst : instances) {
    io::Fixture fx{inst, oracle::oracle_fixed_points(inst).limit, json::object()};
    if (const auto pair = oracle::distinct_fractal_pair(inst)) {
      fx.extra["distinct_deltas"] = {inst.labels[pair->first], inst.labels[pair->second]};
    }
    io::write_json(dir / (inst.id + ".json"), io::fixture_to_json(fx));
  }
  out << "fixtures: wrote " << instances.size() << " instances to " << dir.string() << '\n';
  if (instances.size() < s.count) {
    out << "fixtures: search budget ran out after " << instances.size() << " of " << s.count
        << '\n';
  }
  return kExitOk;
}

int cmd_certify(const Settings& s, std::ostream& out) {
  const io::RunConfig cfg = io::load_config(s.config);
  json doc = io::certificate_to_json(cfg.system.ifs().certificate(), *cfg.space);
  doc["global_lipschitz"] = global_lipschitz(*cfg.space, cfg.system.ifs().maps());
  if (!s.report.empty()) io::write_json(s.report, doc);
  out << doc.dump(2) << '\n';
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Orbital fuzzy iterated function systems", "ofifs"};
  app.require_subcommand(1);
  Settings s;

  auto* render = app.add_subcommand("render", "Iterate a grid system and write a PGM image");
  render->add_option("--config", s.config, "System config (JSON)")->required();
  render->add_option("--out", s.out, "Output image")->required();
  render->add_option("--report", s.report, "Certificate output (default: <out>.json)");

  auto* verify = app.add_subcommand("verify", "Run the verification suite");
  verify->add_option("--config", s.config, "Check one system config instead of generated instances");
  verify->add_option("--fixture", s.fixtures, "Check recorded fixtures");
  verify->add_option("--count", s.count, "Number of generated instances");
  verify->add_option("--instance", s.instance, "Only this generated instance id");
  verify->add_option("--grid-size", s.grid_size, "Side of the grid scenarios");
  verify->add_flag("--no-grids", s.no_grids, "Skip grid scenarios");
  verify->add_option("--report", s.report, "Report output (JSON)");

  auto* decompose = app.add_subcommand("decompose", "Render the whole limit, its parts and the envelope");
  decompose->add_option("--config", s.config, "System config (JSON)")->required();
  decompose->add_option("--out", s.out, "Output directory")->required();

  auto* fixtures = app.add_subcommand("fixtures", "Write generated oracle instances with their limits");
  fixtures->add_option("--out", s.out, "Output directory")->required();
  fixtures->add_option("--count", s.count, "Number of instances");
  fixtures->add_flag("--targeted", s.targeted, "Only non-contractive systems with several fractals");

  auto* certify = app.add_subcommand("certify", "Print the orbital certificate of a config");
  certify->add_option("--config", s.config, "System config (JSON)")->required();
  certify->add_option("--report", s.report, "Certificate output (JSON)");

  for (auto* sub : {render, verify, decompose, fixtures}) {
    sub->add_option("--seed", s.seed, "Generator seed");
  }
  for (auto* sub : {render, verify, decompose}) {
    sub->add_option("--eps", s.eps, "Stopping tolerance");
    sub->add_option("--budget", s.budget, "Iteration budget");
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (render->parsed()) return cmd_render(s, out);
    if (verify->parsed()) return cmd_verify(s, out);
    if (decompose->parsed()) return cmd_decompose(s, out);
    if (fixtures->parsed()) return cmd_fixtures(s, out);
    return cmd_certify(s, out);
  } catch (const NonConvergence& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}

}  // namespace ofifs::cli
