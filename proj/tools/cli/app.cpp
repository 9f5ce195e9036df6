#include "app.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "config.hpp"
#include "localmath/csv.hpp"
#include "localmath/error.hpp"
#include "localmath/kernels.hpp"
#include "scenarios.hpp"

namespace localmath::cli {

namespace {

struct Options {
  std::string config_path;
  std::string scenario;
  std::vector<std::string> assignments;
  std::string output_dir;
};

void apply_overrides(Config& cfg, const Options& opt) {
  if (const char* env = std::getenv(kOutputDirEnv); env && *env) cfg.set("output_dir", env, "env " + std::string(kOutputDirEnv));
  for (const auto& a : opt.assignments) cfg.set_assignment(a, "--set");
  if (!opt.output_dir.empty()) cfg.set("output_dir", opt.output_dir, "--output-dir");
}

Config demo_config(const std::string& name) {
  const Scenario* sc = find_scenario(name);
  if (!sc) {
    std::string known;
    for (const auto& s : scenarios()) known += (known.empty() ? "" : ", ") + s.name;
    fail(ErrorCode::ConfigInvalid, "scenario: unknown scenario '" + name + "' (known: " + known + ")");
  }
  std::istringstream text(default_config_text(*sc));
  Config cfg = Config::parse(text, "demo " + name);
  cfg.set("output_dir", "localmath-demo/" + name, "demo default");
  return cfg;
}

int execute(Config cfg, const Options& opt, std::ostream& out, std::ostream& err) {
  apply_overrides(cfg, opt);
  const auto diags = validate(cfg);
  if (!diags.empty()) {
    for (const auto& d : diags) err << "config error: " << d << '\n';
    return kExitConfigError;
  }
  const std::filesystem::path dir = cfg.get("output_dir").value_or("localmath-out");
  const RunReport report = run(cfg, dir);
  for (const auto& c : report.checks) {
    out << (c.pass ? "PASS " : "FAIL ") << c.name << "  measured=" << format_number(c.measured)
        << " expected=" << format_number(c.expected) << " tol=" << format_number(c.tolerance) << " ("
        << to_string(c.comparison) << ")\n";
  }
  out << report.scenario << ": " << (report.passed() ? "all checks passed" : "checks failed") << " in " << std::fixed
      << std::setprecision(3) << report.wall_seconds << " s; report " << (dir / "report.csv").string() << '\n';
  out.unsetf(std::ios::floatfield);
  return report.passed() ? kExitPass : kExitCheckFailed;
}

int validate_only(Config cfg, const Options& opt, std::ostream& out, std::ostream& err) {
  apply_overrides(cfg, opt);
  const auto diags = validate(cfg);
  for (const auto& d : diags) err << d << '\n';
  if (diags.empty()) out << "valid\n";
  return diags.empty() ? kExitPass : kExitConfigError;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"localmath: scenario runner for local mathematics", "localmath"};
  app.require_subcommand(1);
  Options opt;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--set", opt.assignments, "Override a config key, key=value (repeatable)");
    sub->add_option("--output-dir", opt.output_dir, "Output directory (overrides config and environment)");
  };
  auto* run_cmd = app.add_subcommand("run", "Run the scenario described by a config file");
  run_cmd->add_option("config", opt.config_path, "Config file")->required();
  add_common(run_cmd);
  auto* validate_cmd = app.add_subcommand("validate", "Print diagnostics for a config file");
  validate_cmd->add_option("config", opt.config_path, "Config file")->required();
  add_common(validate_cmd);
  auto* demo_cmd = app.add_subcommand("demo", "Run a scenario with its default parameters");
  demo_cmd->add_option("scenario", opt.scenario, "Scenario name")->required();
  add_common(demo_cmd);
  auto* list_cmd = app.add_subcommand("list", "List scenarios");
  auto* defaults_cmd = app.add_subcommand("defaults", "Print a scenario's default config");
  defaults_cmd->add_option("scenario", opt.scenario, "Scenario name")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitPass : kExitConfigError;
  }

  try {
    if (*list_cmd) {
      for (const auto& s : scenarios()) out << std::left << std::setw(18) << s.name << s.summary << '\n';
      return kExitPass;
    }
    if (*defaults_cmd) {
      const Scenario* sc = find_scenario(opt.scenario);
      if (!sc) fail(ErrorCode::ConfigInvalid, "scenario: unknown scenario '" + opt.scenario + "'");
      out << default_config_text(*sc);
      return kExitPass;
    }
    if (*validate_cmd) return validate_only(Config::load(opt.config_path), opt, out, err);
    err << "kernels: " << kernels::to_string(kernels::active_isa()) << '\n';
    if (*demo_cmd) return execute(demo_config(opt.scenario), opt, out, err);
    return execute(Config::load(opt.config_path), opt, out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    if (e.code() == ErrorCode::ConfigInvalid || e.code() == ErrorCode::IoError) return kExitConfigError;
    return kExitCheckFailed;
  }
}

}  // namespace localmath::cli
