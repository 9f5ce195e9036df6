#include "scenarios.hpp"

#include <chrono>
#include <cmath>
#include <ostream>
#include <set>
#include <sstream>

#include "localmath/constants.hpp"
#include "localmath/csv.hpp"
#include "localmath/error.hpp"

namespace localmath::cli {

std::string to_string(Comparison c) {
  switch (c) {
    case Comparison::abs_diff: return "abs_diff";
    case Comparison::rel_diff: return "rel_diff";
    case Comparison::at_most: return "at_most";
    case Comparison::below: return "below";
  }
  return "unknown";
}

CheckResult evaluate_check(std::string name, Comparison comparison, double expected, double measured, double tolerance) {
  bool pass = false;
  switch (comparison) {
    case Comparison::abs_diff: pass = std::fabs(measured - expected) <= tolerance; break;
    case Comparison::rel_diff: pass = std::fabs(measured - expected) <= tolerance * std::fabs(expected); break;
    case Comparison::at_most: pass = measured <= tolerance; break;
    case Comparison::below: pass = measured < tolerance; break;
  }
  return {std::move(name), comparison, expected, measured, tolerance, pass && !std::isnan(measured)};
}

bool RunReport::passed() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

void write_report(std::ostream& out, const RunReport& report) {
  out << "# localmath run report\n# scenario = " << report.scenario << "\n";
  for (const auto& [name, value] : constants::table()) out << "# constant " << name << " = " << format_number(value) << "\n";
  for (const auto& [key, value] : report.parameters) out << "# param " << key << " = " << value << "\n";
  for (const auto& a : report.artifacts) out << "# artifact = " << a << "\n";
  CsvWriter csv(out);
  csv.header({"check", "comparison", "expected", "measured", "tolerance", "pass"});
  for (const auto& c : report.checks)
    csv.row_text({c.name, to_string(c.comparison), format_number(c.expected), format_number(c.measured),
                  format_number(c.tolerance), c.pass ? "true" : "false"});
}

// ---------------------------------------------------------------------------

namespace {

const ParamDef* find_param(const Scenario& sc, const std::string& key) {
  for (const auto& p : sc.params)
    if (p.key == key) return &p;
  return nullptr;
}

const CheckDef* find_check(const Scenario& sc, const std::string& name) {
  for (const auto& c : sc.checks)
    if (c.name == name) return &c;
  return nullptr;
}

}  // namespace

Settings::Settings(const Config& cfg, const Scenario& scenario) : cfg_(cfg), scenario_(scenario) {}

std::string Settings::qualified(const std::string& key) const { return scenario_.section + "." + key; }

std::string Settings::raw(const std::string& key) const {
  const ParamDef* def = find_param(scenario_, key);
  if (!def) fail(ErrorCode::InvalidArgument, "scenario " + scenario_.name + " has no parameter " + key);
  return cfg_.get(qualified(key)).value_or(def->fallback);
}

double Settings::num(const std::string& key) const { return parse_number(qualified(key), raw(key)); }
long long Settings::integer(const std::string& key) const { return parse_integer(qualified(key), raw(key)); }

std::size_t Settings::count(const std::string& key) const {
  const long long v = integer(key);
  if (v < 0) fail(ErrorCode::ConfigInvalid, qualified(key) + ": must be >= 0");
  return static_cast<std::size_t>(v);
}

std::string Settings::text(const std::string& key) const { return raw(key); }
bool Settings::flag(const std::string& key) const { return parse_bool(qualified(key), raw(key)); }

double Settings::tolerance(const std::string& check) const {
  const CheckDef* def = find_check(scenario_, check);
  if (!def) fail(ErrorCode::InvalidArgument, "scenario " + scenario_.name + " has no check " + check);
  const std::string key = "tolerances." + check;
  if (auto v = cfg_.get(key)) return parse_number(key, *v);
  return def->tolerance;
}

Output::Output(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (ec) fail(ErrorCode::IoError, "cannot create output directory " + dir_.string() + ": " + ec.message());
}

std::ofstream Output::open(const std::string& name) {
  std::ofstream out(dir_ / name, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::IoError, "cannot write " + (dir_ / name).string());
  artifacts_.push_back(name);
  return out;
}

const Scenario* find_scenario(const std::string& name) {
  for (const auto& s : scenarios())
    if (s.name == name) return &s;
  return nullptr;
}

std::vector<std::string> validate(const Config& cfg) {
  std::vector<std::string> diags;
  const auto name = cfg.get("scenario");
  if (!name || name->empty()) {
    diags.push_back("scenario: missing; expected one of the built-in scenarios");
    return diags;
  }
  const Scenario* sc = find_scenario(*name);
  if (!sc) {
    std::string known;
    for (const auto& s : scenarios()) known += (known.empty() ? "" : ", ") + s.name;
    diags.push_back("scenario: unknown scenario '" + *name + "' (known: " + known + ")");
    return diags;
  }

  for (const auto& [key, entry] : cfg.entries()) {
    if (key == "scenario" || key == "output_dir") continue;
    const auto dot = key.find('.');
    const std::string section = dot == std::string::npos ? "" : key.substr(0, dot);
    const std::string leaf = dot == std::string::npos ? key : key.substr(dot + 1);
    bool known = false;
    if (section == sc->section) known = find_param(*sc, leaf) != nullptr;
    if (section == "tolerances") known = find_check(*sc, leaf) != nullptr;
    if (!known) diags.push_back(key + ": unknown key for scenario " + sc->name + " (" + entry.origin + ")");
  }

  const Settings settings(cfg, *sc);
  bool types_ok = true;
  for (const auto& p : sc->params) {
    try {
      switch (p.type) {
        case ParamType::number: settings.num(p.key); break;
        case ParamType::integer: settings.integer(p.key); break;
        case ParamType::boolean: settings.flag(p.key); break;
        case ParamType::text: break;
      }
    } catch (const Error& e) {
      diags.push_back(e.what());
      types_ok = false;
    }
  }
  for (const auto& c : sc->checks) {
    try {
      if (!(settings.tolerance(c.name) >= 0.0)) diags.push_back("tolerances." + c.name + ": must be >= 0");
    } catch (const Error& e) {
      diags.push_back(e.what());
      types_ok = false;
    }
  }
  if (types_ok && sc->validate) {
    try {
      sc->validate(settings, diags);
    } catch (const Error& e) {
      diags.push_back(e.what());
    }
  }
  return diags;
}

RunReport run(const Config& cfg, const std::filesystem::path& out_dir) {
  const auto diags = validate(cfg);
  if (!diags.empty()) fail(ErrorCode::ConfigInvalid, diags.front());
  const Scenario& sc = *find_scenario(*cfg.get("scenario"));
  const Settings settings(cfg, sc);

  RunReport report;
  report.scenario = sc.name;
  for (const auto& p : sc.params) report.parameters.emplace_back(settings.qualified(p.key), settings.text(p.key));
  for (const auto& c : sc.checks)
    report.parameters.emplace_back("tolerances." + c.name, format_number(settings.tolerance(c.name)));

  Output output(out_dir);
  const auto start = std::chrono::steady_clock::now();
  sc.run(settings, output, report);
  report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  report.artifacts = output.artifacts();

  // Every declared check must appear exactly once.
  std::multiset<std::string> seen;
  for (const auto& c : report.checks) seen.insert(c.name);
  for (const auto& c : sc.checks)
    if (seen.count(c.name) != 1) fail(ErrorCode::InvalidArgument, "scenario " + sc.name + " did not report check " + c.name + " exactly once");
  if (report.checks.size() != sc.checks.size()) fail(ErrorCode::InvalidArgument, "scenario reported undeclared checks");

  auto out = output.open("report.csv");
  write_report(out, report);
  if (!out) fail(ErrorCode::IoError, "failed writing report.csv");
  report.artifacts.push_back("report.csv");
  return report;
}

std::string default_config_text(const Scenario& scenario) {
  std::ostringstream out;
  out << "# " << scenario.summary << "\n";
  out << "scenario = " << scenario.name << "\n\n[" << scenario.section << "]\n";
  for (const auto& p : scenario.params) out << p.key << " = " << p.fallback << "  # " << p.help << "\n";
  out << "\n[tolerances]\n";
  for (const auto& c : scenario.checks) out << c.name << " = " << format_number(c.tolerance) << "  # " << c.help << "\n";
  return out.str();
}

}  // namespace localmath::cli
