#pragma once

// Scenario registry, typed settings and the run report.

#include <filesystem>
#include <fstream>
#include <iosfwd>
#include <string>
#include <vector>

#include "config.hpp"

namespace localmath::cli {

enum class Comparison {
  abs_diff,  // |measured - expected| <= tolerance
  rel_diff,  // |measured - expected| <= tolerance * |expected|
  at_most,   // measured <= tolerance
  below,     // measured < tolerance
};

std::string to_string(Comparison c);

struct CheckResult {
  std::string name;
  Comparison comparison = Comparison::abs_diff;
  double expected = 0.0;
  double measured = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

/// NaN measurements never pass.
CheckResult evaluate_check(std::string name, Comparison comparison, double expected, double measured, double tolerance);

struct RunReport {
  std::string scenario;
  double wall_seconds = 0.0;
  std::vector<CheckResult> checks;
  std::vector<std::string> artifacts;  // file names inside the output directory
  std::vector<std::pair<std::string, std::string>> parameters;

  bool passed() const;
};

/// Constants header, resolved parameters, artifacts, then one row per check.
/// Wall time is left out so that reruns are byte-identical.
void write_report(std::ostream& out, const RunReport& report);

enum class ParamType { number, integer, text, boolean };

struct ParamDef {
  std::string key;
  ParamType type = ParamType::number;
  std::string fallback;
  std::string help;
};

struct CheckDef {
  std::string name;
  double tolerance = 0.0;
  std::string help;
};

struct Scenario;

/// Typed view of one scenario's section with schema defaults filled in.
class Settings {
 public:
  Settings(const Config& cfg, const Scenario& scenario);

  double num(const std::string& key) const;
  long long integer(const std::string& key) const;
  std::size_t count(const std::string& key) const;  // integer >= 0
  std::string text(const std::string& key) const;
  bool flag(const std::string& key) const;
  double tolerance(const std::string& check) const;

  std::string qualified(const std::string& key) const;
  const Scenario& scenario() const noexcept { return scenario_; }

 private:
  std::string raw(const std::string& key) const;

  const Config& cfg_;
  const Scenario& scenario_;
};

/// Output directory that records every file opened through it.
class Output {
 public:
  explicit Output(std::filesystem::path dir);

  std::ofstream open(const std::string& name);
  const std::filesystem::path& dir() const noexcept { return dir_; }
  const std::vector<std::string>& artifacts() const noexcept { return artifacts_; }

 private:
  std::filesystem::path dir_;
  std::vector<std::string> artifacts_;
};

struct Scenario {
  using ValidateFn = void (*)(const Settings&, std::vector<std::string>&);
  using RunFn = void (*)(const Settings&, Output&, RunReport&);

  std::string name;
  std::string section;
  std::string summary;
  std::vector<ParamDef> params;
  std::vector<CheckDef> checks;
  ValidateFn validate = nullptr;
  RunFn run = nullptr;
};

const std::vector<Scenario>& scenarios();
const Scenario* find_scenario(const std::string& name);

/// Schema, type and range diagnostics; empty iff the config is runnable.
std::vector<std::string> validate(const Config& cfg);

/// Throws ConfigInvalid if validate() reports anything.
RunReport run(const Config& cfg, const std::filesystem::path& out_dir);

/// A complete config holding the scenario's defaults.
std::string default_config_text(const Scenario& scenario);

}  // namespace localmath::cli
