#pragma once

// Line-oriented run configuration:
//
//   # comment (also ';')
//   scenario = geodesic
//   output_dir = out/geodesic
//   [geodesic]
//   step = 1e-4
//
// Keys inside a section are addressed as "section.key". Later assignments and
// overrides replace earlier ones.

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>

namespace localmath::cli {

class Config {
 public:
  struct Entry {
    std::string value;
    std::string origin;  // "file:line", "--set", "env", ...
  };

  /// Throws ConfigInvalid with the offending line on syntax errors.
  static Config parse(std::istream& in, const std::string& name = "<config>");
  /// Throws IoError if the file cannot be read.
  static Config load(const std::filesystem::path& path);

  void set(const std::string& key, const std::string& value, const std::string& origin);
  /// Parses "key=value" as given on the command line.
  void set_assignment(const std::string& assignment, const std::string& origin);

  bool has(const std::string& key) const { return entries_.count(key) != 0; }
  std::optional<std::string> get(const std::string& key) const;
  const std::map<std::string, Entry>& entries() const noexcept { return entries_; }

 private:
  std::map<std::string, Entry> entries_;
};

/// Strict conversions; the error names the key.
double parse_number(const std::string& key, const std::string& text);
long long parse_integer(const std::string& key, const std::string& text);
bool parse_bool(const std::string& key, const std::string& text);

}  // namespace localmath::cli
