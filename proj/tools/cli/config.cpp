#include "config.hpp"

#include <cctype>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <istream>

#include "localmath/error.hpp"

namespace localmath::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool valid_name(const std::string& s) {
  if (s.empty()) return false;
  for (char ch : s)
    if (!(std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' || ch == '-' || ch == '.')) return false;
  return true;
}

std::string strip_comment(const std::string& line) {
  // Comments start a line or follow whitespace, so values like "a#b" survive.
  for (std::size_t i = 0; i < line.size(); ++i) {
    if ((line[i] == '#' || line[i] == ';') && (i == 0 || std::isspace(static_cast<unsigned char>(line[i - 1]))))
      return line.substr(0, i);
  }
  return line;
}

}  // namespace

Config Config::parse(std::istream& in, const std::string& name) {
  Config cfg;
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string where = name + ":" + std::to_string(lineno);
    const std::string text = trim(strip_comment(line));
    if (text.empty()) continue;
    if (text.front() == '[') {
      if (text.back() != ']') fail(ErrorCode::ConfigInvalid, where + ": unterminated section header");
      section = trim(text.substr(1, text.size() - 2));
      if (!valid_name(section)) fail(ErrorCode::ConfigInvalid, where + ": bad section name '" + section + "'");
      continue;
    }
    const auto eq = text.find('=');
    if (eq == std::string::npos) fail(ErrorCode::ConfigInvalid, where + ": expected 'key = value'");
    const std::string key = trim(text.substr(0, eq));
    if (!valid_name(key)) fail(ErrorCode::ConfigInvalid, where + ": bad key '" + key + "'");
    cfg.set(section.empty() ? key : section + "." + key, trim(text.substr(eq + 1)), where);
  }
  return cfg;
}

Config Config::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::IoError, "cannot read config " + path.string());
  return parse(in, path.string());
}

void Config::set(const std::string& key, const std::string& value, const std::string& origin) {
  entries_[key] = Entry{value, origin};
}

void Config::set_assignment(const std::string& assignment, const std::string& origin) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) fail(ErrorCode::ConfigInvalid, origin + ": expected key=value, got '" + assignment + "'");
  const std::string key = trim(assignment.substr(0, eq));
  if (!valid_name(key)) fail(ErrorCode::ConfigInvalid, origin + ": bad key '" + key + "'");
  set(key, trim(assignment.substr(eq + 1)), origin);
}

std::optional<std::string> Config::get(const std::string& key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  return it->second.value;
}

double parse_number(const std::string& key, const std::string& text) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size() || errno == ERANGE || !std::isfinite(v))
    fail(ErrorCode::ConfigInvalid, key + ": expected a finite number, got '" + text + "'");
  return v;
}

long long parse_integer(const std::string& key, const std::string& text) {
  errno = 0;
  char* end = nullptr;
  const long long v = std::strtoll(text.c_str(), &end, 10);
  if (text.empty() || end != text.c_str() + text.size() || errno == ERANGE)
    fail(ErrorCode::ConfigInvalid, key + ": expected an integer, got '" + text + "'");
  return v;
}

bool parse_bool(const std::string& key, const std::string& text) {
  if (text == "true" || text == "yes" || text == "on" || text == "1") return true;
  if (text == "false" || text == "no" || text == "off" || text == "0") return false;
  fail(ErrorCode::ConfigInvalid, key + ": expected true or false, got '" + text + "'");
}

}  // namespace localmath::cli
