#pragma once

#include <initializer_list>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace localmath {

/// Shortest round-trip decimal form; stable across runs on one platform.
std::string format_number(double v);

class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& out) : out_(out) {}

  void header(std::initializer_list<std::string_view> names);
  void row(std::initializer_list<double> values);
  void row(const std::vector<double>& values);
  void row_text(const std::vector<std::string>& cells);

 private:
  std::ostream& out_;
};

}  // namespace localmath
