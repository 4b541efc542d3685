#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace convexlse {

// Minimal RFC-4180 output: CRLF record ends, fields quoted only when they
// contain a comma, quote or newline.
class CsvWriter {
 public:
  explicit CsvWriter(const std::filesystem::path& path);

  void row(const std::vector<std::string>& fields);

  // Shortest decimal representation that round-trips the double exactly.
  static std::string number(double v);
  static std::string number(long long v);

 private:
  std::ofstream out_;
};

}  // namespace convexlse
