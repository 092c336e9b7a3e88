#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace svibt {

/// Minimal CSV table: header row plus string cells. No quoting support;
/// none of the engine's formats need it.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Index of a header column, or -1 if absent.
  int column(std::string_view name) const;
};

CsvTable parse_csv(std::string_view bytes);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view contents);

/// Fixed-format double for report files: shortest form round-trippable at
/// 17 significant digits would be noisy; reports use %.12g which is stable
/// and more than enough for weekly returns.
std::string format_double(double v);

}  // namespace svibt
