#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace zzkit::io {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(const std::string& name) const;  // throws ConfigError when missing
  std::vector<double> numeric(const std::string& name) const;
};

/// Plain comma-separated text: no quoting, one header line, '\n' endings.
std::string format_csv(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows);
void write_text(const std::filesystem::path& path, const std::string& text);
CsvTable parse_csv(const std::string& text);
CsvTable read_csv(const std::filesystem::path& path);

/// Shortest round-trip decimal form; "nan" for NaN.
std::string format_number(double v);

}  // namespace zzkit::io
