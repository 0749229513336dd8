#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace colorcenter {

/// Column layout of a numeric CSV file. Each column lists its accepted header
/// names; the unit suffix is part of the name (e.g. time_us vs time_ns).
struct CsvSchema {
  std::string name;
  std::vector<std::vector<std::string>> columns;
  int ascending_column = -1;  // strictly ascending when >= 0
  std::vector<int> nonnegative_columns;
};

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> columns;

  [[nodiscard]] std::size_t rows() const { return columns.empty() ? 0 : columns.front().size(); }
  /// Column by header name; throws InputError if absent.
  [[nodiscard]] const std::vector<double>& column(std::string_view name) const;
};

struct ValidationReport {
  std::size_t rows = 0;
  std::vector<std::string> errors;  // "line N: ..." diagnostics

  [[nodiscard]] bool ok() const { return errors.empty(); }
};

/// Built-in schemas: spectrum, response, stark, decay, ple, peaks, sweep.
const CsvSchema& schema_named(std::string_view name);
std::vector<std::string> schema_names();

/// Parses `text` against `schema`, collecting every diagnostic rather than stopping at the first.
ValidationReport validate_csv_text(std::string_view text, const CsvSchema& schema, CsvTable* table = nullptr);
ValidationReport validate_csv(const std::filesystem::path& path, const CsvSchema& schema, CsvTable* table = nullptr);

/// Reads and validates; throws InputError listing the diagnostics on failure.
CsvTable read_csv(const std::filesystem::path& path, const CsvSchema& schema);

/// Nine significant digits, the format used for every numeric output.
std::string format_number(double v);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view content);

}  // namespace colorcenter
