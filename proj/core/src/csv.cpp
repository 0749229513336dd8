#include "colorcenter/csv.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "colorcenter/errors.hpp"

namespace colorcenter {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(',', start);
    out.push_back(trim(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

bool parse_double(const std::string& s, double& v) {
  if (s.empty()) return false;
  errno = 0;
  char* end = nullptr;
  v = std::strtod(s.c_str(), &end);
  return errno == 0 && end == s.c_str() + s.size() && std::isfinite(v);
}

std::string join(const std::vector<std::string>& v, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += sep;
    out += v[i];
  }
  return out;
}

std::vector<CsvSchema> make_schemas() {
  return {
      {"spectrum", {{"wavelength_nm"}, {"counts"}}, 0, {1}},
      {"response", {{"wavelength_nm"}, {"efficiency"}}, 0, {}},
      {"stark", {{"voltage_v"}, {"peak_freq_ghz"}}, -1, {}},
      {"decay", {{"time_us", "time_ns"}, {"counts"}}, 0, {1}},
      {"ple", {{"freq_ghz", "freq_mhz", "detuning_ghz", "detuning_mhz"}, {"counts"}}, 0, {}},
      {"peaks", {{"b_tesla"}, {"freq_offset_ghz"}}, -1, {0}},
      {"sweep", {{"b_tesla"}, {"line_index"}, {"freq_offset_ghz"}, {"intensity"}}, -1, {0, 1, 3}},
  };
}

}  // namespace

const std::vector<double>& CsvTable::column(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return columns[i];
  }
  throw InputError("CSV has no column named '" + std::string(name) + "'");
}

const CsvSchema& schema_named(std::string_view name) {
  static const std::vector<CsvSchema> schemas = make_schemas();
  for (const auto& s : schemas) {
    if (s.name == name) return s;
  }
  throw InputError("unknown CSV schema '" + std::string(name) + "'");
}

std::vector<std::string> schema_names() {
  std::vector<std::string> out;
  for (const auto& s : make_schemas()) out.push_back(s.name);
  return out;
}

ValidationReport validate_csv_text(std::string_view text, const CsvSchema& schema, CsvTable* table) {
  ValidationReport report;
  CsvTable parsed;
  parsed.columns.resize(schema.columns.size());

  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line_no = 0;
  bool have_header = false;
  std::size_t last_good_line = 0;
  double last_ascending = 0.0;
  bool have_ascending = false;

  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    auto fields = split(line);

    if (!have_header) {
      have_header = true;
      bool match = fields.size() == schema.columns.size();
      for (std::size_t c = 0; match && c < fields.size(); ++c) {
        bool any = false;
        for (const auto& alt : schema.columns[c]) any = any || alt == fields[c];
        match = any;
      }
      if (!match) {
        std::vector<std::string> expected;
        for (const auto& alts : schema.columns) expected.push_back(join(alts, "|"));
        report.errors.push_back("line " + std::to_string(line_no) + ": header mismatch for schema '" + schema.name +
                                "': expected [" + join(expected, ", ") + "], found [" + join(fields, ", ") + "]");
        return report;
      }
      parsed.header = fields;
      continue;
    }

    const std::string where = "line " + std::to_string(line_no) + ": ";
    if (fields.size() != schema.columns.size()) {
      report.errors.push_back(where + "expected " + std::to_string(schema.columns.size()) + " fields, found " +
                              std::to_string(fields.size()));
      continue;
    }
    std::vector<double> values(fields.size());
    bool row_ok = true;
    for (std::size_t c = 0; c < fields.size(); ++c) {
      if (!parse_double(fields[c], values[c])) {
        report.errors.push_back(where + "'" + fields[c] + "' in column " + parsed.header[c] + " is not a finite number");
        row_ok = false;
      }
    }
    if (!row_ok) continue;
    for (int c : schema.nonnegative_columns) {
      if (values[static_cast<std::size_t>(c)] < 0.0) {
        report.errors.push_back(where + parsed.header[static_cast<std::size_t>(c)] + " must be nonnegative");
        row_ok = false;
      }
    }
    if (schema.ascending_column >= 0) {
      const double v = values[static_cast<std::size_t>(schema.ascending_column)];
      if (have_ascending && !(v > last_ascending)) {
        report.errors.push_back(where + parsed.header[static_cast<std::size_t>(schema.ascending_column)] +
                                " is not strictly ascending (previous value on line " +
                                std::to_string(last_good_line) + ")");
        row_ok = false;
      } else {
        last_ascending = v;
        have_ascending = true;
        last_good_line = line_no;
      }
    }
    if (!row_ok) continue;
    for (std::size_t c = 0; c < values.size(); ++c) parsed.columns[c].push_back(values[c]);
  }

  if (!have_header) {
    report.errors.push_back("file is empty: expected a header for schema '" + schema.name + "'");
    return report;
  }
  report.rows = parsed.rows();
  if (report.rows == 0 && report.errors.empty()) report.errors.push_back("no data rows after the header");
  if (table && report.ok()) *table = std::move(parsed);
  return report;
}

ValidationReport validate_csv(const std::filesystem::path& path, const CsvSchema& schema, CsvTable* table) {
  std::string text;
  try {
    text = read_text_file(path);
  } catch (const InputError& e) {
    ValidationReport r;
    r.errors.emplace_back(e.what());
    return r;
  }
  return validate_csv_text(text, schema, table);
}

CsvTable read_csv(const std::filesystem::path& path, const CsvSchema& schema) {
  CsvTable table;
  const ValidationReport report = validate_csv(path, schema, &table);
  if (!report.ok()) {
    std::string msg = path.string() + ":";
    for (const auto& e : report.errors) msg += "\n  " + e;
    throw InputError(msg);
  }
  return table;
}

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v == 0.0 ? 0.0 : v);
  return buf;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot write " + path.string());
  out << content;
  if (!out) throw InputError("failed writing " + path.string());
}

}  // namespace colorcenter
