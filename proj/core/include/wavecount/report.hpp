#pragma once

// Run reports: record tables, fitted exponents, invariant flags and provenance, with
// RFC-4180 CSV, insertion-ordered JSON and Markdown renderings.

#include <nlohmann/json.hpp>

#include <string>
#include <utility>
#include <vector>

namespace wavecount::report {

using Json = nlohmann::ordered_json;

inline constexpr const char* kVersion = "0.3.0";

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  /// Throws std::invalid_argument when the row width differs from the header.
  void add_row(std::vector<std::string> row);
  std::size_t column(const std::string& name) const;  ///< npos when absent
};

struct RunReport {
  std::string command;
  Json config = Json::object();
  Table records;
  std::vector<std::pair<std::string, double>> fits;
  std::vector<std::pair<std::string, bool>> checks;
  Json details = Json::object();
  double elapsed_ms = 0;

  bool all_passed() const;
  /// FNV-1a 64 of the compact config dump, as 16 hex digits.
  std::string config_hash() const;
};

/// Shortest round-trip decimal ("%.17g" trimmed): identical doubles give identical text.
std::string format_double(double v);

std::string csv_field(const std::string& s);
/// Header line plus one line per row, CRLF terminated.
std::string to_csv(const Table& table);

/// Timing is omitted unless requested so that files are byte-identical across runs.
Json to_json(const RunReport& report, bool include_timing = false);
RunReport from_json(const Json& j);

/// Markdown summary: config, fits, checks and the record table. A relative_error column
/// gains a running-mean trend column.
std::string render_markdown(const RunReport& report);

}  // namespace wavecount::report
