#include "wavecount/report.hpp"

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace wavecount::report {

void Table::add_row(std::vector<std::string> row) {
  if (row.size() != columns.size())
    throw std::invalid_argument("row has " + std::to_string(row.size()) + " fields, header has " +
                                std::to_string(columns.size()));
  rows.push_back(std::move(row));
}

std::size_t Table::column(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i)
    if (columns[i] == name) return i;
  return std::string::npos;
}

bool RunReport::all_passed() const {
  for (const auto& [name, ok] : checks)
    if (!ok) return false;
  return true;
}

std::string RunReport::config_hash() const {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : config.dump()) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) throw std::runtime_error("number formatting failed");
  return std::string(buf, end);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

std::string to_csv(const Table& table) {
  std::string out;
  auto line = [&](const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) out += ',';
      out += csv_field(fields[i]);
    }
    out += "\r\n";
  };
  line(table.columns);
  for (const auto& r : table.rows) line(r);
  return out;
}

namespace {

// JSON has no infinities; non-finite values travel as strings.
Json number(double v) {
  if (std::isfinite(v)) return v;
  return format_double(v);
}

double to_number(const Json& j) {
  if (j.is_number()) return j.get<double>();
  const std::string s = j.get<std::string>();
  if (s == "inf") return HUGE_VAL;
  if (s == "-inf") return -HUGE_VAL;
  return std::nan("");
}

}  // namespace

Json to_json(const RunReport& report, bool include_timing) {
  Json j;
  j["command"] = report.command;
  j["provenance"] = {{"version", kVersion}, {"config_hash", report.config_hash()}};
  j["config"] = report.config;
  Json fits = Json::object();
  for (const auto& [k, v] : report.fits) fits[k] = number(v);
  j["fits"] = fits;
  Json checks = Json::object();
  for (const auto& [k, v] : report.checks) checks[k] = v;
  j["checks"] = checks;
  j["records"] = {{"columns", report.records.columns}, {"rows", report.records.rows}};
  j["details"] = report.details;
  if (include_timing) j["elapsed_ms"] = report.elapsed_ms;
  return j;
}

RunReport from_json(const Json& j) {
  RunReport r;
  try {
    r.command = j.at("command").get<std::string>();
    r.config = j.value("config", Json::object());
    const Json fits = j.value("fits", Json::object());
    const Json checks = j.value("checks", Json::object());
    for (const auto& [k, v] : fits.items()) r.fits.emplace_back(k, to_number(v));
    for (const auto& [k, v] : checks.items()) r.checks.emplace_back(k, v.get<bool>());
    if (j.contains("records")) {
      r.records.columns = j["records"].at("columns").get<std::vector<std::string>>();
      for (const auto& row : j["records"].at("rows")) r.records.add_row(row.get<std::vector<std::string>>());
    }
    r.details = j.value("details", Json::object());
    r.elapsed_ms = j.value("elapsed_ms", 0.0);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("report document: ") + e.what());
  }
  return r;
}

std::string render_markdown(const RunReport& report) {
  std::ostringstream os;
  os << "# wavecount " << report.command << "\n\n";
  os << "version " << kVersion << ", config " << report.config_hash() << "\n\n";
  if (!report.config.empty()) {
    os << "## Config\n\n";
    for (const auto& [k, v] : report.config.items()) os << "- " << k << ": " << v.dump() << "\n";
    os << "\n";
  }
  if (!report.fits.empty()) {
    os << "## Fits\n\n";
    for (const auto& [k, v] : report.fits) os << "- " << k << " = " << format_double(v) << "\n";
    os << "\n";
  }
  if (!report.checks.empty()) {
    os << "## Checks\n\n";
    for (const auto& [k, v] : report.checks) os << "- " << (v ? "PASS " : "FAIL ") << k << "\n";
    os << "\n";
  }

  Table t = report.records;
  const std::size_t rel = t.column("relative_error");
  if (rel != std::string::npos) {
    t.columns.push_back("trend");
    double sum = 0;
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
      sum += std::fabs(std::stod(t.rows[i][rel]));
      t.rows[i].push_back(format_double(sum / static_cast<double>(i + 1)));
    }
  }
  os << "## Records\n\n";
  if (t.columns.empty()) return os.str();
  os << "|";
  for (const auto& c : t.columns) os << " " << c << " |";
  os << "\n|";
  for (std::size_t i = 0; i < t.columns.size(); ++i) os << " --- |";
  os << "\n";
  for (const auto& r : t.rows) {
    os << "|";
    for (const auto& f : r) os << " " << f << " |";
    os << "\n";
  }
  return os.str();
}

}  // namespace wavecount::report
