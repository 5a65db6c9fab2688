#include "doctest.h"

#include "wavecount/report.hpp"

#include <cmath>
#include <cstdlib>
#include <random>

using namespace wavecount::report;

namespace {

// minimal RFC-4180 reader used as the oracle for the writer
std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> out;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false, was_quoted = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
    } else if (c == '"') {
      REQUIRE(field.empty());
      quoted = was_quoted = true;
    } else if (c == ',') {
      row.push_back(field);
      field.clear();
      was_quoted = false;
    } else if (c == '\r') {
      REQUIRE(i + 1 < text.size());
      REQUIRE(text[i + 1] == '\n');
      ++i;
      row.push_back(field);
      out.push_back(row);
      row.clear();
      field.clear();
      was_quoted = false;
    } else {
      REQUIRE(c != '\n');  // bare LF never terminates a record
      field += c;
    }
  }
  REQUIRE_FALSE(quoted);
  REQUIRE(field.empty());
  (void)was_quoted;
  return out;
}

RunReport sample() {
  RunReport r;
  r.command = "hyperbolic";
  r.config = Json::object();
  r.config["z_last"] = 1;
  r.config["a_first"] = "x";
  r.records.columns = {"R", "relative_error"};
  r.records.add_row({"1", "-0.5"});
  r.records.add_row({"2", "0.25"});
  r.fits = {{"zeta", 0.5}, {"alpha", HUGE_VAL}};
  r.checks = {{"b", true}, {"a", false}};
  r.details["note"] = "ok";
  r.elapsed_ms = 12.5;
  return r;
}

}  // namespace

TEST_SUITE("report") {

TEST_CASE("csv quoting") {
  CHECK(csv_field("plain") == "plain");
  CHECK(csv_field("a,b") == "\"a,b\"");
  CHECK(csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
  CHECK(csv_field("two\nlines") == "\"two\nlines\"");
  Table t;
  t.columns = {"x", "y"};
  t.add_row({"1", "2"});
  CHECK(to_csv(t) == "x,y\r\n1,2\r\n");
  CHECK_THROWS_AS(t.add_row({"1"}), std::invalid_argument);
  CHECK(t.column("y") == 1);
  CHECK(t.column("z") == std::string::npos);
}

TEST_CASE("csv round trip through an RFC-4180 reader") {
  std::mt19937_64 rng(1);
  const std::string alphabet = "ab,\"\r\n 1;";
  std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1), len(0, 8);
  for (int trial = 0; trial < 200; ++trial) {
    Table t;
    t.columns = {"c0", "c1", "c2"};
    for (int r = 0; r < 4; ++r) {
      std::vector<std::string> row;
      for (int c = 0; c < 3; ++c) {
        std::string s;
        for (std::size_t k = len(rng); k > 0; --k) s += alphabet[pick(rng)];
        row.push_back(s);
      }
      t.add_row(row);
    }
    const auto parsed = parse_csv(to_csv(t));
    REQUIRE(parsed.size() == 5);
    CHECK(parsed[0] == t.columns);
    for (std::size_t r = 0; r < 4; ++r) CHECK(parsed[r + 1] == t.rows[r]);
  }
}

TEST_CASE("format_double round trips") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> d(-1e6, 1e6);
  for (int k = 0; k < 1000; ++k) {
    const double v = d(rng) * std::pow(10.0, static_cast<int>(rng() % 40) - 20);
    CHECK(std::strtod(format_double(v).c_str(), nullptr) == v);
  }
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(HUGE_VAL) == "inf");
  CHECK(format_double(-HUGE_VAL) == "-inf");
  CHECK(format_double(std::nan("")) == "nan");
}

TEST_CASE("json key order and round trip") {
  const RunReport r = sample();
  const Json j = to_json(r);
  std::vector<std::string> keys;
  for (const auto& [k, v] : j.items()) keys.push_back(k);
  CHECK(keys == std::vector<std::string>{"command", "provenance", "config", "fits", "checks", "records", "details"});
  CHECK(to_json(r, true).back() == Json(12.5));
  // insertion order, not alphabetical
  CHECK(j["config"].begin().key() == "z_last");
  CHECK(j["fits"].begin().key() == "zeta");
  CHECK(j["fits"]["alpha"] == "inf");
  CHECK(j["provenance"]["version"] == kVersion);
  const RunReport back = from_json(Json::parse(j.dump()));
  CHECK(back.command == r.command);
  CHECK(back.config == r.config);
  CHECK(back.records.rows == r.records.rows);
  CHECK(back.fits.size() == 2);
  CHECK(back.fits[0].second == 0.5);
  CHECK(std::isinf(back.fits[1].second));
  CHECK(back.checks == r.checks);
  CHECK(to_json(back).dump() == j.dump());
  CHECK_FALSE(r.all_passed());
  CHECK_THROWS_AS(from_json(Json::parse(R"({"fits": {}})")), std::invalid_argument);
}

TEST_CASE("config hash") {
  RunReport a = sample(), b = sample();
  CHECK(a.config_hash() == b.config_hash());
  CHECK(a.config_hash().size() == 16);
  b.config["z_last"] = 2;
  CHECK(a.config_hash() != b.config_hash());
  // FNV-1a of "{}"
  RunReport e;
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : std::string("{}")) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  CHECK(e.config_hash() == buf);
}

TEST_CASE("markdown rendering") {
  const std::string md = render_markdown(sample());
  CHECK(md.find("# wavecount hyperbolic") == 0);
  CHECK(md.find("- FAIL a") != std::string::npos);
  CHECK(md.find("- PASS b") != std::string::npos);
  CHECK(md.find("| R | relative_error | trend |") != std::string::npos);
  // running mean of |relative_error|: 0.5 then 0.375
  CHECK(md.find("| 1 | -0.5 | 0.5 |") != std::string::npos);
  CHECK(md.find("| 2 | 0.25 | 0.375 |") != std::string::npos);
  RunReport plain;
  plain.command = "x";
  plain.records.columns = {"a"};
  CHECK(render_markdown(plain).find("trend") == std::string::npos);
}

}  // TEST_SUITE
