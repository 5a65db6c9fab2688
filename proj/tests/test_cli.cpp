#include "doctest.h"

#include "commands.hpp"

#include "wavecount/errors.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace wavecount;
using namespace wavecount::cli;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "wavecount_cli_tests";
  fs::create_directories(dir);
  return dir / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void put(const fs::path& p, const std::string& text) { std::ofstream(p, std::ios::binary) << text; }

// message of the ConfigError thrown by f, empty if none
template <class F>
std::string config_error(F f) {
  try {
    f();
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

bool starts_with(const std::string& s, const std::string& prefix) { return s.rfind(prefix, 0) == 0; }

std::uint64_t brute_count2(double R) {
  const auto b = static_cast<long>(std::ceil(R));
  std::uint64_t n = 0;
  for (long x = -b; x <= b; ++x)
    for (long y = -b; y <= b; ++y)
      if (static_cast<double>(x * x + y * y) < R * R) ++n;
  return n;
}

struct EnvGuard {
  EnvGuard(const char* value) { setenv("WAVECOUNT_BUDGET", value, 1); }
  ~EnvGuard() { unsetenv("WAVECOUNT_BUDGET"); }
};

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("euclid command writes a consistent CSV") {
  EuclidParams p;
  p.r_min = 20;
  p.r_max = 200;
  p.r_steps = 10;
  p.out = scratch("euclid.csv").string();
  const auto rep = run_euclid(p);
  CHECK(rep.all_passed());
  const std::string csv = slurp(p.out);
  CHECK(starts_with(csv, "R,exact_count,smoothed_count,ball_volume,error,epsilon\r\n"));
  REQUIRE(rep.records.rows.size() == 10);
  for (const auto& row : rep.records.rows) CHECK(std::stoull(row[1]) == brute_count2(std::stod(row[0])));
  CHECK(report::to_csv(rep.records) == csv);
  // identical inputs give identical bytes
  run_euclid(p);
  CHECK(slurp(p.out) == csv);
}

TEST_CASE("euclid parameter errors name the field") {
  EuclidParams p;
  p.r_max = 60;
  p.r_steps = 2;
  p.n = 5;
  CHECK(starts_with(config_error([&] { run_euclid(p); }), "n:"));
  p.n = 2;
  p.epsilon = "wide";
  CHECK(starts_with(config_error([&] { run_euclid(p); }), "epsilon:"));
  p.epsilon = "80";
  CHECK(starts_with(config_error([&] { run_euclid(p); }), "epsilon:"));
  p.epsilon = "auto";
  p.r_min = -5;
  CHECK(starts_with(config_error([&] { run_euclid(p); }), "r-min:"));
  p.r_min = 100;
  CHECK(starts_with(config_error([&] { run_euclid(p); }), "r-max:"));
}

TEST_CASE("budget override from the environment") {
  CHECK(budget_from_env(7) == 7);
  EuclidParams p;
  p.r_min = 20;
  p.r_max = 40;
  p.r_steps = 2;
  {
    EnvGuard g("10");
    CHECK(budget_from_env(7) == 10);
    CHECK_THROWS_AS(run_euclid(p), BudgetExceeded);
  }
  {
    EnvGuard g("lots");
    CHECK(starts_with(config_error([] { budget_from_env(1); }), "WAVECOUNT_BUDGET:"));
  }
  {
    EnvGuard g("0");
    CHECK(starts_with(config_error([] { budget_from_env(1); }), "WAVECOUNT_BUDGET:"));
  }
  {
    EnvGuard g("5000000");
    CHECK(run_euclid(p).config["budget"] == 5000000);
  }
}

TEST_CASE("hyperbolic command") {
  HyperbolicParams p;
  p.r_min = 1;
  p.r_max = 6;
  p.r_steps = 6;
  const auto rep = run_hyperbolic(p);
  CHECK(rep.all_passed());
  CHECK(rep.records.columns == std::vector<std::string>{"R", "count", "main_term", "relative_error"});
  CHECK(rep.records.rows.size() == 6);
  p.y = 0;
  CHECK(starts_with(config_error([&] { run_hyperbolic(p); }), "y:"));
}

TEST_CASE("triple command") {
  TripleParams p;
  p.height = 1;
  p.out = scratch("gamma.json").string();
  const auto rep = run_triple(p);
  CHECK(rep.all_passed());
  const auto j = Json::parse(slurp(p.out));
  CHECK(j["precision_bits"] == 128);
  CHECK(j["elements"].size() == 4);
  CHECK(j["elements"][0]["embeddings"].size() == 3);
  p.precision = 10;
  CHECK(starts_with(config_error([&] { run_triple(p); }), "precision:"));
}

TEST_CASE("cone command") {
  ConeParams p;
  p.family = true;
  auto rep = run_cone(p);
  CHECK(rep.all_passed());
  p.family = false;
  p.input = scratch("cone.json").string();
  put(p.input, R"({"root_system": "A1", "sigma": [[-1]], "label": "sl2"})");
  p.out = scratch("cone_out.json").string();
  rep = run_cone(p);
  CHECK(rep.all_passed());
  const auto j = Json::parse(slurp(p.out));
  CHECK(j.dump().find("\"S\"") != std::string::npos);
  put(p.input, R"({"root_system": "Z9", "sigma": [[-1]]})");
  CHECK(starts_with(config_error([&] { run_cone(p); }), "root_system:"));
  put(p.input, R"({"root_system": "A1"})");
  CHECK(starts_with(config_error([&] { run_cone(p); }), "sigma:"));
  p.family = true;
  CHECK(starts_with(config_error([&] { run_cone(p); }), "input:"));
}

TEST_CASE("ct command") {
  CtParams p;
  p.out = scratch("ct.json").string();
  const auto rep = run_ct(p);
  CHECK(rep.all_passed());
  const auto j = Json::parse(slurp(p.out));
  for (const char* key : {"eigenvalues", "u", "exponents", "coefficients", "fitted_decay", "hypothesis_b"})
    CHECK(j.contains(key));
  p.p = 1.5;
  CHECK(starts_with(config_error([&] { run_ct(p); }), "p:"));
  p.p = 2.5;
  p.remainder = "sine";
  CHECK(starts_with(config_error([&] { run_ct(p); }), "remainder:"));
}

TEST_CASE("ct batches: seeds are mandatory and runs are reproducible") {
  CtParams p;
  p.batch = scratch("batch.json").string();
  put(p.batch, R"({"random": {"count": 3}})");
  CHECK(starts_with(config_error([&] { run_ct(p); }), "batch.random.seed:"));
  put(p.batch, R"({"systems": [{"c": -5}, {"c": 0, "r": 0.8}], "random": {"count": 3, "seed": 11}})");
  p.out = scratch("batch_a.json").string();
  const auto a = run_ct(p);
  CHECK(a.all_passed());
  CHECK(a.records.rows.size() == 5);
  const std::string first = slurp(p.out);
  p.out = scratch("batch_b.json").string();
  run_ct(p);
  CHECK(slurp(p.out) == first);
  put(p.batch, R"({"systems": [{"c": "x"}]})");
  CHECK(starts_with(config_error([&] { run_ct(p); }), "batch.systems[0].c:"));
}

TEST_CASE("mostow command") {
  MostowParams p;
  p.algebra = "heisenberg";
  CHECK(starts_with(config_error([&] { run_mostow(p); }), "seed:"));
  p.seed = 3;
  p.samples = 20;
  auto rep = run_mostow(p);
  CHECK(rep.all_passed());
  CHECK(rep.details["recovered"] == 20);
  p.algebra = "filiform5";
  CHECK(run_mostow(p).details["nilpotency_degree"] == 4);
  p.algebra = "lie";
  CHECK(starts_with(config_error([&] { run_mostow(p); }), "algebra:"));
  p.algebra.clear();
  p.input = scratch("alg.json").string();
  put(p.input, R"({"dim": 2, "brackets": []})");
  CHECK(starts_with(config_error([&] { run_mostow(p); }), "input:"));
}

TEST_CASE("report command renders saved runs") {
  HyperbolicParams hp;
  hp.r_min = 2;
  hp.r_max = 5;
  hp.r_steps = 4;
  const auto rep = run_hyperbolic(hp);
  const fs::path saved = scratch("hyp_report.json");
  put(saved, report::to_json(rep).dump(2));
  ReportParams p;
  p.input = saved.string();
  std::string out;
  p.format = "csv";
  run_report(p, out);
  CHECK(out == report::to_csv(rep.records));
  p.format = "md";
  run_report(p, out);
  CHECK(out.find("trend") != std::string::npos);
  p.format = "json";
  run_report(p, out);
  CHECK(Json::parse(out) == Json::parse(report::to_json(rep).dump()));
  p.format = "pdf";
  CHECK(starts_with(config_error([&] { run_report(p, out); }), "format:"));
  p.format = "md";
  p.input = scratch("missing.json").string();
  fs::remove(p.input);
  CHECK_THROWS(run_report(p, out));
}

}  // TEST_SUITE
