#pragma once

// Subcommand pipelines behind the wavecount binary. Each run_* validates its parameters,
// writes its artifacts and returns the run report.

#include "wavecount/report.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace wavecount::cli {

using report::Json;
using report::RunReport;

/// A parameter failed validation; the message starts with the field name.
struct ConfigError : std::invalid_argument {
  ConfigError(const std::string& field, const std::string& what)
      : std::invalid_argument(field + ": " + what) {}
};

/// WAVECOUNT_BUDGET when set, else the fallback. Throws ConfigError on a malformed value.
std::uint64_t budget_from_env(std::uint64_t fallback);

struct EuclidParams {
  int n = 2;
  double r_min = 50;
  double r_max = 3000;
  int r_steps = 60;
  std::string epsilon = "auto";
  std::string out;
  std::uint64_t budget = 1'000'000'000ULL;
};
RunReport run_euclid(const EuclidParams& p);

struct HyperbolicParams {
  double r_min = 4;
  double r_max = 10;
  int r_steps = 13;
  double x = 0;
  double y = 1;
  std::string out;
  std::uint64_t budget = 1'000'000ULL;
};
RunReport run_hyperbolic(const HyperbolicParams& p);

struct TripleParams {
  int height = 3;
  unsigned precision = 128;
  std::string out;
  std::uint64_t budget = 100'000'000ULL;
};
RunReport run_triple(const TripleParams& p);

struct ConeParams {
  std::string input;
  bool family = false;
  std::string delta = "1/10";
  std::string out;
};
RunReport run_cone(const ConeParams& p);

struct CtParams {
  double c = 3;
  double c_imag = 0;
  double r = 1;
  double c0 = 2;
  std::string remainder = "exp";
  double w = 1;
  double tmax = 20;
  double step = 0.05;
  double p = 2.5;
  double p_prime = 2;
  int k = 2;
  std::optional<std::uint64_t> seed;
  std::string batch;
  std::string out;
};
RunReport run_ct(const CtParams& p);

struct MostowParams {
  std::string input;
  std::string algebra;
  int samples = 100;
  std::optional<std::uint64_t> seed;
  std::string out;
};
RunReport run_mostow(const MostowParams& p);

struct ReportParams {
  std::string input;
  std::string format = "md";
  std::string out;
};
/// Renders a saved report; returns it unchanged.
RunReport run_report(const ReportParams& p, std::string& rendered);

std::string read_file(const std::string& path, const std::string& field);
void write_file(const std::string& path, const std::string& content);

}  // namespace wavecount::cli
