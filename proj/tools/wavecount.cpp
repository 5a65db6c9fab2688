// wavecount: one subcommand per pipeline. Exit 0 on success, 2 when an invariant
// fails, 1 on any other error.

#include "commands.hpp"

#include "wavecount/errors.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <iostream>

namespace {

using namespace wavecount;
using namespace wavecount::cli;

std::string scalar_text(const Json& v, const std::string& field) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_integer() || v.is_number_unsigned()) return v.dump();
  if (v.is_number_float()) return report::format_double(v.get<double>());
  throw ConfigError(field, "expected a scalar value");
}

// Values from the config file replace whatever the command line set.
void apply_config(CLI::App* sub, const Json& values, const std::string& prefix) {
  for (const auto& [key, v] : values.items()) {
    std::string name = key;
    for (auto& ch : name)
      if (ch == '_') ch = '-';
    CLI::Option* opt = nullptr;
    try {
      opt = sub->get_option("--" + name);
    } catch (const CLI::OptionNotFound&) {
      throw ConfigError(prefix + key, "unknown option for '" + sub->get_name() + "'");
    }
    opt->clear();
    opt->add_result(scalar_text(v, prefix + key));
    try {
      opt->run_callback();
    } catch (const CLI::Error& e) {
      throw ConfigError(prefix + key, e.what());
    }
  }
}

bool is_subcommand(const std::string& key) {
  for (const char* n : {"euclid", "hyperbolic", "triple", "cone", "ct", "mostow", "report"})
    if (key == n) return true;
  return false;
}

void load_config(const std::string& path, CLI::App* sub) {
  const Json doc = [&] {
    try {
      return Json::parse(read_file(path, "config"));
    } catch (const nlohmann::json::parse_error& e) {
      throw ConfigError("config", std::string("malformed JSON (") + e.what() + ")");
    }
  }();
  if (!doc.is_object()) throw ConfigError("config", "expected a JSON object");
  Json flat = Json::object();
  for (const auto& [key, v] : doc.items()) {
    if (is_subcommand(key)) {
      if (!v.is_object()) throw ConfigError(key, "expected an object of options");
      if (key == sub->get_name()) apply_config(sub, v, key + ".");
    } else {
      flat[key] = v;
    }
  }
  apply_config(sub, flat, "");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lattice point counting experiments"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string config_path, report_path;
  bool quiet = false, timing = false;
  app.add_option("--config", config_path, "JSON file whose values override flags");
  app.add_option("--report", report_path, "write the run report as JSON");
  app.add_flag("--timing", timing, "include elapsed time in the report");
  app.add_flag("-q,--quiet", quiet, "no summary on stdout");

  EuclidParams eu;
  auto* euclid = app.add_subcommand("euclid", "lattice points of Z^n in balls");
  euclid->add_option("--n", eu.n, "dimension");
  euclid->add_option("--r-min", eu.r_min);
  euclid->add_option("--r-max", eu.r_max);
  euclid->add_option("--r-steps", eu.r_steps);
  euclid->add_option("--epsilon", eu.epsilon, "mollifier width or 'auto'");
  euclid->add_option("--budget", eu.budget, "candidate point budget");
  euclid->add_option("--out", eu.out, "CSV output");

  HyperbolicParams hy;
  auto* hyperbolic = app.add_subcommand("hyperbolic", "orbit of PSL(2,Z) in hyperbolic balls");
  hyperbolic->add_option("--r-min", hy.r_min);
  hyperbolic->add_option("--r-max", hy.r_max);
  hyperbolic->add_option("--r-steps", hy.r_steps);
  hyperbolic->add_option("--x", hy.x);
  hyperbolic->add_option("--y", hy.y);
  hyperbolic->add_option("--budget", hy.budget, "bound on 2 cosh R");
  hyperbolic->add_option("--out", hy.out, "CSV output");

  TripleParams tr;
  auto* triple = app.add_subcommand("triple", "integral points of the form group and their embeddings");
  triple->add_option("--height", tr.height);
  triple->add_option("--precision", tr.precision, "bits");
  triple->add_option("--budget", tr.budget);
  triple->add_option("--out", tr.out, "JSON output");

  ConeParams co;
  auto* cone = app.add_subcommand("cone", "compression cone, spherical roots and faces");
  cone->add_option("--input", co.input, "root data JSON");
  cone->add_flag("--family", co.family, "run the built-in symmetric pairs");
  cone->add_option("--delta", co.delta);
  cone->add_option("--out", co.out, "JSON output");

  CtParams ctp;
  std::uint64_t ct_seed = 0;
  auto* ct = app.add_subcommand("ct", "constant term of a companion system");
  ct->add_option("--c", ctp.c);
  ct->add_option("--c-imag", ctp.c_imag);
  ct->add_option("--r", ctp.r);
  ct->add_option("--c0", ctp.c0);
  ct->add_option("--remainder", ctp.remainder, "exp or zero");
  ct->add_option("--w", ctp.w);
  ct->add_option("--tmax", ctp.tmax);
  ct->add_option("--step", ctp.step);
  ct->add_option("--p", ctp.p);
  ct->add_option("--p-prime", ctp.p_prime);
  ct->add_option("--k", ctp.k);
  auto* ct_seed_opt = ct->add_option("--seed", ct_seed);
  ct->add_option("--batch", ctp.batch, "batch JSON");
  ct->add_option("--out", ctp.out, "JSON output");

  MostowParams mo;
  std::uint64_t mo_seed = 0;
  auto* mostow = app.add_subcommand("mostow", "nilpotent exp decomposition check");
  mostow->add_option("--input", mo.input, "algebra JSON");
  mostow->add_option("--algebra", mo.algebra, "heisenberg, filiform<N> or abelian<N>");
  mostow->add_option("--samples", mo.samples);
  auto* mo_seed_opt = mostow->add_option("--seed", mo_seed);
  mostow->add_option("--out", mo.out, "JSON output");

  ReportParams rp;
  auto* rep_cmd = app.add_subcommand("report", "render a saved report");
  rep_cmd->add_option("--input", rp.input);
  rep_cmd->add_option("--format", rp.format, "md, csv or json");
  rep_cmd->add_option("--out", rp.out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  try {
    CLI::App* sub = app.get_subcommands().front();
    if (!config_path.empty()) load_config(config_path, sub);
    if (ct_seed_opt->count()) ctp.seed = ct_seed;
    if (mo_seed_opt->count()) mo.seed = mo_seed;

    const auto start = std::chrono::steady_clock::now();
    RunReport rep;
    std::string rendered;
    if (sub == euclid) rep = run_euclid(eu);
    else if (sub == hyperbolic) rep = run_hyperbolic(hy);
    else if (sub == triple) rep = run_triple(tr);
    else if (sub == cone) rep = run_cone(co);
    else if (sub == ct) rep = run_ct(ctp);
    else if (sub == mostow) rep = run_mostow(mo);
    else rep = run_report(rp, rendered);
    rep.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();

    if (sub == rep_cmd) {
      if (rp.out.empty()) std::cout << rendered;
      return 0;
    }
    if (!report_path.empty()) write_file(report_path, report::to_json(rep, timing).dump(2) + "\n");
    if (!quiet) {
      for (const auto& [name, v] : rep.fits) std::cout << name << " = " << report::format_double(v) << "\n";
      for (const auto& [name, ok] : rep.checks) std::cout << (ok ? "PASS " : "FAIL ") << name << "\n";
    }
    return rep.all_passed() ? 0 : 2;
  } catch (const InvariantViolation& e) {
    std::cerr << "invariant violated: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
