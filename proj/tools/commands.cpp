#include "commands.hpp"

#include "wavecount/arithmetic_lattice.hpp"
#include "wavecount/constant_term.hpp"
#include "wavecount/euclid_count.hpp"
#include "wavecount/hyperbolic_count.hpp"
#include "wavecount/model_norms.hpp"
#include "wavecount/mostow_nilpotent.hpp"
#include "wavecount/spherical_structure.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>

namespace wavecount::cli {

using report::format_double;
using report::Table;

namespace {

// exponent fits need this many radii to be meaningful
constexpr std::size_t kMinFitRecords = 10;

std::string str(double v) { return format_double(v); }

Json complex_json(ct::Complex z) { return Json::array({z.real(), z.imag()}); }

Json rational_json(const Rational& q) {
  if (q.get_den() == 1 && q.get_num().fits_slong_p()) return q.get_num().get_si();
  return to_string(q);
}

Json ratvec_json(const RatVec& v) {
  Json a = Json::array();
  for (const auto& q : v) a.push_back(rational_json(q));
  return a;
}

Json ratvecs_json(const std::vector<RatVec>& vs) {
  Json a = Json::array();
  for (const auto& v : vs) a.push_back(ratvec_json(v));
  return a;
}

Rational parse_rational_field(const Json& j, const std::string& field) {
  try {
    if (j.is_number_integer()) return Rational(j.get<long>());
    if (j.is_string()) return parse_rational(j.get<std::string>());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(field, e.what());
  }
  throw ConfigError(field, "expected an integer or a rational string");
}

RatVec parse_ratvec(const Json& j, const std::string& field, std::size_t dim) {
  if (!j.is_array()) throw ConfigError(field, "expected an array");
  RatVec v;
  for (std::size_t i = 0; i < j.size(); ++i) v.push_back(parse_rational_field(j[i], field + "[" + std::to_string(i) + "]"));
  if (dim && v.size() != dim) throw ConfigError(field, "expected " + std::to_string(dim) + " entries");
  return v;
}

std::vector<RatVec> parse_ratvecs(const Json& j, const std::string& field, std::size_t dim) {
  if (!j.is_array()) throw ConfigError(field, "expected an array of vectors");
  std::vector<RatVec> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(parse_ratvec(j[i], field + "[" + std::to_string(i) + "]", dim));
  return out;
}

Json parse_json(const std::string& text, const std::string& field) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(field, std::string("malformed JSON (") + e.what() + ")");
  }
}

std::vector<double> grid(double lo, double hi, int steps) {
  std::vector<double> out;
  if (steps == 1) return {lo};
  for (int i = 0; i < steps; ++i) out.push_back(lo + (hi - lo) * i / (steps - 1));
  return out;
}

void check_grid(double lo, double hi, int steps) {
  if (!(lo > 0) || !std::isfinite(lo)) throw ConfigError("r-min", "must be a positive number");
  if (!(hi >= lo) || !std::isfinite(hi)) throw ConfigError("r-max", "must be at least r-min");
  if (steps < 1) throw ConfigError("r-steps", "must be at least 1");
}

}  // namespace

std::uint64_t budget_from_env(std::uint64_t fallback) {
  const char* env = std::getenv("WAVECOUNT_BUDGET");
  if (!env || !*env) return fallback;
  const std::string s = env;
  if (s.find_first_not_of("0123456789") != std::string::npos)
    throw ConfigError("WAVECOUNT_BUDGET", "expected a positive integer, got '" + s + "'");
  try {
    const auto v = std::stoull(s);
    if (v == 0) throw ConfigError("WAVECOUNT_BUDGET", "must be positive");
    return v;
  } catch (const std::out_of_range&) {
    throw ConfigError("WAVECOUNT_BUDGET", "value out of range");
  }
}

std::string read_file(const std::string& path, const std::string& field) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(field, "cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& content) {
  if (path.empty()) return;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << content;
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

// euclid

RunReport run_euclid(const EuclidParams& p) {
  if (p.n < 1 || p.n > 4) throw ConfigError("n", "dimension must be between 1 and 4");
  check_grid(p.r_min, p.r_max, p.r_steps);
  std::optional<double> eps;
  if (p.epsilon != "auto") {
    try {
      std::size_t used = 0;
      eps = std::stod(p.epsilon, &used);
      if (used != p.epsilon.size()) throw std::invalid_argument("trailing characters");
    } catch (const std::exception&) {
      throw ConfigError("epsilon", "expected 'auto' or a positive number");
    }
    if (!(*eps > 0) || *eps >= p.r_min) throw ConfigError("epsilon", "must lie in (0, r-min)");
  }
  const std::uint64_t budget = budget_from_env(p.budget);

  RunReport rep;
  rep.command = "euclid";
  rep.config = {{"n", p.n},           {"r_min", p.r_min},     {"r_max", p.r_max}, {"r_steps", p.r_steps},
                {"epsilon", p.epsilon}, {"budget", budget}};
  rep.records.columns = {"R", "exact_count", "smoothed_count", "ball_volume", "error", "epsilon"};
  const auto lattice = euclid::IntegerLattice::standard(p.n);
  std::vector<euclid::CountRecord> records;
  for (double R : grid(p.r_min, p.r_max, p.r_steps)) {
    const double e = eps ? *eps : euclid::optimal_epsilon(p.n, R);
    const euclid::RadialMollifier mol(p.n, e);
    const auto exact = euclid::count_exact(lattice, R, budget);
    const double smooth = euclid::mollified_count(lattice, R, mol, budget);
    const auto rec = euclid::make_record(p.n, R, exact, smooth, e);
    records.push_back(rec);
    rep.records.add_row({str(rec.R), std::to_string(rec.exact_count), str(rec.smoothed_count), str(rec.ball_volume),
                         str(rec.error), str(rec.epsilon)});
  }
  if (records.size() >= kMinFitRecords) {
    const double alpha = euclid::error_exponent_fit(records);
    rep.fits.emplace_back("alpha", alpha);
    rep.checks.emplace_back("alpha_finite", std::isfinite(alpha));
  }
  const auto [lo, hi] = euclid::error_term_exponents(p.n);
  rep.details = {{"balanced_exponent", to_string(euclid::balanced_error_exponent(p.n))},
                 {"bookkeeping_exponents", {to_string(lo), to_string(hi)}}};
  write_file(p.out, report::to_csv(rep.records));
  return rep;
}

// hyperbolic

RunReport run_hyperbolic(const HyperbolicParams& p) {
  check_grid(p.r_min, p.r_max, p.r_steps);
  if (!(p.y > 0)) throw ConfigError("y", "base point must lie in the upper half plane");
  const auto budget = static_cast<double>(budget_from_env(p.budget));
  const auto z = hyperbolic::UpperHalfPoint::make(p.x, p.y);

  RunReport rep;
  rep.command = "hyperbolic";
  rep.config = {{"r_min", p.r_min}, {"r_max", p.r_max}, {"r_steps", p.r_steps},
                {"x", p.x},         {"y", p.y},         {"budget", budget}};
  rep.records.columns = {"R", "count", "main_term", "relative_error"};
  std::vector<hyperbolic::HypCountRecord> records;
  for (double R : grid(p.r_min, p.r_max, p.r_steps)) {
    const auto rec = hyperbolic::count_in_ball(z, R, budget);
    records.push_back(rec);
    rep.records.add_row({str(rec.R), std::to_string(rec.count), str(rec.main_term), str(rec.relative_error)});
  }
  if (records.size() >= kMinFitRecords) rep.fits.emplace_back("error_exponent", hyperbolic::error_exponent_fit(records));
  const auto [ball, cosh_term] = hyperbolic::selberg_cross_check(p.r_max);
  rep.fits.emplace_back("selberg_ratio", ball / cosh_term);
  rep.checks.emplace_back("trace_identity", hyperbolic::trace_identity_deviation() < 1e-9);
  write_file(p.out, report::to_csv(rep.records));
  return rep;
}

// triple

RunReport run_triple(const TripleParams& p) {
  if (p.height < 1) throw ConfigError("height", "must be a positive integer");
  if (p.precision < 53 || p.precision > 4096) throw ConfigError("precision", "must lie in [53, 4096] bits");
  const std::uint64_t budget = budget_from_env(p.budget);

  RunReport rep;
  rep.command = "triple";
  rep.config = {{"height", p.height}, {"precision", p.precision}, {"budget", budget}};
  rep.records.columns = {"index", "entries", "form_defect"};
  const auto elements = arithmetic::enumerate_gamma0(p.height, budget);
  Json doc;
  doc["precision_bits"] = p.precision;
  doc["height"] = p.height;
  doc["embedding_order"] = "descending real root";
  Json list = Json::array();
  bool in_group = true;
  double worst = 0;
  for (std::size_t i = 0; i < elements.size(); ++i) {
    const auto& g = elements[i];
    in_group = in_group && arithmetic::is_in_group(g);
    Json entries = Json::array();
    std::string compact;
    for (const auto& e : g.entries()) {
      Json coords = Json::array();
      for (const auto& q : e.coords()) coords.push_back(rational_json(q));
      entries.push_back(coords);
      compact += (compact.empty() ? "" : " ") + e.to_string();
    }
    const auto pt = arithmetic::triple_embed(g, p.precision);
    const double defect = arithmetic::embedded_form_defect(pt);
    worst = std::max(worst, defect);
    Json emb = Json::array();
    for (const auto& comp : pt.components) {
      Json m = Json::array();
      for (const auto& v : comp) m.push_back(to_decimal(v, p.precision));
      emb.push_back(m);
    }
    list.push_back({{"entries", entries}, {"embeddings", emb}});
    rep.records.add_row({std::to_string(i), compact, str(defect)});
  }
  doc["elements"] = list;
  rep.fits.emplace_back("elements", static_cast<double>(elements.size()));
  rep.fits.emplace_back("max_form_defect", worst);
  rep.checks.emplace_back("form_preserved", in_group);
  rep.checks.emplace_back("embedded_form_defect", worst < 1e-9);
  rep.checks.emplace_back("sigma_generator", verify_sigma_generator());
  write_file(p.out, doc.dump(2) + "\n");
  return rep;
}

// cone

namespace {

spherical::SymmetricPairInput parse_pair(const Json& j) {
  using namespace spherical;
  if (!j.is_object()) throw ConfigError("input", "expected a JSON object");
  if (j.contains("root_system")) {
    if (!j["root_system"].is_string()) throw ConfigError("root_system", "expected a name such as \"A2\"");
    RootSystem rs;
    try {
      rs = root_system(j["root_system"].get<std::string>());
    } catch (const std::invalid_argument& e) {
      throw ConfigError("root_system", e.what());
    }
    const std::size_t n = rs.cartan.rows();
    if (!j.contains("sigma")) throw ConfigError("sigma", "required with root_system");
    const auto rows = parse_ratvecs(j["sigma"], "sigma", n);
    if (rows.size() != n) throw ConfigError("sigma", "expected " + std::to_string(n) + " rows");
    try {
      return symmetric_pair_input(rs, RatMatrix::from_rows(rows, n), j.value("label", rs.name));
    } catch (const std::invalid_argument& e) {
      throw ConfigError("sigma", e.what());
    }
  }
  SymmetricPairInput in;
  in.label = j.value("label", std::string("input"));
  if (!j.contains("roots")) throw ConfigError("roots", "required");
  in.roots.roots = parse_ratvecs(j["roots"], "roots", 0);
  if (in.roots.roots.empty()) throw ConfigError("roots", "must not be empty");
  const std::size_t dim = in.roots.roots.front().size();
  in.roots.dim_a = dim;
  in.roots.roots = parse_ratvecs(j["roots"], "roots", dim);
  auto indices = [&](const char* key) {
    std::vector<std::size_t> out;
    if (!j.contains(key)) return out;
    if (!j[key].is_array()) throw ConfigError(key, "expected an array of root indices");
    for (const auto& v : j[key]) {
      if (!v.is_number_unsigned() || v.get<std::size_t>() >= in.roots.roots.size())
        throw ConfigError(key, "index out of range");
      out.push_back(v.get<std::size_t>());
    }
    return out;
  };
  in.roots.positive = indices("positive");
  if (in.roots.positive.empty()) throw ConfigError("positive", "required");
  in.roots.sigma_u = indices("sigma_u");
  if (j.contains("a_H")) in.roots.a_H = parse_ratvecs(j["a_H"], "a_H", dim);
  if (j.contains("gram")) {
    const auto rows = parse_ratvecs(j["gram"], "gram", dim);
    if (rows.size() != dim) throw ConfigError("gram", "expected a square matrix");
    in.roots.gram = RatMatrix::from_rows(rows, dim);
  }
  try {
    in.roots.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError("roots", e.what());
  }
  if (j.contains("flags")) {
    if (!j["flags"].is_array()) throw ConfigError("flags", "expected an array");
    for (std::size_t i = 0; i < j["flags"].size(); ++i) {
      const auto& f = j["flags"][i];
      const std::string field = "flags[" + std::to_string(i) + "]";
      if (!f.is_object() || !f.contains("alpha")) throw ConfigError(field, "expected {\"alpha\": [...], \"beta\": [...] or null}");
      TFlag t;
      t.alpha = parse_ratvec(f["alpha"], field + ".alpha", dim);
      if (f.contains("beta") && !f["beta"].is_null()) t.beta = parse_ratvec(f["beta"], field + ".beta", dim);
      in.flags.pairs.push_back(std::move(t));
    }
  }
  try {
    in.flags.validate(in.roots);
  } catch (const std::invalid_argument& e) {
    throw ConfigError("flags", e.what());
  }
  return in;
}

Json cone_json(const spherical::SymmetricPairInput& in, const Rational& delta, bool& monoid_ok, bool& inclusion_ok,
               bool& wavefront) {
  using namespace spherical;
  const CompressionCone cone = compression_cone(in.roots, in.flags);
  const WavefrontReport wf = wavefront_report(in.roots, cone);
  monoid_ok = cone.S.empty() || in_monoid(cone.S, cone.M);
  inclusion_ok = wf.inclusion;
  wavefront = wf.wavefront;
  const ConeGenerators gens = cone.generators();
  Json j;
  j["label"] = in.label;
  j["dim_a"] = cone.dim_a;
  j["dim_a_Z"] = cone.dim_a_Z();
  j["a_H"] = ratvecs_json(cone.a_H);
  j["M"] = ratvecs_json(cone.M);
  j["S"] = ratvecs_json(cone.S);
  j["inequalities"] = ratvecs_json(cone.inequalities());
  j["rays"] = ratvecs_json(gens.rays);
  j["lineality"] = ratvecs_json(gens.lineality);
  j["facets"] = cone.facets();
  j["monoid_membership"] = monoid_ok;
  j["wavefront"] = {{"wavefront", wf.wavefront}, {"inclusion", wf.inclusion}, {"cone_is_full", wf.cone_is_full}};
  if (!cone.S.empty() && cone.S.size() == cone.dim_a_Z() && cone.S.size() <= 16) {
    const FaceDecomposition fd = face_decomposition(cone, delta);
    Json regions = Json::array();
    for (const auto& r : fd.regions) {
      Json I = Json::array();
      for (std::size_t t = 0; t < fd.rank(); ++t)
        if (r.I >> t & 1U) I.push_back(t);
      regions.push_back({{"I", I}, {"eta", to_string(r.eta)}, {"witnesses", r.witnesses}, {"canonical", false}});
    }
    j["face_decomposition"] = {{"delta", to_string(delta)}, {"dual_basis", ratvecs_json(fd.dual_basis())}, {"regions", regions}};
  } else {
    j["face_decomposition"] = nullptr;
  }
  return j;
}

}  // namespace

RunReport run_cone(const ConeParams& p) {
  if (p.input.empty() == !p.family) throw ConfigError("input", "give exactly one of --input or --family");
  Rational delta;
  try {
    delta = parse_rational(p.delta);
  } catch (const std::invalid_argument&) {
    throw ConfigError("delta", "expected a positive rational such as 1/10");
  }
  if (delta <= 0) throw ConfigError("delta", "must be positive");

  std::vector<spherical::SymmetricPairInput> inputs;
  if (p.family) {
    inputs = spherical::symmetric_pair_family();
  } else {
    inputs.push_back(parse_pair(parse_json(read_file(p.input, "input"), "input")));
  }
  RunReport rep;
  rep.command = "cone";
  rep.config = {{"input", p.input}, {"family", p.family}, {"delta", to_string(delta)}};
  rep.records.columns = {"label", "dim_a", "spherical_roots", "wavefront", "inclusion", "monoid_membership"};
  Json all = Json::array();
  bool monoid_all = true, inclusion_all = true, wavefront_all = true;
  for (const auto& in : inputs) {
    bool monoid = false, inclusion = false, wf = false;
    Json j = cone_json(in, delta, monoid, inclusion, wf);
    monoid_all = monoid_all && monoid;
    inclusion_all = inclusion_all && inclusion;
    wavefront_all = wavefront_all && wf;
    rep.records.add_row({in.label, std::to_string(in.roots.dim_a), std::to_string(j["S"].size()), wf ? "true" : "false",
                         inclusion ? "true" : "false", monoid ? "true" : "false"});
    all.push_back(std::move(j));
  }
  rep.checks.emplace_back("monoid_membership", monoid_all);
  rep.checks.emplace_back("inclusion", inclusion_all);
  if (p.family) rep.checks.emplace_back("symmetric_pairs_wavefront", wavefront_all);
  const Json doc = p.family ? all : all.front();
  rep.details = {{"count", inputs.size()}};
  write_file(p.out, doc.dump(2) + "\n");
  return rep;
}

// ct

namespace {

struct CtCase {
  double c = 0, c_imag = 0, r = 0, c0 = 0, w = 0, tmax = 0;
};

Json ct_case(const CtCase& cs, const CtParams& p, bool& decay_ok, bool& forced_ok, double& decay, double& ratio) {
  const ct::Complex c(cs.c, cs.c_imag);
  ct::CVector seed(2);
  seed << 1, 0.5;
  const ct::CertifiedSystem sys = ct::certified_rank_one(c, cs.r, cs.c0, cs.w, seed);
  const ct::ConstantTermFn fn = ct::constant_term(sys.system, sys.phi0);
  const ct::Trajectory tr = ct::stable_trajectory(sys.system, fn, cs.tmax, p.step);
  decay = ct::decay_verify(tr, fn, cs.r, cs.c0);
  const double target = cs.r + cs.c0 / 2 - 0.05;
  decay_ok = decay >= target;
  double forced = 0;
  for (auto i : fn.forced_zero(cs.r)) forced = std::max(forced, fn.coefficient_size(i));
  forced_ok = forced < 1e-9;

  Json j;
  j["c"] = complex_json(c);
  j["r"] = cs.r;
  j["c0"] = cs.c0;
  j["w"] = cs.w;
  j["remainder"] = cs.w == 0 ? "zero" : "exp";
  const auto [lp, lm] = ct::rank_one_eigenvalues(c);
  j["eigenvalues"] = Json::array({complex_json(lp), complex_json(lm)});
  Json u = Json::array();
  for (Eigen::Index i = 0; i < fn.u.size(); ++i) u.push_back(complex_json(fn.u(i)));
  j["u"] = u;
  Json ex = Json::array(), co = Json::array();
  for (std::size_t i = 0; i < fn.exponents.size(); ++i) {
    ex.push_back(complex_json(fn.exponents[i]));
    Json ci = Json::array();
    for (const auto& v : fn.coeffs[i]) ci.push_back(complex_json(v));
    co.push_back(ci);
  }
  j["exponents"] = ex;
  j["coefficients"] = co;
  j["delta"] = fn.delta;
  j["fitted_decay"] = std::isfinite(decay) ? Json(decay) : Json("inf");
  j["decay_target"] = target;
  j["forced_coefficient_max"] = forced;

  // The model norm is finite only when the slowest surviving exponent beats 2/p.
  const ct::ConstantTermFn kept = fn.pruned(cs.r, 1e-9 * std::max(1.0, fn.u.norm()));
  double rate = cs.r + cs.c0 / 2;
  for (std::size_t i = 0; i < kept.exponents.size(); ++i)
    if (kept.coefficient_size(i) > 0) rate = std::min(rate, kept.exponents[i].real());
  if (!(p.p * rate > 2)) {
    ratio = std::nan("");
    j["hypothesis_b"] = {{"applicable", false}, {"slowest_rate", rate}};
    return j;
  }
  const ct::HypothesisBReport hb =
      ct::hypothesis_b_pipeline(sys.system, sys.phi0, p.p, p.p_prime, p.k, std::abs(c));
  ratio = hb.ratio;
  j["hypothesis_b"] = {{"applicable", true}, {"slowest_rate", rate}, {"p", hb.p}, {"p_prime", hb.p_prime},
                       {"k", hb.k}, {"pi_abs", hb.pi_abs}, {"delta", hb.delta}, {"l", hb.l}, {"R", hb.R},
                       {"S1", hb.S1}, {"S2", hb.S2}, {"S3", hb.S3}, {"norm_p", hb.norm_p}, {"sup", hb.sup},
                       {"e2_constant", hb.e2_constant}, {"e3_constant", hb.e3_constant}, {"ratio", hb.ratio}};
  return j;
}

// Random draws keep only systems whose spectral gap and remainder certificate hold.
bool certifiable(const CtCase& cs) {
  ct::CVector seed(2);
  seed << 1, 0.5;
  try {
    const ct::CertifiedSystem sys = ct::certified_rank_one(ct::Complex(cs.c, cs.c_imag), cs.r, cs.c0, cs.w, seed);
    ct::constant_term(sys.system, sys.phi0);
    return true;
  } catch (const ct::GapViolation&) {
    return false;
  } catch (const ct::CertificateViolation&) {
    return false;
  }
}

void check_case(const CtCase& cs, const CtParams& p, const std::string& prefix) {
  if (!std::isfinite(cs.c) || !std::isfinite(cs.c_imag)) throw ConfigError(prefix + "c", "must be finite");
  if (!(cs.r > 0)) throw ConfigError(prefix + "r", "must be positive");
  if (!(cs.c0 > 0)) throw ConfigError(prefix + "c0", "must be positive");
  if (!std::isfinite(cs.w)) throw ConfigError(prefix + "w", "must be finite");
  const double need = 10 / (cs.r + cs.c0 / 2);
  if (!(cs.tmax >= need)) throw ConfigError(prefix + "tmax", "must be at least 10/(r + c0/2) = " + str(need));
  if (!(p.p_prime >= 1)) throw ConfigError("p-prime", "must be at least 1");
  if (!(p.p > p.p_prime)) throw ConfigError("p", "must exceed p-prime");
  if (1 / p.p_prime - 1 / p.p > cs.c0 / 2) throw ConfigError("p", "1/p' - 1/p must not exceed c0/2");
  if (p.k < 0) throw ConfigError("k", "must be nonnegative");
}

}  // namespace

RunReport run_ct(const CtParams& p) {
  if (p.remainder != "exp" && p.remainder != "zero") throw ConfigError("remainder", "expected 'exp' or 'zero'");
  if (!(p.step > 0)) throw ConfigError("step", "must be positive");
  std::vector<CtCase> cases;
  Json batch_doc;
  if (p.batch.empty()) {
    cases.push_back({p.c, p.c_imag, p.r, p.c0, p.remainder == "zero" ? 0.0 : p.w, p.tmax});
  } else {
    batch_doc = parse_json(read_file(p.batch, "batch"), "batch");
    if (!batch_doc.is_object()) throw ConfigError("batch", "expected a JSON object");
    auto num = [](const Json& j, const char* key, double fallback, const std::string& field) {
      if (!j.contains(key)) return fallback;
      if (!j[key].is_number()) throw ConfigError(field + key, "expected a number");
      return j[key].get<double>();
    };
    if (batch_doc.contains("systems")) {
      if (!batch_doc["systems"].is_array()) throw ConfigError("batch.systems", "expected an array");
      std::size_t i = 0;
      for (const auto& s : batch_doc["systems"]) {
        const std::string f = "batch.systems[" + std::to_string(i++) + "].";
        if (!s.is_object()) throw ConfigError(f.substr(0, f.size() - 1), "expected an object");
        cases.push_back({num(s, "c", p.c, f), num(s, "c_imag", 0, f), num(s, "r", p.r, f), num(s, "c0", p.c0, f),
                         num(s, "w", p.w, f), num(s, "tmax", p.tmax, f)});
      }
    }
    if (batch_doc.contains("random")) {
      const Json& rnd = batch_doc["random"];
      const std::string f = "batch.random.";
      if (!rnd.is_object()) throw ConfigError("batch.random", "expected an object");
      if (!rnd.contains("seed") || !rnd["seed"].is_number_unsigned())
        throw ConfigError(f + "seed", "required for randomized batches");
      const auto count = static_cast<long>(num(rnd, "count", 50, f));
      if (count < 1) throw ConfigError(f + "count", "must be positive");
      const double c_lo = num(rnd, "c_min", -10, f), c_hi = num(rnd, "c_max", 10, f);
      const double r_lo = num(rnd, "r_min", 0.5, f), r_hi = num(rnd, "r_max", 1.5, f);
      if (!(c_lo <= c_hi)) throw ConfigError(f + "c_max", "must be at least c_min");
      if (!(r_lo > 0 && r_lo <= r_hi)) throw ConfigError(f + "r_min", "need 0 < r_min <= r_max");
      std::mt19937_64 rng(rnd["seed"].get<std::uint64_t>());
      std::uniform_real_distribution<double> dc(c_lo, c_hi), dr(r_lo, r_hi);
      const double c0 = num(rnd, "c0", 2, f);
      long draws = 0;
      const std::size_t first = cases.size();
      while (static_cast<long>(cases.size() - first) < count) {
        if (++draws > 100 * count) throw ConfigError("batch.random", "too few certifiable systems in the sampled ranges");
        const double c = dc(rng), r = dr(rng);
        const CtCase cs{c, 0, r, c0, 1, std::max(p.tmax, 10 / (r + c0 / 2))};
        if (certifiable(cs)) cases.push_back(cs);
      }
    }
    if (cases.empty()) throw ConfigError("batch", "needs a 'systems' array or a 'random' block");
  }
  for (std::size_t i = 0; i < cases.size(); ++i)
    check_case(cases[i], p, p.batch.empty() ? "" : "batch[" + std::to_string(i) + "].");

  RunReport rep;
  rep.command = "ct";
  rep.config = {{"c", p.c},       {"c_imag", p.c_imag}, {"r", p.r},       {"c0", p.c0},          {"remainder", p.remainder},
                {"w", p.w},       {"tmax", p.tmax},     {"step", p.step}, {"p", p.p},            {"p_prime", p.p_prime},
                {"k", p.k},       {"batch", batch_doc.is_null() ? Json(nullptr) : batch_doc}};
  rep.records.columns = {"c", "c_imag", "r", "c0", "fitted_decay", "decay_target", "hypothesis_b_ratio"};
  Json out = Json::array();
  bool decay_all = true, forced_all = true;
  double worst_gap = HUGE_VAL, max_ratio = 0;
  for (const auto& cs : cases) {
    bool decay_ok = false, forced_ok = false;
    double decay = 0, ratio = 0;
    out.push_back(ct_case(cs, p, decay_ok, forced_ok, decay, ratio));
    decay_all = decay_all && decay_ok;
    forced_all = forced_all && forced_ok;
    worst_gap = std::min(worst_gap, decay - (cs.r + cs.c0 / 2));
    if (!std::isnan(ratio)) max_ratio = std::max(max_ratio, ratio);
    rep.records.add_row({str(cs.c), str(cs.c_imag), str(cs.r), str(cs.c0), str(decay), str(cs.r + cs.c0 / 2 - 0.05), str(ratio)});
  }
  rep.fits.emplace_back("min_decay_margin", worst_gap);
  rep.fits.emplace_back("max_hypothesis_b_ratio", max_ratio);
  rep.checks.emplace_back("decay_gain", decay_all);
  rep.checks.emplace_back("forced_coefficients_vanish", forced_all);
  write_file(p.out, (p.batch.empty() ? out.front() : out).dump(2) + "\n");
  return rep;
}

// mostow

RunReport run_mostow(const MostowParams& p) {
  if (p.input.empty() == p.algebra.empty()) throw ConfigError("input", "give exactly one of --input or --algebra");
  if (p.samples < 1) throw ConfigError("samples", "must be positive");
  if (!p.seed) throw ConfigError("seed", "required for randomized runs");
  mostow::NilpotentLieAlgebra u;
  mostow::Subspace u_H;
  if (!p.input.empty()) {
    const std::string text = read_file(p.input, "input");
    try {
      u = mostow::parse_algebra(text);
    } catch (const std::invalid_argument& e) {
      throw ConfigError("input", e.what());
    }
    const Json j = parse_json(text, "input");
    if (j.contains("u_H")) u_H = parse_ratvecs(j["u_H"], "u_H", u.dim);
  } else if (p.algebra == "heisenberg") {
    u = mostow::heisenberg();
  } else if (p.algebra.rfind("filiform", 0) == 0 || p.algebra.rfind("abelian", 0) == 0) {
    const bool fil = p.algebra[0] == 'f';
    const std::string tail = p.algebra.substr(fil ? 8 : 7);
    std::size_t dim = 4;
    if (!tail.empty()) {
      if (tail.find_first_not_of("0123456789") != std::string::npos) throw ConfigError("algebra", "unknown algebra '" + p.algebra + "'");
      dim = std::stoul(tail);
    }
    if (dim < (fil ? 3u : 1u) || dim > 12) throw ConfigError("algebra", "dimension out of range");
    u = fil ? mostow::filiform(dim) : mostow::abelian(dim);
  } else {
    throw ConfigError("algebra", "expected heisenberg, filiform<N> or abelian<N>");
  }
  if (u_H.empty() && p.input.empty()) {
    RatVec e(u.dim, Rational(0));
    e[0] = 1;
    u_H.push_back(e);
  }
  u.validate();
  if (!u.has_realization()) throw ConfigError("input", "a matrix realization is required for the decomposition check");

  RunReport rep;
  rep.command = "mostow";
  rep.config = {{"input", p.input}, {"algebra", p.algebra}, {"samples", p.samples}, {"seed", *p.seed},
                {"u_H", ratvecs_json(u_H)}};
  const auto series = mostow::lower_central_series(u);
  mostow::FiltrationData f;
  try {
    f = mostow::build_filtration(u, u_H);
  } catch (const std::invalid_argument& e) {
    throw ConfigError("u_H", e.what());
  }
  const auto check = mostow::exp_decomposition_check(u, u_H, static_cast<std::size_t>(p.samples), *p.seed);
  rep.records.columns = {"j", "dim_u_j", "dim_w_j", "dim_V_j"};
  Json terms = Json::array(), w = Json::array(), V = Json::array();
  for (std::size_t j = 0; j < f.w.size(); ++j) {
    rep.records.add_row({std::to_string(j), std::to_string(series.terms[j].size()), std::to_string(f.w[j].size()),
                         j < f.V.size() ? std::to_string(f.V[j].size()) : "0"});
    terms.push_back(ratvecs_json(series.terms[j]));
    w.push_back(ratvecs_json(f.w[j]));
    if (j < f.V.size()) V.push_back(ratvecs_json(f.V[j]));
  }
  rep.fits.emplace_back("nilpotency_degree", static_cast<double>(series.degree));
  rep.fits.emplace_back("recovered", static_cast<double>(check.recovered));
  rep.checks.emplace_back("direct_sum", f.u_H.size() + f.V_total.size() == u.dim);
  rep.checks.emplace_back("decomposition_exact", check.passed());
  rep.checks.emplace_back("factorized_count", [] {
    for (int R = 1; R <= 20; ++R)
      if (!euclid::factorized_count_check(R + 0.5).holds) return false;
    return true;
  }());
  const Json doc = {{"name", u.name},
                    {"dim", u.dim},
                    {"lower_central_series", terms},
                    {"nilpotency_degree", series.degree},
                    {"w", w},
                    {"V", V},
                    {"V_total", ratvecs_json(f.V_total)},
                    {"samples", check.samples},
                    {"recovered", check.recovered}};
  rep.details = doc;
  write_file(p.out, doc.dump(2) + "\n");
  return rep;
}

// report

RunReport run_report(const ReportParams& p, std::string& rendered) {
  if (p.input.empty()) throw ConfigError("input", "required");
  if (p.format != "md" && p.format != "csv" && p.format != "json")
    throw ConfigError("format", "expected md, csv or json");
  const RunReport rep = report::from_json(parse_json(read_file(p.input, "input"), "input"));
  if (p.format == "md") rendered = report::render_markdown(rep);
  else if (p.format == "csv") rendered = report::to_csv(rep.records);
  else rendered = report::to_json(rep).dump(2) + "\n";
  write_file(p.out, rendered);
  return rep;
}

}  // namespace wavecount::cli
