#include "wavecount/model_norms.hpp"

#include "wavecount/errors.hpp"
#include "wavecount/quadrature.hpp"
#include "wavecount/spherical_structure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace wavecount::ct {

namespace {

constexpr double kTailTol = 1e-10;
constexpr double kGridStep = 1.0 / 32;

// Composite Simpson on equally spaced samples; a trailing odd interval uses the trapezoid rule.
double simpson(const std::vector<double>& g, double h) {
  const std::size_t n = g.size();
  if (n < 2) return 0;
  const std::size_t even = (n - 1) % 2 == 0 ? n : n - 1;
  double s = 0;
  for (std::size_t i = 0; i + 2 < even; i += 2) s += g[i] + 4 * g[i + 1] + g[i + 2];
  s *= h / 3;
  if (even != n) s += 0.5 * h * (g[n - 2] + g[n - 1]);
  return s;
}

void check_exponent(double p) {
  if (!(p >= 1) || !std::isfinite(p)) throw std::invalid_argument("p must be a finite real >= 1");
}

}  // namespace

double model_tail(const DecayCertificate& cert, double p, double m, double T) {
  const double gamma = p * cert.rate - 2;
  if (!(gamma > 0)) return std::numeric_limits<double>::infinity();
  const double a = p * (m + cert.degree);
  const double head = std::exp(a * std::log1p(T) - gamma * T);
  if (a <= 0) return head / gamma;
  const double margin = gamma - a / (1 + T);
  if (!(margin > 0)) return std::numeric_limits<double>::infinity();
  return head / margin;
}

double model_cutoff(const DecayCertificate& cert, double p, double m, double tol) {
  check_exponent(p);
  if (!(p * cert.rate > 2))
    throw std::invalid_argument("decay certificate rate " + std::to_string(cert.rate) +
                                " gives no integrability margin for p = " + std::to_string(p));
  for (double T = 1; T <= 1 << 20; T *= 2)
    if (model_tail(cert, p, m, T) < tol) return T;
  throw std::invalid_argument("decay certificate: tail does not fall below tolerance");
}

ModelNorms model_norms_sampled(const std::vector<double>& abs_values, double step, double p, double m,
                               const DecayCertificate& cert) {
  check_exponent(p);
  if (abs_values.size() < 3) throw std::invalid_argument("need at least three samples");
  if (!(step > 0)) throw std::invalid_argument("step must be positive");
  ModelNorms out;
  out.cutoff = step * static_cast<double>(abs_values.size() - 1);
  out.tail_bound = model_tail(cert, p, m, out.cutoff);
  if (!(out.tail_bound < kTailTol))
    throw std::invalid_argument("grid ends at t = " + std::to_string(out.cutoff) +
                                " before the certified tail drops below 1e-10");
  for (double a : abs_values) {
    if (!(a >= 0) || !std::isfinite(a)) throw std::invalid_argument("samples must be finite magnitudes");
    out.sup = std::max(out.sup, a);
  }
  if (out.sup == 0) return out;
  std::vector<double> g(abs_values.size());
  for (std::size_t k = 0; k < g.size(); ++k) {
    const double t = step * static_cast<double>(k);
    const double a = abs_values[k];
    out.q = std::max(out.q, a * std::exp(2 * t / p + m * std::log1p(t)));
    g[k] = a == 0 ? 0 : std::exp(p * std::log(a / out.sup) + 2 * t + p * m * std::log1p(t));
  }
  out.norm = out.sup * std::pow(simpson(g, step), 1 / p);
  return out;
}

ModelNorms model_norms(const std::function<double(double)>& f, double p, double m,
                       const std::optional<DecayCertificate>& cert, std::size_t samples) {
  if (!cert) throw std::invalid_argument("model_norms requires a decay certificate");
  if (!f) throw std::invalid_argument("function missing");
  if (samples < 3) throw std::invalid_argument("samples must be at least 3");
  const double T = model_cutoff(*cert, p, m);
  const double h = T / static_cast<double>(samples - 1);
  std::vector<double> v(samples);
  for (std::size_t k = 0; k < samples; ++k) v[k] = std::fabs(f(h * static_cast<double>(k)));
  return model_norms_sampled(v, h, p, m, *cert);
}

double model_integrability(double s) {
  if (!(s > 1)) return std::numeric_limits<double>::infinity();
  const double T = 64;
  const double head = integrate([s](double t) { return std::pow(1 + t, -s); }, 0.0, T, 1e-14, 1e-13).value;
  return head + std::pow(1 + T, 1 - s) / (s - 1);
}

HypothesisBReport hypothesis_b_pipeline(const CompanionSystem& system, const CVector& phi0, double p,
                                        double p_prime, int k, double pi_abs, double C_config) {
  system.validate();
  if (!(p_prime >= 1)) throw std::invalid_argument("p_prime must be >= 1");
  if (!(p > p_prime)) throw std::invalid_argument("p must exceed p_prime");
  if (1 / p_prime - 1 / p > system.c0 / 2)
    throw std::invalid_argument("1/p_prime - 1/p must not exceed c0/2");
  if (k < 0) throw std::invalid_argument("k must be nonnegative");
  if (!(pi_abs >= 0)) throw std::invalid_argument("pi_abs must be nonnegative");
  if (!(C_config > 0)) throw std::invalid_argument("C_config must be positive");

  HypothesisBReport rep;
  rep.p = p;
  rep.p_prime = p_prime;
  rep.k = k;
  rep.pi_abs = pi_abs;
  rep.delta = 2 / p_prime - 2 / p;
  rep.l = (k + 8) / (2 * rep.delta * p);
  rep.R = std::max(0.0, spherical::r_pi(static_cast<unsigned>(k), rep.delta, pi_abs, C_config));

  const ConstantTermFn full = constant_term(system, phi0);
  const ConstantTermFn ct = full.pruned(system.r, 1e-9 * std::max(1.0, full.u.norm()));
  rep.exponents = ct.exponents;
  rep.coefficients = ct.coeffs;

  // decay certificate shape: slowest surviving exponent, deviation gains c0/2
  DecayCertificate cert{1, system.r + system.c0 / 2, 0};
  for (std::size_t i = 0; i < ct.exponents.size(); ++i) {
    if (ct.coefficient_size(i) == 0) continue;
    cert.rate = std::min(cert.rate, ct.exponents[i].real());
    cert.degree = std::max(cert.degree, static_cast<int>(ct.coeffs[i].size()) - 1);
  }
  const double Tc = model_cutoff(cert, p, 0);

  const auto nR = static_cast<std::size_t>(std::ceil(rep.R / kGridStep));
  const double h = nR > 0 ? rep.R / static_cast<double>(nR) : kGridStep;
  const auto count = static_cast<std::size_t>(std::ceil((rep.R + Tc) / h));
  const std::vector<CVector> dev = deviation_trajectory(system, ct, static_cast<double>(count) * h, h);

  std::vector<double> f(dev.size()), d(dev.size()), c(dev.size());
  double supR = 0;
  for (std::size_t i = 0; i < dev.size(); ++i) {
    const double t = static_cast<double>(i) * h;
    const Complex cv = ct(t);
    c[i] = std::abs(cv);
    d[i] = std::abs(dev[i](0));
    f[i] = std::abs(cv + dev[i](0));
    if (i <= nR) supR = std::max(supR, f[i]);
  }
  const ModelNorms whole = model_norms_sampled(f, h, p, 0, cert);
  rep.norm_p = whole.norm;
  rep.sup = whole.sup;
  if (rep.sup == 0) throw std::invalid_argument("solution vanishes identically");

  const double shift = std::exp(2 * rep.R / p);
  rep.S1 = shift * supR;
  const std::vector<double> dt(d.begin() + static_cast<long>(nR), d.end());
  const std::vector<double> ctt(c.begin() + static_cast<long>(nR), c.end());
  rep.S2 = shift * model_norms_sampled(dt, h, p, 0, cert).norm;
  rep.S3 = shift * model_norms_sampled(ctt, h, p, 0, cert).norm;
  if (rep.norm_p > (rep.S1 + rep.S2 + rep.S3) * (1 + 1e-9))
    throw InvariantViolation("split bound fails: ||f||_p exceeds S1 + S2 + S3");

  const double growth = std::pow(1 + pi_abs, k / 2.0 + 4);
  rep.e2_constant = rep.S2 / (growth * rep.sup);
  rep.e3_constant = rep.S3 / (growth * rep.sup);
  rep.ratio = rep.norm_p / (std::pow(1 + pi_abs, rep.l) * rep.sup);

  // fitted decay of the deviation over [0, 20 / (r + c0/2)]
  const double t_fit = 20 / (system.r + system.c0 / 2);
  Trajectory tr;
  for (std::size_t i = 0; i < dev.size() && static_cast<double>(i) * h <= t_fit; ++i) {
    const double t = static_cast<double>(i) * h;
    tr.t.push_back(t);
    tr.phi.push_back(ct.vector_value(t) + dev[i]);
  }
  rep.fitted_decay = tr.t.back() >= 10 / (system.r + system.c0 / 2)
                         ? decay_verify(tr, ct, system.r, system.c0)
                         : std::numeric_limits<double>::quiet_NaN();
  return rep;
}

HypothesisBBatch hypothesis_b_batch(int c_min, int c_max, double p, double p_prime, int k, double bound,
                                    double C_config) {
  if (c_min > c_max) throw std::invalid_argument("c_min must not exceed c_max");
  HypothesisBBatch out;
  out.bound = bound;
  const double r = 2 / p_prime, c0 = 2;
  CVector seed(2);
  seed << 1, 0.5;
  for (int c = c_min; c <= c_max; ++c) {
    const CertifiedSystem cs = certified_rank_one(c, r, c0, 1.0, seed);
    HypothesisBReport rep = hypothesis_b_pipeline(cs.system, cs.phi0, p, p_prime, k, std::abs(c), C_config);
    rep.c = c;
    out.max_ratio = std::max(out.max_ratio, rep.ratio);
    out.reports.push_back(std::move(rep));
  }
  out.bounded = out.max_ratio <= bound;
  return out;
}

}  // namespace wavecount::ct
