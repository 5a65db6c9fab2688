#include "wavecount/hyperbolic_count.hpp"

#include "wavecount/euclid_count.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace wavecount::hyperbolic {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr int kTrapezoidNodes = 1 << 10;

void check_trace_identity_once() {
  static std::once_flag flag;
  static bool ok = false;
  std::call_once(flag, [] { ok = trace_identity_deviation(4) < 1e-9; });
  if (!ok) throw InvariantViolation("trace identity self-check against hyp_dist failed");
}

void check_radius(double R) {
  if (!(R > 0) || !std::isfinite(R)) throw std::invalid_argument("R must be positive");
}
}  // namespace

UpperHalfPoint UpperHalfPoint::make(double x, double y) {
  if (!std::isfinite(x) || !std::isfinite(y) || !(y > 0))
    throw std::invalid_argument("upper half-plane point needs finite x and y > 0");
  return {x, y};
}

MobiusMatrix MobiusMatrix::make(std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d) {
  if (a * d - b * c != 1) throw std::invalid_argument("matrix determinant is not 1");
  MobiusMatrix m{a, b, c, d};
  const std::int64_t lead = a != 0 ? a : b != 0 ? b : c != 0 ? c : d;
  if (lead < 0) m = {-a, -b, -c, -d};
  return m;
}

MobiusMatrix MobiusMatrix::operator*(const MobiusMatrix& o) const {
  return make(a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d);
}

MobiusMatrix MobiusMatrix::inverse() const { return make(d, -b, -c, a); }

UpperHalfPoint MobiusMatrix::apply(const UpperHalfPoint& z) const {
  const std::complex<double> w = z.as_complex();
  const std::complex<double> r = (static_cast<double>(a) * w + static_cast<double>(b)) /
                                 (static_cast<double>(c) * w + static_cast<double>(d));
  // Im(g z) = y / |cz + d|^2 is evaluated directly to stay positive.
  const double den = std::norm(static_cast<double>(c) * w + static_cast<double>(d));
  return {r.real(), z.y / den};
}

double hyp_dist(const UpperHalfPoint& z, const UpperHalfPoint& w) {
  const double dx = z.x - w.x, dy = z.y - w.y;
  const double chord = std::sqrt(dx * dx + dy * dy);
  return 2 * std::asinh(chord / (2 * std::sqrt(z.y * w.y)));
}

double ball_volume_hyp(double R) {
  if (!(R >= 0)) throw std::invalid_argument("R must be nonnegative");
  const double s = std::sinh(R / 2);
  return 4 * kPi * s * s;
}

double trace_identity_deviation(int entry_bound) {
  const UpperHalfPoint i{0, 1};
  double worst = 0;
  for (std::int64_t a = -entry_bound; a <= entry_bound; ++a)
    for (std::int64_t b = -entry_bound; b <= entry_bound; ++b)
      for (std::int64_t c = -entry_bound; c <= entry_bound; ++c)
        for (std::int64_t d = -entry_bound; d <= entry_bound; ++d) {
          if (a * d - b * c != 1) continue;
          const MobiusMatrix g{a, b, c, d};
          const double lhs = std::cosh(hyp_dist(i, g.apply(i)));
          const double rhs = 0.5 * static_cast<double>(g.frobenius_sq());
          worst = std::max(worst, std::fabs(lhs - rhs) / rhs);
        }
  return worst;
}

std::vector<MobiusMatrix> enumerate_gamma(double R, double budget) {
  check_radius(R);
  const double T = 2 * std::cosh(R);
  if (!(T <= budget))
    throw BudgetExceeded("2 cosh R = " + std::to_string(T) + " exceeds budget " +
                         std::to_string(budget));
  check_trace_identity_once();
  const auto M = static_cast<std::int64_t>(std::floor(std::sqrt(T)));
  auto below = [T](std::int64_t s) { return static_cast<double>(s) < T; };
  auto keep = [](std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d) {
    const std::int64_t lead = a != 0 ? a : b != 0 ? b : c != 0 ? c : d;
    return lead > 0;
  };
  std::vector<MobiusMatrix> out;
  for (std::int64_t a = -M; a <= M; ++a) {
    const std::int64_t sa = a * a;
    if (!below(sa)) continue;
    for (std::int64_t b = -M; b <= M; ++b) {
      const std::int64_t sab = sa + b * b;
      if (!below(sab)) continue;
      for (std::int64_t c = -M; c <= M; ++c) {
        const std::int64_t sabc = sab + c * c;
        if (!below(sabc)) continue;
        if (a != 0) {
          const std::int64_t num = 1 + b * c;
          if (num % a != 0) continue;
          const std::int64_t d = num / a;
          if (below(sabc + d * d) && keep(a, b, c, d)) out.push_back({a, b, c, d});
        } else if (b * c == -1) {
          for (std::int64_t d = -M; d <= M; ++d)
            if (below(sabc + d * d) && keep(a, b, c, d)) out.push_back({a, b, c, d});
        }
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

HypCountRecord count_in_ball(const UpperHalfPoint& z, double R, double budget) {
  check_radius(R);
  const UpperHalfPoint i{0, 1};
  const double shift = hyp_dist(z, i);
  HypCountRecord rec;
  rec.R = R;
  if (shift == 0) {
    rec.count = enumerate_gamma(R, budget).size();
  } else {
    // d(g z, i) < R implies d(g i, i) < R + d(z, i)
    for (const auto& g : enumerate_gamma(R + shift, budget))
      if (hyp_dist(g.apply(z), i) < R) ++rec.count;
  }
  rec.main_term = 3 / kPi * ball_volume_hyp(R);
  rec.relative_error = (static_cast<double>(rec.count) - rec.main_term) / rec.main_term;
  return rec;
}

std::pair<double, double> selberg_cross_check(double R) {
  if (!(R >= 2)) throw std::invalid_argument("selberg_cross_check requires R >= 2");
  return {3 / kPi * ball_volume_hyp(R), 3 * (2 * std::cosh(R))};
}

double polar_jacobian_ratio(double t) {
  if (!(t > 0)) throw std::invalid_argument("polar_jacobian_ratio requires t > 0");
  return 0.5 * (1 - std::exp(-2 * t));
}

UpperHalfPoint rotate_about_i(const UpperHalfPoint& z, double theta) {
  const double c = std::cos(theta / 2), s = std::sin(theta / 2);
  const std::complex<double> w = z.as_complex();
  const std::complex<double> r = (c * w + s) / (-s * w + c);
  return {r.real(), z.y / std::norm(-s * w + c)};
}

std::complex<double> k_fourier_coeff(const std::function<double(const UpperHalfPoint&)>& f, int n,
                                     const UpperHalfPoint& z) {
  std::complex<double> sum = 0;
  for (int j = 0; j < kTrapezoidNodes; ++j) {
    const double theta = 2 * kPi * j / kTrapezoidNodes;
    sum += std::polar(1.0, -n * theta) * f(rotate_about_i(z, theta));
  }
  return sum / static_cast<double>(kTrapezoidNodes);
}

std::complex<double> k_fourier_reconstruct(std::span<const std::complex<double>> coeffs, int nmax,
                                           double theta) {
  if (coeffs.size() != static_cast<std::size_t>(2 * nmax + 1))
    throw std::invalid_argument("k_fourier_reconstruct expects coefficients for -nmax..nmax");
  std::complex<double> v = 0;
  for (int n = -nmax; n <= nmax; ++n) v += coeffs[static_cast<std::size_t>(n + nmax)] * std::polar(1.0, n * theta);
  return v;
}

ContractionResult adjoint_contraction_check(double t) {
  if (!(t >= 0) || !std::isfinite(t)) throw std::invalid_argument("t must be nonnegative");
  Eigen::Matrix2d a = Eigen::Matrix2d::Zero();
  a(0, 0) = std::exp(-t / 2);
  a(1, 1) = std::exp(t / 2);
  Eigen::Matrix2d E = Eigen::Matrix2d::Zero();
  E(0, 1) = 1;
  const Eigen::Matrix2d ad = a * E * a.inverse();
  ContractionResult r;
  r.factor = ad.norm() / E.norm();
  r.holds = r.factor <= 1 + 1e-15;
  return r;
}

double error_exponent_fit(std::span<const HypCountRecord> records) {
  std::vector<double> v, e, r;
  for (const auto& rec : records) {
    v.push_back(std::exp(rec.R));
    e.push_back(static_cast<double>(rec.count) - rec.main_term);
    r.push_back(rec.R);
  }
  return euclid::error_exponent_fit(v, e, r);
}

}  // namespace wavecount::hyperbolic
