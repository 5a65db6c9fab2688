#include "doctest.h"

#include "wavecount/hyperbolic_count.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <set>
#include <tuple>
#include <vector>

using namespace wavecount::hyperbolic;

namespace {

constexpr double pi = std::numbers::pi;
using Quad = std::tuple<long, long, long, long>;

Quad normalised(long a, long b, long c, long d) {
  const Quad p{a, b, c, d}, m{-a, -b, -c, -d};
  return std::max(p, m);
}

UpperHalfPoint act(long a, long b, long c, long d, const UpperHalfPoint& z) {
  const std::complex<double> w(z.x, z.y);
  const std::complex<double> r = (static_cast<double>(a) * w + static_cast<double>(b)) /
                                 (static_cast<double>(c) * w + static_cast<double>(d));
  return UpperHalfPoint::make(r.real(), r.imag());
}

// brute force over a, b, c with d solved from ad - bc = 1; the distance test uses
// hyp_dist, never the trace identity
std::set<Quad> brute_classes(const UpperHalfPoint& z, double R) {
  const auto bound = static_cast<long>(std::ceil(std::sqrt(2 * std::cosh(R)))) + 1;
  std::set<Quad> out;
  auto consider = [&](long a, long b, long c, long d) {
    if (a * d - b * c != 1) return;
    if (hyp_dist(act(a, b, c, d, z), UpperHalfPoint::make(0, 1)) < R) out.insert(normalised(a, b, c, d));
  };
  for (long a = -bound; a <= bound; ++a)
    for (long b = -bound; b <= bound; ++b)
      for (long c = -bound; c <= bound; ++c) {
        if (a != 0) {
          if ((1 + b * c) % a == 0) consider(a, b, c, (1 + b * c) / a);
        } else if (b * c == -1) {
          for (long d = -bound; d <= bound; ++d) consider(a, b, c, d);
        }
      }
  return out;
}

// hyperbolic length of the semicircle through i and 1 + i: int d phi / sin phi
double semicircle_length() {
  const double cx = 0.5;
  const double p1 = std::atan2(1.0, 0 - cx), p2 = std::atan2(1.0, 1 - cx);
  const int m = 20000;
  double s = 0;
  for (int i = 0; i <= m; ++i) {
    const double phi = p2 + (p1 - p2) * i / m;
    const double w = (i == 0 || i == m) ? 1 : (i % 2 ? 4 : 2);
    s += w / std::sin(phi);
  }
  return s * (p1 - p2) / (3 * m);
}

}  // namespace

TEST_SUITE("hyperbolic") {

TEST_CASE("hyp_dist examples") {
  const auto i = UpperHalfPoint::make(0, 1);
  CHECK(hyp_dist(i, i) == 0);
  // vertical geodesic: int_1^2 dy / y by Simpson
  double s = 0;
  const int m = 2000;
  for (int k = 0; k <= m; ++k) {
    const double y = 1 + static_cast<double>(k) / m;
    s += ((k == 0 || k == m) ? 1 : (k % 2 ? 4 : 2)) / y;
  }
  s /= 3.0 * m;
  CHECK(std::fabs(hyp_dist(i, UpperHalfPoint::make(0, 2)) - s) < 1e-10);
  CHECK(std::fabs(hyp_dist(i, UpperHalfPoint::make(1, 1)) - semicircle_length()) < 1e-8);
  CHECK(std::fabs(hyp_dist(i, UpperHalfPoint::make(1, 1)) - std::acosh(1.5)) < 1e-12);
  CHECK_THROWS(UpperHalfPoint::make(0, 0));
  CHECK_THROWS(UpperHalfPoint::make(0, -1));
}

TEST_CASE("metric properties and isometry invariance") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> dx(-3, 3), dy(0.1, 4);
  const std::vector<std::array<long, 4>> gammas = {{1, 1, 0, 1}, {0, -1, 1, 0}, {2, 1, 1, 1}, {3, 2, 4, 3}, {1, -2, -1, 3}};
  for (int k = 0; k < 200; ++k) {
    const auto z = UpperHalfPoint::make(dx(rng), dy(rng));
    const auto w = UpperHalfPoint::make(dx(rng), dy(rng));
    const auto u = UpperHalfPoint::make(dx(rng), dy(rng));
    CHECK(hyp_dist(z, w) == hyp_dist(w, z));
    CHECK(hyp_dist(z, u) <= hyp_dist(z, w) + hyp_dist(w, u) + 1e-12);
    const auto& g = gammas[static_cast<std::size_t>(k) % gammas.size()];
    const double d0 = hyp_dist(z, w);
    const double d1 = hyp_dist(act(g[0], g[1], g[2], g[3], z), act(g[0], g[1], g[2], g[3], w));
    CHECK(std::fabs(d0 - d1) < 1e-10 * std::max(1.0, d0));
  }
}

TEST_CASE("ball_volume_hyp") {
  CHECK(ball_volume_hyp(0) == 0);
  CHECK(ball_volume_hyp(2) == doctest::Approx(4 * pi * std::sinh(1.0) * std::sinh(1.0)).epsilon(1e-14));
  // 4 pi sinh^2(10) = pi e^20 (1 - e^-20)^2
  const double closed = pi * std::exp(20.0) * std::pow(1 - std::exp(-20.0), 2);
  CHECK(std::fabs(ball_volume_hyp(20) / closed - 1) < 1e-8);
  CHECK(std::fabs(ball_volume_hyp(40) / (pi * std::exp(40.0)) - 1) < 1e-12);
}

TEST_CASE("trace identity self-check") { CHECK(trace_identity_deviation() < 1e-12); }

TEST_CASE("enumerate_gamma") {
  const auto small = enumerate_gamma(0.1);
  REQUIRE(small.size() == 2);
  std::set<Quad> got;
  for (const auto& g : small) got.insert(normalised(g.a, g.b, g.c, g.d));
  CHECK(got.count(normalised(1, 0, 0, 1)) == 1);
  CHECK(got.count(normalised(0, -1, 1, 0)) == 1);
  // S fixes i
  const auto si = act(0, -1, 1, 0, UpperHalfPoint::make(0, 1));
  CHECK(std::fabs(si.x) < 1e-15);
  CHECK(std::fabs(si.y - 1) < 1e-15);

  for (double R : {1.4, 3.0}) {
    std::set<Quad> lib;
    for (const auto& g : enumerate_gamma(R)) {
      CHECK(g.a * g.d - g.b * g.c == 1);
      CHECK(hyp_dist(UpperHalfPoint::make(0, 1), g.apply(UpperHalfPoint::make(0, 1))) < R);
      CHECK(g >= MobiusMatrix{-g.a, -g.b, -g.c, -g.d});
      lib.insert(normalised(g.a, g.b, g.c, g.d));
    }
    CHECK(lib == brute_classes(UpperHalfPoint::make(0, 1), R));
  }
  CHECK_THROWS_AS(enumerate_gamma(20, 1e6), wavecount::BudgetExceeded);
}

TEST_CASE("count_in_ball") {
  const auto i = UpperHalfPoint::make(0, 1);
  CHECK(count_in_ball(i, 0.1).count == 2);
  for (double R : {4.0, 6.0}) CHECK(count_in_ball(i, R).count == brute_classes(i, R).size());
  const auto rec = count_in_ball(i, 10);
  CHECK(std::fabs(rec.main_term - 12 * std::sinh(5.0) * std::sinh(5.0)) < 1e-12 * rec.main_term);
  CHECK(rec.relative_error == doctest::Approx((static_cast<double>(rec.count) - rec.main_term) / rec.main_term));
  CHECK(std::fabs(rec.relative_error) < 0.2);
  // Gamma-equivalent base points see the same orbit
  for (const auto& g : std::vector<std::array<long, 4>>{{1, 1, 0, 1}, {2, 1, 1, 1}}) {
    const auto z = act(g[0], g[1], g[2], g[3], i);
    CHECK(count_in_ball(z, 6).count == count_in_ball(i, 6).count);
  }
}

TEST_CASE("monotone counting and relative-error trend") {
  const auto i = UpperHalfPoint::make(0, 1);
  std::uint64_t prev = 0;
  double sum = 0, prev_mean = HUGE_VAL;
  int k = 0;
  for (double R = 1; R <= 10; R += 0.5) {
    const auto rec = count_in_ball(i, R);
    CHECK(rec.count >= prev);
    prev = rec.count;
    if (R >= 6 && std::fmod(R, 1.0) == 0) {
      sum += std::fabs(rec.relative_error);
      const double mean = sum / ++k;
      CHECK(mean <= prev_mean);
      prev_mean = mean;
    }
  }
}

TEST_CASE("selberg cross check") {
  const auto [a, b] = selberg_cross_check(10);
  CHECK(std::fabs(a / b - 1) < 1e-3);
  CHECK(a == doctest::Approx(12 * std::sinh(5.0) * std::sinh(5.0)));
  CHECK(b == doctest::Approx(6 * std::cosh(10.0)));
  const auto [c, d] = selberg_cross_check(2);
  CHECK(std::isfinite(c / d));
  CHECK(std::fabs(selberg_cross_check(20).first / selberg_cross_check(20).second - 1) < 1e-7);
}

TEST_CASE("polar Jacobian ratio") {
  CHECK(polar_jacobian_ratio(1) == doctest::Approx(0.4323323583816936).epsilon(1e-14));
  CHECK(std::fabs(polar_jacobian_ratio(10) - 0.5) < 1e-8);
  CHECK(polar_jacobian_ratio(1e-9) < 1e-8);
  for (double t = 1; t < 8; t += 1.5) CHECK(std::fabs((0.5 - polar_jacobian_ratio(t)) / std::exp(-2 * t) - 0.5) < 1e-6);
}

TEST_CASE("K-Fourier coefficients") {
  const auto z = UpperHalfPoint::make(0, 2);
  auto one = [](const UpperHalfPoint&) { return 1.0; };
  CHECK(std::abs(k_fourier_coeff(one, 0, z) - 1.0) < 1e-14);
  CHECK(std::abs(k_fourier_coeff(one, 3, z)) < 1e-14);

  auto re = [](const UpperHalfPoint& w) { return w.x; };
  // dense-grid DFT oracle on 2^14 nodes
  const int m = 1 << 14;
  std::vector<double> samples(m);
  for (int j = 0; j < m; ++j) samples[static_cast<std::size_t>(j)] = rotate_about_i(z, 2 * pi * j / m).x;
  const int nmax = 40;
  std::vector<std::complex<double>> coeffs;
  for (int n = -nmax; n <= nmax; ++n) {
    std::complex<double> o = 0;
    for (int j = 0; j < m; ++j) o += samples[static_cast<std::size_t>(j)] * std::polar(1.0, -2 * pi * n * j / m);
    o /= static_cast<double>(m);
    const auto c = k_fourier_coeff(re, n, z);
    CHECK(std::abs(c - o) < 1e-10);
    coeffs.push_back(c);
  }
  CHECK(std::abs(coeffs[nmax + 1] + coeffs[nmax - 1]) < 1e-12);  // Re is odd in theta
  for (double th : {0.3, 1.7, 4.0}) {
    const double f = rotate_about_i(z, th).x;
    CHECK(std::abs(k_fourier_reconstruct(coeffs, nmax, th) - f) < 1e-8);
    // |c_n| ~ 3^-|n| here, so eight modes leave an error near 1e-4
    const std::span<const std::complex<double>> low(coeffs.data() + nmax - 8, 17);
    CHECK(std::abs(k_fourier_reconstruct(low, 8, th) - f) < 1e-2);
  }
}

TEST_CASE("adjoint contraction") {
  const auto a = adjoint_contraction_check(0);
  CHECK(a.holds);
  CHECK(a.factor == doctest::Approx(1.0));
  for (double t : {1.0, 5.0}) {
    const auto r = adjoint_contraction_check(t);
    CHECK(r.holds);
    CHECK(r.factor == doctest::Approx(std::exp(-t)).epsilon(1e-12));
  }
}

}  // TEST_SUITE
