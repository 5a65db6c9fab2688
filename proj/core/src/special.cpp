#include "wavecount/special.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace wavecount {

// Series terms reach ~1e9 in magnitude near the seam, so the sum is carried in
// extended precision to keep the cancellation error below 1e-10.
double bessel_j_series(double nu, double x) {
  if (nu < 0 || x < 0) throw std::domain_error("bessel_j_series: nu and x must be nonnegative");
  if (x == 0) return nu == 0 ? 1.0 : 0.0;
  const long double half = static_cast<long double>(x) / 2;
  const long double h2 = half * half;
  long double term = std::pow(half, static_cast<long double>(nu)) /
                     std::tgamma(static_cast<long double>(nu) + 1);
  long double sum = term;
  for (int k = 1; k < 500; ++k) {
    term *= -h2 / (static_cast<long double>(k) * (k + static_cast<long double>(nu)));
    sum += term;
    if (std::fabs(term) < 1e-22L * std::fabs(sum) && k > h2) break;
  }
  return static_cast<double>(sum);
}

double bessel_j_asymptotic(double nu, double x) {
  if (x <= 0) throw std::domain_error("bessel_j_asymptotic: x must be positive");
  const double mu = 4 * nu * nu;
  const double omega = x - (nu / 2 + 0.25) * std::numbers::pi;
  double p = 0, q = 0;
  double term = 1;  // a_k(nu) / x^k
  double prev = INFINITY;
  for (int k = 0; k < 200; ++k) {
    if (k > 0) {
      const double odd = 2.0 * k - 1;
      term *= (mu - odd * odd) / (k * 8.0 * x);
    }
    const double mag = std::fabs(term);
    if (mag == 0) break;
    if (mag > prev) break;  // asymptotic series: stop at the smallest term
    const int phase = k % 4;
    if (k % 2 == 0) {
      p += (phase == 0 ? term : -term);
    } else {
      q += (phase == 1 ? term : -term);
    }
    prev = mag;
    if (mag < 1e-17 * (std::fabs(p) + std::fabs(q))) break;
  }
  return std::sqrt(2 / (std::numbers::pi * x)) * (p * std::cos(omega) - q * std::sin(omega));
}

double bessel_j(double nu, double x) {
  if (nu < 0) throw std::domain_error("bessel_j: nu must be nonnegative");
  if (x < 0) throw std::domain_error("bessel_j: x must be nonnegative");
  const double v = x < kBesselSeam ? bessel_j_series(nu, x) : bessel_j_asymptotic(nu, x);
  if (!std::isfinite(v)) throw std::overflow_error("bessel_j: non-finite result");
  return v;
}

double bessel_j_scaled(double nu, double x) {
  if (x < 1e-3) {
    // sum_k (-1)^k (x/2)^{2k} / (2^nu k! Gamma(k+nu+1))
    const double h2 = x * x / 4;
    double term = 1 / (std::pow(2.0, nu) * std::tgamma(nu + 1));
    double sum = term;
    for (int k = 1; k < 10; ++k) {
      term *= -h2 / (k * (k + nu));
      sum += term;
    }
    return sum;
  }
  return bessel_j(nu, x) / std::pow(x, nu);
}

double ball_volume(int n, double r) {
  if (n < 1) throw std::domain_error("ball_volume: dimension must be positive");
  return std::pow(std::numbers::pi, n / 2.0) * std::pow(r, n) / std::tgamma(n / 2.0 + 1);
}

double unit_sphere_area(int n) {
  if (n < 1) throw std::domain_error("unit_sphere_area: dimension must be positive");
  return 2 * std::pow(std::numbers::pi, n / 2.0) / std::tgamma(n / 2.0);
}

}  // namespace wavecount
