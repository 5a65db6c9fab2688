#pragma once

#include <cstddef>

namespace wavecount {

/// Argument above which Bessel values come from the Hankel asymptotic expansion.
inline constexpr double kBesselSeam = 25.0;

/// J_nu(x) for nu >= 0, x >= 0. Power series below kBesselSeam, Hankel expansion above.
double bessel_j(double nu, double x);
/// J_nu(x) / x^nu, finite at x = 0 (value 1 / (2^nu Gamma(nu + 1))).
double bessel_j_scaled(double nu, double x);

double bessel_j_series(double nu, double x);
double bessel_j_asymptotic(double nu, double x);

/// Volume of the Euclidean ball of radius r in R^n.
double ball_volume(int n, double r);
/// Surface area of the unit sphere S^{n-1} in R^n.
double unit_sphere_area(int n);

}  // namespace wavecount
