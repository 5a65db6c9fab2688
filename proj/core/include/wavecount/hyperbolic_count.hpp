#pragma once

// Lattice point counting for PSL(2, Z) acting on the upper half-plane.

#include "wavecount/errors.hpp"

#include <complex>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace wavecount::hyperbolic {

inline constexpr double kDefaultTraceBudget = 1e6;

struct UpperHalfPoint {
  double x = 0;
  double y = 1;

  /// Throws std::invalid_argument unless y > 0 and both coordinates are finite.
  static UpperHalfPoint make(double x, double y);
  std::complex<double> as_complex() const { return {x, y}; }
};

/// Integer matrix of determinant one, stored with its first nonzero entry positive
/// (the larger of the pair +-g in lexicographic order).
struct MobiusMatrix {
  std::int64_t a = 1, b = 0, c = 0, d = 1;

  /// Throws std::invalid_argument when ad - bc != 1. Normalises the sign.
  static MobiusMatrix make(std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d);
  MobiusMatrix operator*(const MobiusMatrix& o) const;
  MobiusMatrix inverse() const;
  UpperHalfPoint apply(const UpperHalfPoint& z) const;
  std::int64_t frobenius_sq() const { return a * a + b * b + c * c + d * d; }
  auto operator<=>(const MobiusMatrix&) const = default;
};

struct HypCountRecord {
  double R = 0;
  std::uint64_t count = 0;
  double main_term = 0;
  double relative_error = 0;
};

double hyp_dist(const UpperHalfPoint& z, const UpperHalfPoint& w);
/// 4 pi sinh^2(R/2).
double ball_volume_hyp(double R);

/// Largest relative deviation between cosh d(i, g i) and (a^2+b^2+c^2+d^2)/2 over all
/// SL(2, Z) matrices with entries bounded by `entry_bound`.
double trace_identity_deviation(int entry_bound = 4);

/// All PSL(2, Z) classes with d(i, g i) < R, sorted.
std::vector<MobiusMatrix> enumerate_gamma(double R, double budget = kDefaultTraceBudget);

/// N(R, z, i) = #{g : d(g z, i) < R} with the main term (3/pi) vol(B(R)).
HypCountRecord count_in_ball(const UpperHalfPoint& z, double R, double budget = kDefaultTraceBudget);

/// (12 sinh^2(R/2), 6 cosh R): the geodesic-ball and 2cosh-normalised main terms.
std::pair<double, double> selberg_cross_check(double R);

/// sinh(t) / e^t for the hyperbolic-plane polar Jacobian.
double polar_jacobian_ratio(double t);

/// Rotation by angle theta about i (the image of theta under PSO(2) ~ R / 2 pi Z).
UpperHalfPoint rotate_about_i(const UpperHalfPoint& z, double theta);

/// (1/2pi) int_0^{2pi} e^{-in theta} f(k_theta z) d theta, trapezoidal rule on 2^10 nodes.
std::complex<double> k_fourier_coeff(const std::function<double(const UpperHalfPoint&)>& f, int n,
                                     const UpperHalfPoint& z);
/// sum_{|n| <= nmax} c_n e^{i n theta}.
std::complex<double> k_fourier_reconstruct(std::span<const std::complex<double>> coeffs, int nmax,
                                           double theta);

struct ContractionResult {
  bool holds = false;
  double factor = 0;  ///< |Ad(a_t) E| / |E| for the root vector E
};

/// Conjugation of the upper-triangular nilradical by a = diag(e^{-t/2}, e^{t/2}).
ContractionResult adjoint_contraction_check(double t);

/// Least-squares exponent of the running max |count - main_term| against e^R.
double error_exponent_fit(std::span<const HypCountRecord> records);

}  // namespace wavecount::hyperbolic
