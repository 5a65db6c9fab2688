#pragma once

// Lattice point counting in R^n: exact enumeration, mollified counts and the
// dual-lattice (Poisson summation) evaluation of the mollified count.
//
// Conventions
//   * Balls are open: a point x is counted iff |x| < R.
//   * Fourier transform: f^(xi) = int f(x) exp(-i xi.x) dx. With this
//     normalisation Poisson summation reads
//       sum_{g in L} f(g) = covol(L)^{-1} sum_{g* in L*} f^(2 pi g*),
//     where L* is generated by the inverse transpose of the basis.

#include "wavecount/errors.hpp"
#include "wavecount/rational.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <stdexcept>
#include <vector>

namespace wavecount::euclid {

inline constexpr std::uint64_t kDefaultEnumerationBudget = 1'000'000'000ULL;

using wavecount::BudgetExceeded;

struct TailBoundError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Full-rank lattice in R^n generated by the columns of a rational basis.
class IntegerLattice {
 public:
  static IntegerLattice standard(int n);
  /// Throws std::domain_error when the basis is singular.
  static IntegerLattice from_basis(const RatMatrix& basis);

  int dimension() const { return n_; }
  const RatMatrix& basis() const { return basis_; }
  const RatMatrix& dual_basis() const { return dual_; }
  double covolume() const { return covolume_; }

  /// Calls visit(x, |x|^2) for every lattice point x with |x| < radius, where
  /// |x|^2 is computed exactly for the comparison. Enumerates the bounding box
  /// of the ball in lattice coordinates.
  void for_each_point_in_ball(double radius, std::uint64_t budget,
                              const std::function<void(std::span<const double>, double)>& visit) const;

  /// Same enumeration for the dual lattice (no 2 pi factor).
  void for_each_dual_point_in_ball(double radius, std::uint64_t budget,
                                   const std::function<void(std::span<const double>, double)>& visit) const;

  /// Number of points with |x| < radius (exact comparison).
  std::uint64_t count_points(double radius, std::uint64_t budget) const;

  /// Half the sum of the dual basis vector norms: every point of R^n lies within
  /// this distance of the dual lattice. Used for shell-count bounds.
  double dual_cell_radius() const { return dual_cell_radius_; }
  double dual_covolume() const { return 1.0 / covolume_; }

 private:
  struct Generator {
    int n = 0;
    std::vector<std::int64_t> scaled;  // column-major n x n, x = scaled * c / denom
    std::int64_t denom = 1;
    Eigen::MatrixXd inverse;          // lattice coordinates of x
  };
  static Generator make_generator(const RatMatrix& basis);
  template <class Visit>
  static void enumerate(const Generator& g, double radius, bool inclusive, std::uint64_t budget,
                        Visit&& visit);

  int n_ = 0;
  RatMatrix basis_;
  RatMatrix dual_;
  Generator primal_;
  Generator dual_gen_;
  double covolume_ = 1;
  double dual_cell_radius_ = 0;
};

/// Smooth radial bump supported in the unit ball with unit integral, scaled by epsilon.
class RadialMollifier {
 public:
  /// Standard bump c_n exp(-1/(1-|x|^2)).
  RadialMollifier(int n, double epsilon);
  /// Custom nonnegative radial profile rho -> value on [0, 1); normalised numerically.
  RadialMollifier(int n, double epsilon, std::function<double(double)> radial_profile);

  int dimension() const { return n_; }
  double epsilon() const { return epsilon_; }
  RadialMollifier with_epsilon(double epsilon) const;

  /// Normalised profile phi(|x|) (unit scale).
  double profile(double radius) const;
  /// |S^{n-1}| int_0^1 phi(rho) rho^{n-1} d rho, i.e. the total mass (1 up to quadrature error).
  double mass() const;

  /// phi^(xi) at unit scale by direct radial quadrature (no cache).
  double fourier_direct(double xi) const;
  /// Cached phi^(xi) with linear interpolation on a geometric grid.
  double fourier(double xi) const;
  /// sup_{t >= xi} |phi^(t)| from the cache (with polynomial extrapolation past its end).
  double fourier_envelope(double xi) const;
  /// Builds the cache up to xi_max; must be called before sharing across threads.
  void ensure_fourier_cache(double xi_max) const;
  double fourier_cache_extent() const;
  std::size_t fourier_cache_size() const;

  /// (1_R * phi_eps)(x) for |x| = s.
  double smoothed_indicator(double R, double s) const;

 private:
  struct FourierTable;
  void extend_cache_locked(FourierTable& t, double xi_max) const;

  int n_;
  double epsilon_;
  std::shared_ptr<const std::function<double(double)>> raw_profile_;
  double normaliser_ = 1;
  std::shared_ptr<FourierTable> cache_;
};

struct CountRecord {
  double R = 0;
  std::uint64_t exact_count = 0;
  double smoothed_count = 0;
  double ball_volume = 0;
  double error = 0;  ///< exact_count - ball_volume
  double epsilon = 0;
};

CountRecord make_record(int n, double R, std::uint64_t exact, double smoothed, double epsilon);

std::uint64_t count_exact(const IntegerLattice& lattice, double R,
                          std::uint64_t budget = kDefaultEnumerationBudget);

/// Fourier transform of the indicator of the radius-R ball at frequency norm lambda.
double ball_fourier(int n, double R, double lambda_norm);
/// The constant K in |ball_fourier(n,R,l)| <= K R^{(n-1)/2} l^{-(n+1)/2} (valid for R l >= 1).
double ball_fourier_decay_constant(int n);

double mollified_count(const IntegerLattice& lattice, double R, const RadialMollifier& mollifier,
                       std::uint64_t budget = kDefaultEnumerationBudget);

struct SpectralCount {
  double value = 0;
  double cutoff = 0;         ///< dual-norm cutoff actually used
  double tail_bound = 0;     ///< bound on the omitted dual terms
  std::uint64_t terms = 0;   ///< nonzero dual vectors summed
};

inline constexpr double kSpectralTailTolerance = 1e-8;

/// Tail bound for the dual sum beyond the given dual-norm cutoff.
double spectral_tail_bound(const IntegerLattice& lattice, double R, const RadialMollifier& mollifier,
                           double dual_cutoff);

/// Dual-lattice evaluation with a fixed cutoff; throws TailBoundError when the
/// estimated tail exceeds kSpectralTailTolerance.
SpectralCount poisson_spectral_count(const IntegerLattice& lattice, double R,
                                     const RadialMollifier& mollifier, double dual_cutoff,
                                     std::uint64_t budget = kDefaultEnumerationBudget);
/// Same, with the cutoff grown automatically until the tail bound is below tolerance.
SpectralCount poisson_spectral_count_auto(const IntegerLattice& lattice, double R,
                                          const RadialMollifier& mollifier,
                                          std::uint64_t budget = kDefaultEnumerationBudget);

/// R^{(1-n)/(n+1)}.
double optimal_epsilon(int n, double R);
/// n(n-1)/(n+1): exponent of R in the balanced error bound.
Rational balanced_error_exponent(int n);
/// Exponents of R in the two error terms R^{(n-1)/2} eps^{(1-n)/2} and R^{n-1} eps once
/// eps = R^{(1-n)/(n+1)} is substituted.
std::pair<Rational, Rational> error_term_exponents(int n);

/// Least-squares slope of log(running max |error|) against log(volume).
double error_exponent_fit(std::span<const double> volumes, std::span<const double> errors,
                          std::span<const double> radii);
double error_exponent_fit(std::span<const CountRecord> records);

struct FactorizedCounts {
  std::uint64_t group = 0;     ///< N_R(Z^2, R^2) for the product ball
  std::uint64_t subgroup = 0;  ///< N_R(Z, H) for H = {0} x R
  std::uint64_t quotient = 0;  ///< N_R(Z^2 / Z, R^2 / H)
  bool holds = false;
};

/// Product example G = R^2, H = {0} x R, Gamma = Z^2 with product balls
/// B_R^G = (-R, R) x B_R^H and B_R^H = [0, 1) + {-floor R, ..., floor R}.
FactorizedCounts factorized_count_check(double R);

}  // namespace wavecount::euclid
