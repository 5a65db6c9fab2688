#pragma once

// Constant-term approximation for Phi'(t) = A Phi(t) + R(t) on [0, inf).
//
// With P the spectral projection onto the eigenvalues of A with Re lambda >= -(r + c0 - delta),
//   Phi(t) = e^{tA} u - I1(t) + I2(t),   u = Phi(0) + int_0^inf e^{-sA} P R(s) ds,
//   I1(t) = int_0^inf e^{-sA} P R(s + t) ds,   I2(t) = int_0^t e^{sA} (1 - P) R(t - s) ds,
// and the constant term is the first coordinate of e^{tA} u.

#include <Eigen/Dense>

#include <complex>
#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace wavecount::ct {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

struct GapViolation : std::domain_error {
  using std::domain_error::domain_error;
};

struct CertificateViolation : std::domain_error {
  using std::domain_error::domain_error;
};

/// ||R(t)|| <= C_R exp(-rate t) for t >= 0.
struct RemainderBound {
  double C_R = 0;
  double rate = 0;
};

struct CompanionSystem {
  CMatrix A;
  std::function<CVector(double)> remainder;
  RemainderBound bound;
  double r = 0;
  double c0 = 0;
  /// Exact spectrum with multiplicity when known (rank-one builds); empty otherwise.
  std::vector<Complex> eigenvalues;

  int N() const { return static_cast<int>(A.rows()); }
  /// Throws std::invalid_argument on a non-square A, missing remainder or bad constants.
  void validate() const;
};

/// (lambda_+, lambda_-) = -1 +- sqrt(1 + c), principal branch.
std::pair<Complex, Complex> rank_one_eigenvalues(Complex c);

/// A = [[0, 1], [c, -2]] and R(t) = (0, r(t)) with |r(t)| <= C_R exp(-(r + c0) t).
CompanionSystem build_rank_one_system(Complex c, std::function<Complex(double)> r_of_t, double C_R,
                                      double r, double c0);

double operator_norm(const CMatrix& A);

/// e^{sigma t} sum_{k<N} (t ||A||_F)^k / k!, sigma the largest real part of the spectrum.
double gelfand_shilov_bound(const CMatrix& A, double t);

struct MatrixExponential {
  CMatrix value;
  double norm = 0;   ///< operator norm of the value
  double bound = 0;  ///< Gelfand-Shilov bound, +inf for t < 0
};

/// Scaling-and-squaring evaluation of e^{tA}. For t >= 0 throws InvariantViolation if
/// the operator norm exceeds the Gelfand-Shilov bound.
MatrixExponential matrix_exp(const CMatrix& A, double t);

struct Rectangle {
  double left = 0, right = 0, bottom = 0, top = 0;
};

struct SpectralSplit {
  double threshold = 0;
  CMatrix P;         ///< projection onto the generalized eigenspaces with Re lambda < threshold
  double delta = 0;  ///< distance from the threshold to the nearest real part
  Rectangle contour;
  int panels = 0;    ///< Gauss-Legendre panels per side at convergence
  double norm_P = 0;
  double lemma_constant = 0;  ///< C(nu, N)
  double lemma_bound = 0;     ///< C(nu, N) (||A|| + 1)^N
};

/// C(nu, N) = (4 / pi) N (1 + sqrt 2)^{N-1} (2 / nu)^N for 0 < nu <= 1.
double lemma_constant(double nu, int N);

/// Contour-integral projection. Throws GapViolation if an eigenvalue has real part within
/// nu / 2 of the threshold, QuadratureError if panel doubling does not settle.
SpectralSplit spectral_projection(const CMatrix& A, double threshold, double nu);

/// delta in [c0 / 4, c0 / 2] maximizing the distance from r + c0 - delta to {-Re lambda}.
double choose_delta(const CMatrix& A, double r, double c0);

struct Trajectory {
  std::vector<double> t;
  std::vector<CVector> phi;
};

/// Variation of constants on the grid 0, step, ..., T by adaptive quadrature.
Trajectory solve_inhomogeneous(const CompanionSystem& system, const CVector& phi0, double T,
                               double step);

struct ConstantTermFn {
  /// Exponents lambda_i in the a-variable convention: the term is p_i(t) exp(-lambda_i t).
  std::vector<Complex> exponents;
  /// Polynomial coefficients in t per exponent, degree below the algebraic multiplicity.
  std::vector<std::vector<Complex>> coeffs;
  /// Same expansion for the full vector e^{tA} u.
  std::vector<std::vector<CVector>> vector_coeffs;
  CVector u;
  CMatrix A;
  CMatrix P;
  double delta = 0;
  double truncation = 0;  ///< upper limit of the improper integral for u

  Complex operator()(double t) const;
  /// e^{tA} u from the exponential-polynomial expansion.
  CVector vector_value(double t) const;
  /// First coordinate of e^{tA} u by direct matrix exponential.
  Complex direct(double t) const;
  /// Largest |coefficient| attached to an exponent.
  double coefficient_size(std::size_t i) const;
  /// Exponents whose coefficient must vanish under an a-priori decay exp(-r t).
  std::vector<std::size_t> forced_zero(double r) const;
  /// Copy with the forced coefficients set to zero; throws InvariantViolation if one of them
  /// exceeds tol.
  ConstantTermFn pruned(double r, double tol) const;

  // Orthonormal bases of range P and range (1 - P) with A restricted to them.
  CMatrix VP, BP, VQ, BQ;
};

/// Throws CertificateViolation when the remainder does not decay faster than e^{-sA} P grows.
ConstantTermFn constant_term(const CompanionSystem& system, const CVector& phi0);

/// -I1(t) + I2(t).
CVector deviation(const CompanionSystem& system, const ConstantTermFn& ct, double t);

/// -I1 + I2 on the grid 0, step, ..., T: I2 propagated forward inside range (1 - P) and I1
/// backward inside range P, with a fixed 20-point Gauss rule per step.
std::vector<CVector> deviation_trajectory(const CompanionSystem& system, const ConstantTermFn& ct,
                                          double T, double step);

/// Phi(t) = e^{tA} u - I1(t) + I2(t) on the grid 0, step, ..., T.
Trajectory stable_trajectory(const CompanionSystem& system, const ConstantTermFn& ct, double T,
                             double step);

/// Negated slope of the log envelope of |phi - ct| over the tail half of the grid; +inf
/// when the tail deviation is below 1e-13. Requires t_max >= 10 / (r + c0/2).
double decay_verify(const Trajectory& trajectory, const ConstantTermFn& ct, double r, double c0);

/// A system with R(t) = exp(-(r + c0) t) (0, w) whose solution obeys |Phi(t)| <= C e^{-rt}:
/// Phi(0) is chosen so that u is the part of `seed` along eigenvalues with Re lambda <= -r.
struct CertifiedSystem {
  CompanionSystem system;
  CVector phi0;
  Complex c;
};
CertifiedSystem certified_rank_one(Complex c, double r, double c0, Complex w, const CVector& seed);

}  // namespace wavecount::ct
