#pragma once

// Weighted norms on the model half-line Z = [0, inf) with volume e^{2t} dt and r(t) = 1 + t,
// and the numerical walk through the reverse Sobolev bound for rank-one constant terms.

#include "wavecount/constant_term.hpp"

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

namespace wavecount::ct {

/// |f(t)| <= C (1 + t)^degree e^{-rate t} for t >= 0.
struct DecayCertificate {
  double C = 0;
  double rate = 0;
  int degree = 0;
};

struct ModelNorms {
  double norm = 0;        ///< ||f r^m||_p over [0, cutoff]
  double q = 0;           ///< sup over the grid of |f| e^{2t/p} (1 + t)^m
  double sup = 0;         ///< sup |f| over the grid
  double cutoff = 0;
  double tail_bound = 0;  ///< certified bound for the omitted tail, relative to C^p
};

/// Certified tail int_T^inf C^p (1+t)^{p(m+degree)} e^{-(p rate - 2) t} dt / C^p.
/// Returns +inf when the bound is unavailable at this T.
double model_tail(const DecayCertificate& cert, double p, double m, double T);

/// Smallest T = 2^j, j >= 0, whose relative tail is below tol. Throws std::invalid_argument
/// when p rate <= 2 (no decay margin).
double model_cutoff(const DecayCertificate& cert, double p, double m, double tol = 1e-10);

/// Norms from samples f(k step), k = 0 .. n-1, by composite Simpson. The integrand is
/// normalized by the grid sup, so scaling f by a power of two scales the result exactly.
/// Throws std::invalid_argument unless the grid reaches the certified cutoff.
ModelNorms model_norms_sampled(const std::vector<double>& abs_values, double step, double p,
                               double m, const DecayCertificate& cert);

/// Picks the cutoff from the certificate and samples f on `samples` points (odd, >= 3).
/// Throws std::invalid_argument when the certificate is missing.
ModelNorms model_norms(const std::function<double(double)>& f, double p, double m,
                       const std::optional<DecayCertificate>& cert, std::size_t samples = 4097);

/// int_0^inf (1 + t)^{-s} dt by quadrature on [0, T] plus the exact tail; +inf for s <= 1.
double model_integrability(double s);

struct HypothesisBReport {
  double c = 0;  ///< rank-one parameter when known
  double p = 0, p_prime = 0;
  int k = 0;
  double pi_abs = 0;
  double delta = 0;  ///< 2/p' - 2/p
  double l = 0;      ///< (k + 8) / (2 delta p)
  double R = 0;      ///< split point R_pi
  double S1 = 0;     ///< e^{2R/p} sup_{[0,R]} |f|
  double S2 = 0;     ///< ||f - ct||_{p,[R,inf)}
  double S3 = 0;     ///< ||ct||_{p,[R,inf)}
  double norm_p = 0;
  double sup = 0;
  double e2_constant = 0;  ///< S2 / ((1+|pi|)^{k/2+4} ||f||_inf)
  double e3_constant = 0;  ///< S3 / ((1+|pi|)^{k/2+4} ||f||_inf)
  double ratio = 0;        ///< ||f||_p / ((1+|pi|)^l ||f||_inf)
  std::vector<Complex> exponents;
  std::vector<std::vector<Complex>> coefficients;
  double fitted_decay = 0;
};

/// f is the first coordinate of the solution. Throws std::invalid_argument on
/// precondition violations and InvariantViolation if the split fails the triangle inequality.
HypothesisBReport hypothesis_b_pipeline(const CompanionSystem& system, const CVector& phi0, double p,
                                        double p_prime, int k, double pi_abs, double C_config = 1);

struct HypothesisBBatch {
  std::vector<HypothesisBReport> reports;
  double max_ratio = 0;
  double bound = 0;
  bool bounded = false;  ///< max_ratio <= bound
};

/// Certified rank-one systems for c = c_min..c_max with r = 2/p', c0 = 2, |pi| = |c|.
HypothesisBBatch hypothesis_b_batch(int c_min, int c_max, double p, double p_prime, int k, double bound,
                                    double C_config = 1);

}  // namespace wavecount::ct
