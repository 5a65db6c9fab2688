#include "wavecount/constant_term.hpp"

#include "wavecount/errors.hpp"
#include "wavecount/quadrature.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace wavecount::ct {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kProjectionTol = 1e-10;
constexpr int kMaxPanels = 1 << 14;
constexpr double kTruncationTol = 1e-12;
constexpr double kNoiseFloor = 1e-13;

using Gauss = boost::math::quadrature::gauss<double, 20>;

std::vector<Complex> spectrum(const CMatrix& A) {
  Eigen::ComplexEigenSolver<CMatrix> es(A, false);
  if (es.info() != Eigen::Success) throw std::runtime_error("eigenvalue computation failed");
  std::vector<Complex> out(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  return out;
}

// Orthonormal basis of the column space of P, and A restricted to it.
std::pair<CMatrix, CMatrix> restrict_to_range(const CMatrix& A, const CMatrix& P) {
  const int n = static_cast<int>(P.rows());
  Eigen::ColPivHouseholderQR<CMatrix> qr(P);
  qr.setThreshold(1e-9);
  const int k = static_cast<int>(qr.rank());
  const CMatrix Q = qr.householderQ() * CMatrix::Identity(n, n);
  CMatrix V = Q.leftCols(k);
  CMatrix B = V.adjoint() * A * V;
  return {V, B};
}

CMatrix expm(const CMatrix& M) { return M.exp(); }

// Hadamard-Cramer bound of max ||(z - A)^{-1}|| on a rectangle at distance d from the spectrum.
double resolvent_bound(double normA, double zmax, double d, int N) {
  return N * std::pow(normA + zmax, N - 1) / std::pow(d, N);
}

double rectangle_zmax(const Rectangle& r) {
  const double x = std::max(std::fabs(r.left), std::fabs(r.right));
  const double y = std::max(std::fabs(r.bottom), std::fabs(r.top));
  return std::hypot(x, y);
}

double rectangle_length(const Rectangle& r) { return 2 * (r.right - r.left) + 2 * (r.top - r.bottom); }

double distance_to_rectangle(Complex z, const Rectangle& r) {
  const double x = z.real(), y = z.imag();
  const bool inside = x > r.left && x < r.right && y > r.bottom && y < r.top;
  if (inside) return std::min({x - r.left, r.right - x, y - r.bottom, r.top - y});
  const double dx = std::max({r.left - x, 0.0, x - r.right});
  const double dy = std::max({r.bottom - y, 0.0, y - r.top});
  return std::hypot(dx, dy);
}

// (1 / 2 pi i) times the contour integral of (z - A)^{-1} over the rectangle,
// composite Gauss-Legendre with `panels` panels per side.
CMatrix contour_projection(const CMatrix& A, const Rectangle& r, int panels) {
  const int n = static_cast<int>(A.rows());
  const CMatrix I = CMatrix::Identity(n, n);
  CMatrix sum = CMatrix::Zero(n, n);
  const Complex corners[5] = {{r.left, r.bottom}, {r.right, r.bottom}, {r.right, r.top},
                              {r.left, r.top}, {r.left, r.bottom}};
  const auto& x = Gauss::abscissa();
  const auto& w = Gauss::weights();
  for (int side = 0; side < 4; ++side) {
    const Complex a = corners[side], b = corners[side + 1];
    const Complex h = (b - a) / static_cast<double>(panels);
    for (int p = 0; p < panels; ++p) {
      const Complex mid = a + h * (p + 0.5);
      for (std::size_t j = 0; j < x.size(); ++j) {
        for (int s : {-1, 1}) {
          if (x[j] == 0 && s == 1) continue;
          const Complex z = mid + 0.5 * h * (s * x[j]);
          sum += (0.5 * h * w[j]) * (z * I - A).partialPivLu().solve(I);
        }
      }
    }
  }
  return sum / Complex(0, 2 * kPi);
}

// Spectral projector onto the generalized eigenspace of eigenvalues within `radius` of centre.
CMatrix circle_projection(const CMatrix& A, Complex centre, double radius) {
  const int n = static_cast<int>(A.rows());
  const CMatrix I = CMatrix::Identity(n, n);
  CMatrix prev;
  for (int nodes = 32; nodes <= 8192; nodes *= 2) {
    CMatrix sum = CMatrix::Zero(n, n);
    for (int j = 0; j < nodes; ++j) {
      const Complex e = std::polar(1.0, 2 * kPi * j / nodes);
      const Complex z = centre + radius * e;
      sum += (radius * e) * (z * I - A).partialPivLu().solve(I);
    }
    sum /= static_cast<double>(nodes);
    if (nodes > 32 && (sum - prev).cwiseAbs().maxCoeff() < 1e-13) return sum;
    prev = std::move(sum);
  }
  throw QuadratureError("eigenprojector quadrature did not converge");
}

struct Cluster {
  Complex centre;
  int multiplicity = 0;
};

std::vector<Cluster> cluster_spectrum(const std::vector<Complex>& eig, double scale) {
  std::vector<Cluster> out;
  const double tol = 1e-6 * std::max(1.0, scale);
  for (const auto& z : eig) {
    auto it = std::find_if(out.begin(), out.end(), [&](const Cluster& c) { return std::abs(c.centre - z) < tol; });
    if (it == out.end()) {
      out.push_back({z, 1});
    } else {
      it->centre = (it->centre * static_cast<double>(it->multiplicity) + z) / static_cast<double>(it->multiplicity + 1);
      ++it->multiplicity;
    }
  }
  return out;
}

// Upper bound for ||e^{-sA} P|| / exp(-threshold s): contour around the right part of the spectrum.
double right_part_constant(const CMatrix& A, double threshold, const std::vector<Complex>& eig) {
  const double rho = operator_norm(A) + 1;
  Rectangle r{threshold, std::max(rho, threshold + 1), -rho, rho};
  double d = std::numeric_limits<double>::infinity();
  bool any = false;
  for (const auto& z : eig)
    if (z.real() >= threshold) {
      any = true;
      d = std::min(d, distance_to_rectangle(z, r));
    }
  if (!any) return 0;
  d = std::min(d, 1.0);
  return rectangle_length(r) / (2 * kPi) *
         resolvent_bound(operator_norm(A), rectangle_zmax(r), d, static_cast<int>(A.rows()));
}

Complex head_coord(const CVector& v) { return v(0); }

}  // namespace

void CompanionSystem::validate() const {
  if (A.rows() == 0 || A.rows() != A.cols()) throw std::invalid_argument("A must be a nonempty square matrix");
  if (!A.allFinite()) throw std::invalid_argument("A must be finite");
  if (!remainder) throw std::invalid_argument("remainder function missing");
  if (!(bound.C_R >= 0) || !(bound.rate > 0)) throw std::invalid_argument("remainder bound needs C_R >= 0 and rate > 0");
  if (!(r > 0)) throw std::invalid_argument("r must be positive");
  if (!(c0 > 0)) throw std::invalid_argument("c0 must be positive");
}

std::pair<Complex, Complex> rank_one_eigenvalues(Complex c) {
  const Complex mu = std::sqrt(Complex(1) + c);
  return {Complex(-1) + mu, Complex(-1) - mu};
}

CompanionSystem build_rank_one_system(Complex c, std::function<Complex(double)> r_of_t, double C_R,
                                      double r, double c0) {
  if (!r_of_t) throw std::invalid_argument("remainder function missing");
  CompanionSystem s;
  s.A.resize(2, 2);
  s.A << 0, 1, c, -2;
  s.remainder = [f = std::move(r_of_t)](double t) {
    CVector v(2);
    v << 0, f(t);
    return v;
  };
  s.bound = {C_R, r + c0};
  s.r = r;
  s.c0 = c0;
  const auto [lp, lm] = rank_one_eigenvalues(c);
  s.eigenvalues = {lp, lm};
  s.validate();
  return s;
}

double operator_norm(const CMatrix& A) {
  if (A.size() == 0) return 0;
  Eigen::JacobiSVD<CMatrix> svd(A);
  return svd.singularValues()(0);
}

double gelfand_shilov_bound(const CMatrix& A, double t) {
  if (t < 0) return std::numeric_limits<double>::infinity();
  double sigma = -std::numeric_limits<double>::infinity();
  for (const auto& z : spectrum(A)) sigma = std::max(sigma, z.real());
  const double x = t * A.norm();
  double term = 1, sum = 1;
  for (int k = 1; k < A.rows(); ++k) {
    term *= x / k;
    sum += term;
  }
  return std::exp(sigma * t) * sum;
}

MatrixExponential matrix_exp(const CMatrix& A, double t) {
  if (A.rows() != A.cols()) throw std::invalid_argument("matrix_exp needs a square matrix");
  MatrixExponential out;
  out.value = expm(t * A);
  out.norm = operator_norm(out.value);
  out.bound = gelfand_shilov_bound(A, t);
  if (t >= 0 && out.norm > out.bound * (1 + 1e-12) + 1e-15)
    throw InvariantViolation("Gelfand-Shilov bound violated: " + std::to_string(out.norm) + " > " +
                             std::to_string(out.bound));
  return out;
}

double lemma_constant(double nu, int N) {
  if (!(nu > 0 && nu <= 1)) throw std::invalid_argument("lemma constant needs 0 < nu <= 1");
  return 4 / kPi * N * std::pow(1 + std::numbers::sqrt2, N - 1) * std::pow(2 / nu, N);
}

SpectralSplit spectral_projection(const CMatrix& A, double threshold, double nu) {
  if (A.rows() == 0 || A.rows() != A.cols()) throw std::invalid_argument("A must be square");
  if (!(nu > 0)) throw std::invalid_argument("nu must be positive");
  const int n = static_cast<int>(A.rows());
  const std::vector<Complex> eig = spectrum(A);
  SpectralSplit out;
  out.threshold = threshold;
  out.delta = std::numeric_limits<double>::infinity();
  for (const auto& z : eig) {
    const double gap = std::fabs(z.real() - threshold);
    if (gap < nu / 2)
      throw GapViolation("eigenvalue " + std::to_string(z.real()) + " lies within nu/2 of threshold " +
                         std::to_string(threshold));
    out.delta = std::min(out.delta, gap);
  }
  const double normA = operator_norm(A);
  const double rho = normA + 1;
  out.contour = {-rho, threshold, -rho, rho};
  const double nu_lemma = std::min(nu, 1.0);
  out.lemma_constant = lemma_constant(nu_lemma, n);
  out.lemma_bound = out.lemma_constant * std::pow(rho, n);
  if (threshold <= -rho) {
    out.P = CMatrix::Zero(n, n);
    out.panels = 0;
    return out;
  }
  CMatrix prev = contour_projection(A, out.contour, 4);
  for (int panels = 8; panels <= kMaxPanels; panels *= 2) {
    CMatrix cur = contour_projection(A, out.contour, panels);
    if ((cur - prev).cwiseAbs().maxCoeff() < kProjectionTol) {
      out.P = std::move(cur);
      out.panels = panels;
      out.norm_P = operator_norm(out.P);
      if (threshold <= rho && out.norm_P > out.lemma_bound)
        throw InvariantViolation("projection norm exceeds the matrix-lemma bound");
      return out;
    }
    prev = std::move(cur);
  }
  throw QuadratureError("contour quadrature did not settle within " + std::to_string(kMaxPanels) + " panels");
}

double choose_delta(const CMatrix& A, double r, double c0) {
  if (!(c0 > 0)) throw std::invalid_argument("c0 must be positive");
  std::vector<double> pts;
  for (const auto& z : spectrum(A)) pts.push_back(-z.real());
  const double lo = c0 / 4, hi = c0 / 2;
  // x = r + c0 - delta ranges over [r + c0/2, r + 3c0/4]
  auto dist = [&](double delta) {
    const double x = r + c0 - delta;
    double d = std::numeric_limits<double>::infinity();
    for (double p : pts) d = std::min(d, std::fabs(x - p));
    return d;
  };
  // dist is piecewise linear with kinks at the breakpoints and their midpoints
  std::vector<double> bps;
  for (double p : pts) bps.push_back(r + c0 - p);
  std::sort(bps.begin(), bps.end());
  std::vector<double> cands = {lo, hi};
  for (std::size_t i = 0; i + 1 < bps.size(); ++i) {
    const double m = 0.5 * (bps[i] + bps[i + 1]);
    if (m >= lo && m <= hi) cands.push_back(m);
  }
  double best = lo, bestd = -1;
  for (double c : cands) {
    const double d = dist(c);
    if (d > bestd) {
      bestd = d;
      best = c;
    }
  }
  return best;
}

Trajectory solve_inhomogeneous(const CompanionSystem& system, const CVector& phi0, double T,
                               double step) {
  system.validate();
  if (!(T > 0)) throw std::invalid_argument("T must be positive");
  if (!(step > 0)) throw std::invalid_argument("step must be positive");
  if (phi0.size() != system.N()) throw std::invalid_argument("phi0 has the wrong dimension");
  Trajectory out;
  const auto count = static_cast<long>(std::floor(T / step + 1e-9));
  for (long k = 0; k <= count; ++k) {
    const double t = k * step;
    CVector value = expm(t * system.A) * phi0;
    if (t > 0) {
      auto integrand = [&](double s) -> CVector { return expm((t - s) * system.A) * system.remainder(s); };
      value += integrate(integrand, 0.0, t, 1e-10, 1e-12).value;
    }
    out.t.push_back(t);
    out.phi.push_back(std::move(value));
  }
  return out;
}

Complex ConstantTermFn::operator()(double t) const {
  Complex v = 0;
  for (std::size_t i = 0; i < exponents.size(); ++i) {
    Complex poly = 0, power = 1;
    for (const auto& c : coeffs[i]) {
      poly += c * power;
      power *= t;
    }
    v += poly * std::exp(-exponents[i] * t);
  }
  return v;
}

CVector ConstantTermFn::vector_value(double t) const {
  CVector v = CVector::Zero(u.size());
  for (std::size_t i = 0; i < exponents.size(); ++i) {
    CVector poly = CVector::Zero(u.size());
    Complex power = 1;
    for (const auto& c : vector_coeffs[i]) {
      poly += power * c;
      power *= t;
    }
    v += std::exp(-exponents[i] * t) * poly;
  }
  return v;
}

Complex ConstantTermFn::direct(double t) const { return head_coord(expm(t * A) * u); }

double ConstantTermFn::coefficient_size(std::size_t i) const {
  double m = 0;
  for (const auto& c : coeffs.at(i)) m = std::max(m, std::abs(c));
  return m;
}

std::vector<std::size_t> ConstantTermFn::forced_zero(double r) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < exponents.size(); ++i)
    if (exponents[i].real() < r) out.push_back(i);
  return out;
}

ConstantTermFn ConstantTermFn::pruned(double r, double tol) const {
  ConstantTermFn out = *this;
  for (auto i : forced_zero(r)) {
    if (coefficient_size(i) > tol)
      throw InvariantViolation("coefficient of a forced exponent is " + std::to_string(coefficient_size(i)));
    for (auto& c : out.coeffs[i]) c = 0;
    for (auto& v : out.vector_coeffs[i]) v.setZero();
  }
  return out;
}

ConstantTermFn constant_term(const CompanionSystem& system, const CVector& phi0) {
  system.validate();
  const int n = system.N();
  if (phi0.size() != n) throw std::invalid_argument("phi0 has the wrong dimension");
  const std::vector<Complex> eig = spectrum(system.A);
  ConstantTermFn ct;
  ct.A = system.A;
  ct.delta = choose_delta(system.A, system.r, system.c0);
  const double threshold = -(system.r + system.c0 - ct.delta);
  double gap = std::numeric_limits<double>::infinity();
  for (const auto& z : eig) gap = std::min(gap, std::fabs(z.real() - threshold));
  if (gap < 1e-6) throw GapViolation("no spectral gap near the projection threshold");
  const SpectralSplit split = spectral_projection(system.A, threshold, std::min(1.0, 2 * gap));
  const CMatrix I = CMatrix::Identity(n, n);
  ct.P = I - split.P;
  std::tie(ct.VP, ct.BP) = restrict_to_range(system.A, ct.P);
  std::tie(ct.VQ, ct.BQ) = restrict_to_range(system.A, split.P);

  // integrand norm <= M C_R exp(-(rate + threshold) s)
  const double gamma = system.bound.rate + threshold;
  const double M = right_part_constant(system.A, threshold, eig);
  if (M > 0 && system.bound.C_R > 0) {
    if (!(gamma > 0))
      throw CertificateViolation("remainder rate " + std::to_string(system.bound.rate) +
                                 " does not beat the growth rate " + std::to_string(-threshold));
    const double scale = M * system.bound.C_R / gamma;
    ct.truncation = std::max(1.0, std::log(std::max(scale, 1.0) / kTruncationTol) / gamma);
    const CMatrix proj = ct.VP.adjoint() * ct.P;
    auto integrand = [&](double s) -> CVector { return ct.VP * (expm(-s * ct.BP) * (proj * system.remainder(s))); };
    ct.u = phi0 + integrate(integrand, 0.0, ct.truncation, 1e-13, 1e-12, 200000).value;
  } else {
    ct.u = phi0;
  }

  std::vector<Cluster> clusters;
  if (!system.eigenvalues.empty()) {
    clusters = cluster_spectrum(system.eigenvalues, operator_norm(system.A));
  } else {
    clusters = cluster_spectrum(eig, operator_norm(system.A));
  }
  for (std::size_t i = 0; i < clusters.size(); ++i) {
    double radius = 1;
    for (std::size_t j = 0; j < clusters.size(); ++j)
      if (j != i) radius = std::min(radius, 0.5 * std::abs(clusters[i].centre - clusters[j].centre));
    const CVector ul = circle_projection(system.A, clusters[i].centre, radius) * ct.u;
    std::vector<Complex> c;
    std::vector<CVector> vc;
    CVector v = ul;
    double fact = 1;
    for (int k = 0; k < clusters[i].multiplicity; ++k) {
      if (k > 0) fact *= k;
      c.push_back(head_coord(v) / fact);
      vc.push_back(v / fact);
      v = (system.A - clusters[i].centre * I) * v;
    }
    ct.exponents.push_back(-clusters[i].centre);
    ct.coeffs.push_back(std::move(c));
    ct.vector_coeffs.push_back(std::move(vc));
  }
  return ct;
}

CVector deviation(const CompanionSystem& system, const ConstantTermFn& ct, double t) {
  if (!(t >= 0)) throw std::invalid_argument("t must be nonnegative");
  const int n = system.N();
  CVector out = CVector::Zero(n);
  const double scale = system.bound.C_R * std::exp(-system.bound.rate * t);
  if (scale == 0) return out;
  if (ct.VP.cols() > 0 && ct.truncation > 0) {
    const CMatrix proj = ct.VP.adjoint() * ct.P;
    auto f1 = [&](double s) -> CVector { return ct.VP * (expm(-s * ct.BP) * (proj * system.remainder(s + t))); };
    out -= integrate(f1, 0.0, ct.truncation, 1e-15 * scale, 1e-12, 200000).value;
  }
  if (ct.VQ.cols() > 0 && t > 0) {
    const CMatrix proj = ct.VQ.adjoint() * (CMatrix::Identity(n, n) - ct.P);
    auto f2 = [&](double s) -> CVector { return ct.VQ * (expm(s * ct.BQ) * (proj * system.remainder(t - s))); };
    out += integrate(f2, 0.0, t, 1e-15 * system.bound.C_R, 1e-12, 200000).value;
  }
  return out;
}

std::vector<CVector> deviation_trajectory(const CompanionSystem& system, const ConstantTermFn& ct,
                                          double T, double step) {
  if (!(T > 0) || !(step > 0)) throw std::invalid_argument("T and step must be positive");
  const int n = system.N();
  const auto count = static_cast<std::size_t>(std::floor(T / step + 1e-9));
  std::vector<CVector> out(count + 1, CVector::Zero(n));

  std::vector<double> xs, ws;
  for (std::size_t j = 0; j < Gauss::abscissa().size(); ++j) {
    for (int s : {-1, 1}) {
      if (Gauss::abscissa()[j] == 0 && s == 1) continue;
      xs.push_back(s * Gauss::abscissa()[j]);
      ws.push_back(Gauss::weights()[j]);
    }
  }
  const CMatrix I = CMatrix::Identity(n, n);

  if (ct.VQ.cols() > 0) {
    const CMatrix proj = ct.VQ.adjoint() * (I - ct.P);
    const CMatrix E = expm(step * ct.BQ);
    std::vector<CMatrix> F;
    for (double x : xs) F.push_back(expm(0.5 * step * (1 - x) * ct.BQ) * proj);
    CVector y = CVector::Zero(ct.VQ.cols());
    for (std::size_t k = 0; k < count; ++k) {
      const double t = k * step;
      CVector inc = CVector::Zero(y.size());
      for (std::size_t j = 0; j < xs.size(); ++j) inc += ws[j] * (F[j] * system.remainder(t + 0.5 * step * (1 + xs[j])));
      y = E * y + 0.5 * step * inc;
      out[k + 1] += ct.VQ * y;
    }
  }

  if (ct.VP.cols() > 0 && ct.truncation > 0) {
    const CMatrix proj = ct.VP.adjoint() * ct.P;
    const double t_end = count * step;
    const double scale = std::max(system.bound.C_R, 1e-300);
    auto tail = [&](double s) -> CVector { return expm(-s * ct.BP) * (proj * system.remainder(s + t_end)); };
    CVector z = integrate(tail, 0.0, ct.truncation, 1e-15 * scale * std::exp(-system.bound.rate * t_end), 1e-12, 200000).value;
    const CMatrix E = expm(-step * ct.BP);
    std::vector<CMatrix> F;
    for (double x : xs) F.push_back(expm(-0.5 * step * (1 + x) * ct.BP) * proj);
    out[count] -= ct.VP * z;
    for (std::size_t k = count; k-- > 0;) {
      const double t = k * step;
      CVector inc = CVector::Zero(z.size());
      for (std::size_t j = 0; j < xs.size(); ++j) inc += ws[j] * (F[j] * system.remainder(t + 0.5 * step * (1 + xs[j])));
      z = E * z + 0.5 * step * inc;
      out[k] -= ct.VP * z;
    }
  }
  return out;
}

Trajectory stable_trajectory(const CompanionSystem& system, const ConstantTermFn& ct, double T,
                             double step) {
  const std::vector<CVector> dev = deviation_trajectory(system, ct, T, step);
  Trajectory out;
  for (std::size_t k = 0; k < dev.size(); ++k) {
    const double t = k * step;
    out.t.push_back(t);
    out.phi.push_back(ct.vector_value(t) + dev[k]);
  }
  return out;
}

double decay_verify(const Trajectory& trajectory, const ConstantTermFn& ct, double r, double c0) {
  const std::size_t n = trajectory.t.size();
  if (n < 4 || trajectory.phi.size() != n) throw std::invalid_argument("trajectory too short");
  if (trajectory.t.back() < 10 / (r + c0 / 2))
    throw std::invalid_argument("trajectory must reach t = 10 / (r + c0/2)");
  std::vector<double> dev(n);
  for (std::size_t k = 0; k < n; ++k) dev[k] = std::abs(head_coord(trajectory.phi[k]) - ct(trajectory.t[k]));
  // suffix maximum: a monotone envelope insensitive to zeros of oscillating deviations
  for (std::size_t k = n - 1; k-- > 0;) dev[k] = std::max(dev[k], dev[k + 1]);
  std::vector<double> xs, ys;
  for (std::size_t k = n / 2; k < n; ++k)
    if (dev[k] > kNoiseFloor) {
      xs.push_back(trajectory.t[k]);
      ys.push_back(std::log(dev[k]));
    }
  if (xs.size() < 2) return std::numeric_limits<double>::infinity();
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= static_cast<double>(xs.size());
  my /= static_cast<double>(xs.size());
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  return -sxy / sxx;
}

CertifiedSystem certified_rank_one(Complex c, double r, double c0, Complex w, const CVector& seed) {
  if (seed.size() != 2) throw std::invalid_argument("seed must have two entries");
  const double k = r + c0;
  CertifiedSystem out;
  out.c = c;
  out.system = build_rank_one_system(
      c, [w, k](double t) { return w * std::exp(-k * t); }, std::abs(w), r, c0);
  const CMatrix& A = out.system.A;
  const CMatrix I = CMatrix::Identity(2, 2);

  // u = projection of the seed onto eigenvalues with Re lambda <= -r
  const auto [lp, lm] = rank_one_eigenvalues(c);
  CVector u = CVector::Zero(2);
  const bool slow_p = lp.real() <= -r, slow_m = lm.real() <= -r;
  if (slow_p && slow_m) {
    u = seed;
  } else if (slow_p || slow_m) {
    const Complex keep = slow_p ? lp : lm, drop = slow_p ? lm : lp;
    u = (A - drop * I) * seed / (keep - drop);
  }

  const double delta = choose_delta(A, r, c0);
  const double threshold = -(r + c0 - delta);
  double gap = std::numeric_limits<double>::infinity();
  for (const auto& z : {lp, lm}) gap = std::min(gap, std::fabs(z.real() - threshold));
  const CMatrix P = I - spectral_projection(A, threshold, std::min(1.0, 2 * gap)).P;
  const auto [VP, BP] = restrict_to_range(A, P);
  CVector wv(2);
  wv << 0, w;
  CVector shift = CVector::Zero(2);
  if (VP.cols() > 0) {
    const CMatrix shifted = BP + k * CMatrix::Identity(BP.rows(), BP.cols());
    shift = VP * shifted.partialPivLu().solve(VP.adjoint() * (P * wv));
  }
  out.phi0 = u - shift;
  return out;
}

}  // namespace wavecount::ct
