#include "wavecount/euclid_count.hpp"

#include "wavecount/quadrature.hpp"
#include "wavecount/special.hpp"

#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/beta.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <numeric>
#include <string>

namespace wavecount::euclid {

namespace {

constexpr double kPi = std::numbers::pi;

using i128 = __int128;

std::int64_t to_int64(const Rational& q) {
  if (q.get_den() != 1) throw std::logic_error("to_int64: not an integer");
  if (!q.get_num().fits_slong_p()) throw std::overflow_error("lattice basis entries too large");
  return q.get_num().get_si();
}

// Fraction of S^{n-1} (normalised surface measure) where the first coordinate exceeds kappa.
double cap_fraction(int n, double kappa) {
  if (kappa >= 1) return 0;
  if (kappa <= -1) return 1;
  switch (n) {
    case 1:
      return 0.5;
    case 2:
      return std::acos(kappa) / kPi;
    case 3:
      return 0.5 * (1 - kappa);
    default: {
      const double k = std::fabs(kappa);
      const double half = 0.5 * boost::math::ibeta(0.5 * (n - 1), 0.5, 1 - k * k);
      return kappa >= 0 ? half : 1 - half;
    }
  }
}

double standard_bump(double rho) {
  if (rho >= 1) return 0;
  return std::exp(-1 / (1 - rho * rho));
}

struct StandardTables {
  std::mutex mutex;
  std::map<int, std::shared_ptr<void>> by_dim;
};

StandardTables& standard_tables() {
  static StandardTables t;
  return t;
}

}  // namespace

// ---------------------------------------------------------------- lattice

IntegerLattice::Generator IntegerLattice::make_generator(const RatMatrix& basis) {
  Generator g;
  g.n = static_cast<int>(basis.rows());
  mpz_class denom = 1;
  for (std::size_t i = 0; i < basis.rows(); ++i)
    for (std::size_t j = 0; j < basis.cols(); ++j) {
      mpz_class d = basis(i, j).get_den();
      mpz_lcm(denom.get_mpz_t(), denom.get_mpz_t(), d.get_mpz_t());
    }
  if (!denom.fits_slong_p()) throw std::overflow_error("lattice basis denominators too large");
  g.denom = denom.get_si();
  g.scaled.resize(static_cast<std::size_t>(g.n) * g.n);
  Eigen::MatrixXd real(g.n, g.n);
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j) {
      Rational v = basis(i, j) * Rational(denom);
      g.scaled[static_cast<std::size_t>(j) * g.n + i] = to_int64(v);
      real(i, j) = basis(i, j).get_d();
    }
  g.inverse = real.inverse();
  return g;
}

IntegerLattice IntegerLattice::standard(int n) {
  if (n < 1) throw std::invalid_argument("lattice dimension must be positive");
  return from_basis(RatMatrix::identity(static_cast<std::size_t>(n)));
}

IntegerLattice IntegerLattice::from_basis(const RatMatrix& basis) {
  if (basis.rows() != basis.cols() || basis.rows() == 0)
    throw std::invalid_argument("lattice basis must be a nonempty square matrix");
  IntegerLattice L;
  L.n_ = static_cast<int>(basis.rows());
  L.basis_ = basis;
  Rational det = determinant(basis);
  if (det == 0) throw std::domain_error("lattice basis is singular");
  L.dual_ = inverse(basis).transpose();
  L.primal_ = make_generator(L.basis_);
  L.dual_gen_ = make_generator(L.dual_);
  L.covolume_ = std::fabs(det.get_d());
  double r = 0;
  for (int j = 0; j < L.n_; ++j) {
    double s = 0;
    for (int i = 0; i < L.n_; ++i) {
      const double v = L.dual_(i, j).get_d();
      s += v * v;
    }
    r += std::sqrt(s);
  }
  L.dual_cell_radius_ = 0.5 * r;
  return L;
}

template <class Visit>
void IntegerLattice::enumerate(const Generator& g, double radius, bool inclusive,
                               std::uint64_t budget, Visit&& visit) {
  const int n = g.n;
  if (!(radius >= 0) || !std::isfinite(radius)) throw std::invalid_argument("radius must be finite");
  std::vector<std::int64_t> m(n);
  long double candidates = 1;
  for (int i = 0; i < n; ++i) {
    const double reach = g.inverse.row(i).norm() * radius;
    m[i] = static_cast<std::int64_t>(std::floor(reach * (1 + 1e-12) + 1e-12));
    candidates *= static_cast<long double>(2 * m[i] + 1);
  }
  if (candidates > static_cast<long double>(budget))
    throw BudgetExceeded("enumeration needs " + std::to_string(static_cast<double>(candidates)) +
                         " candidates, budget is " + std::to_string(budget));

  const long double lim = static_cast<long double>(radius) * g.denom;
  const long double lim2 = lim * lim;
  const std::int64_t* B = g.scaled.data();

  std::vector<std::int64_t> c(n), y(n, 0);
  for (int i = 0; i < n; ++i) {
    c[i] = -m[i];
    for (int r = 0; r < n; ++r) y[r] += B[static_cast<std::size_t>(i) * n + r] * c[i];
  }
  for (;;) {
    for (std::int64_t k = -m[0]; k <= m[0]; ++k) {
      i128 s = 0;
      for (int r = 0; r < n; ++r) s += static_cast<i128>(y[r]) * y[r];
      const long double ls = static_cast<long double>(s);
      if (inclusive ? ls <= lim2 : ls < lim2) visit(y.data(), s);
      for (int r = 0; r < n; ++r) y[r] += B[r];
    }
    for (int r = 0; r < n; ++r) y[r] -= (2 * m[0] + 1) * B[r];
    int i = 1;
    for (; i < n; ++i) {
      const std::int64_t* col = B + static_cast<std::size_t>(i) * n;
      if (c[i] < m[i]) {
        ++c[i];
        for (int r = 0; r < n; ++r) y[r] += col[r];
        break;
      }
      for (int r = 0; r < n; ++r) y[r] -= 2 * m[i] * col[r];
      c[i] = -m[i];
    }
    if (i == n) break;
  }
}

void IntegerLattice::for_each_point_in_ball(
    double radius, std::uint64_t budget,
    const std::function<void(std::span<const double>, double)>& visit) const {
  std::vector<double> x(n_);
  const double d = static_cast<double>(primal_.denom);
  enumerate(primal_, radius, false, budget, [&](const std::int64_t* y, i128 s) {
    for (int r = 0; r < n_; ++r) x[r] = static_cast<double>(y[r]) / d;
    visit(x, static_cast<double>(s) / (d * d));
  });
}

void IntegerLattice::for_each_dual_point_in_ball(
    double radius, std::uint64_t budget,
    const std::function<void(std::span<const double>, double)>& visit) const {
  std::vector<double> x(n_);
  const double d = static_cast<double>(dual_gen_.denom);
  enumerate(dual_gen_, radius, false, budget, [&](const std::int64_t* y, i128 s) {
    for (int r = 0; r < n_; ++r) x[r] = static_cast<double>(y[r]) / d;
    visit(x, static_cast<double>(s) / (d * d));
  });
}

std::uint64_t IntegerLattice::count_points(double radius, std::uint64_t budget) const {
  std::uint64_t count = 0;
  enumerate(primal_, radius, false, budget, [&](const std::int64_t*, i128) { ++count; });
  return count;
}

// ---------------------------------------------------------------- mollifier

struct RadialMollifier::FourierTable {
  std::mutex mutex;
  std::vector<double> xi;
  std::vector<double> value;
  std::vector<double> suffix;  // suffix max of |value|
  bool terminal = false;
  double step = 1e-4;
  double end_level = 0;
};

namespace {
constexpr double kFourierQuadTol = 1e-13;
constexpr double kFourierMidpointTol = 2e-9;
constexpr double kFourierTerminalLevel = 1e-12;
constexpr double kFourierHardLimit = 1e5;
}  // namespace

RadialMollifier::RadialMollifier(int n, double epsilon)
    : RadialMollifier(n, epsilon, standard_bump) {
  std::lock_guard<std::mutex> lock(standard_tables().mutex);
  auto& slot = standard_tables().by_dim[n];
  if (!slot) slot = cache_;
  cache_ = std::static_pointer_cast<FourierTable>(slot);
}

RadialMollifier::RadialMollifier(int n, double epsilon, std::function<double(double)> radial_profile)
    : n_(n), epsilon_(epsilon) {
  if (n < 1) throw std::invalid_argument("mollifier dimension must be positive");
  if (!(epsilon > 0) || !std::isfinite(epsilon))
    throw std::invalid_argument("mollifier epsilon must be positive");
  if (!radial_profile) throw std::invalid_argument("mollifier profile is empty");
  auto raw = std::make_shared<std::function<double(double)>>(
      [f = std::move(radial_profile)](double rho) { return rho >= 1 ? 0.0 : f(rho); });
  for (int i = 0; i < 1000; ++i)
    if ((*raw)(i / 1000.0) < 0) throw std::invalid_argument("mollifier profile must be nonnegative");
  raw_profile_ = raw;
  const double area = unit_sphere_area(n);
  auto mass = integrate([&](double r) { return area * (*raw)(r) * std::pow(r, n - 1); }, 0.0, 1.0,
                        1e-16, 1e-15);
  if (!(mass.value > 0)) throw std::invalid_argument("mollifier profile has zero mass");
  normaliser_ = mass.value;
  cache_ = std::make_shared<FourierTable>();
}

RadialMollifier RadialMollifier::with_epsilon(double epsilon) const {
  if (!(epsilon > 0) || !std::isfinite(epsilon))
    throw std::invalid_argument("mollifier epsilon must be positive");
  RadialMollifier copy = *this;
  copy.epsilon_ = epsilon;
  return copy;
}

double RadialMollifier::profile(double radius) const {
  return (*raw_profile_)(std::fabs(radius)) / normaliser_;
}

double RadialMollifier::mass() const {
  const double area = unit_sphere_area(n_);
  return integrate([&](double r) { return area * profile(r) * std::pow(r, n_ - 1); }, 0.0, 1.0,
                   1e-16, 1e-15)
      .value;
}

double RadialMollifier::fourier_direct(double xi) const {
  xi = std::fabs(xi);
  if (n_ == 1) {
    return integrate([&](double r) { return 2 * profile(r) * std::cos(xi * r); }, 0.0, 1.0,
                     kFourierQuadTol)
        .value;
  }
  const double nu = 0.5 * n_ - 1;
  const double scale = unit_sphere_area(n_) * std::tgamma(0.5 * n_) * std::pow(2.0, nu);
  try {
    return integrate(
               [&](double r) {
                 const double x = xi * r;
                 // the seam evaluator is too noisy for a 1e-13 quadrature
                 const double j = x < 1e-8 ? 1 / (std::pow(2.0, nu) * std::tgamma(nu + 1))
                                           : boost::math::cyl_bessel_j(nu, x) / std::pow(x, nu);
                 return scale * profile(r) * std::pow(r, n_ - 1) * j;
               },
               0.0, 1.0, kFourierQuadTol, 0.0, 100000)
        .value;
  } catch (const QuadratureError& e) {
    throw QuadratureError("mollifier Fourier transform at xi = " + std::to_string(xi) + ": " + e.what());
  }
}

void RadialMollifier::extend_cache_locked(FourierTable& t, double xi_max) const {
  if (t.xi.empty()) {
    t.xi.push_back(0);
    t.value.push_back(fourier_direct(0));
  }
  const std::size_t before = t.xi.size();
  double h = t.step;
  int since_check = 0;
  while (!t.terminal && t.xi.back() < xi_max) {
    if (t.xi.back() > kFourierHardLimit)
      throw std::runtime_error("mollifier Fourier transform does not decay within the cache limit");
    const double a = t.xi.back(), fa = t.value.back();
    for (;;) {
      const double b = a + h, mid = a + 0.5 * h;
      const double fb = fourier_direct(b), fm = fourier_direct(mid);
      const double err = std::fabs(fm - 0.5 * (fa + fb));
      if (err > kFourierMidpointTol && h > 1e-7) {
        h *= 0.5;
        continue;
      }
      t.xi.push_back(mid);
      t.value.push_back(fm);
      t.xi.push_back(b);
      t.value.push_back(fb);
      if (err < 0.1 * kFourierMidpointTol) h = std::min(1.5 * h, 0.5);
      break;
    }
    if (++since_check >= 32 && t.xi.back() > 20) {
      since_check = 0;
      double window = 0;
      const double from = t.xi.back() - 4 * kPi;
      for (std::size_t i = t.xi.size(); i-- > 0 && t.xi[i] >= from;)
        window = std::max(window, std::fabs(t.value[i]));
      if (window < kFourierTerminalLevel) {
        t.terminal = true;
        t.end_level = 1.05 * window + kFourierQuadTol;
      }
    }
  }
  t.step = h;
  if (t.xi.size() != before || t.suffix.size() != t.xi.size()) {
    t.suffix.assign(t.xi.size(), 0);
    double m = 0;
    for (std::size_t i = t.xi.size(); i-- > 0;) {
      m = std::max(m, std::fabs(t.value[i]));
      t.suffix[i] = m;
    }
  }
}

void RadialMollifier::ensure_fourier_cache(double xi_max) const {
  std::lock_guard<std::mutex> lock(cache_->mutex);
  extend_cache_locked(*cache_, xi_max);
}

double RadialMollifier::fourier_cache_extent() const {
  std::lock_guard<std::mutex> lock(cache_->mutex);
  return cache_->xi.empty() ? 0.0 : cache_->xi.back();
}

std::size_t RadialMollifier::fourier_cache_size() const {
  std::lock_guard<std::mutex> lock(cache_->mutex);
  return cache_->xi.size();
}

double RadialMollifier::fourier(double xi) const {
  xi = std::fabs(xi);
  std::lock_guard<std::mutex> lock(cache_->mutex);
  FourierTable& t = *cache_;
  if (t.xi.empty() || (!t.terminal && xi > t.xi.back())) extend_cache_locked(t, 1.1 * xi + 1);
  if (xi >= t.xi.back()) return 0.0;
  auto it = std::upper_bound(t.xi.begin(), t.xi.end(), xi);
  const std::size_t j = static_cast<std::size_t>(it - t.xi.begin());
  const std::size_t i = j - 1;
  const double w = (xi - t.xi[i]) / (t.xi[j] - t.xi[i]);
  return (1 - w) * t.value[i] + w * t.value[j];
}

double RadialMollifier::fourier_envelope(double xi) const {
  xi = std::fabs(xi);
  std::lock_guard<std::mutex> lock(cache_->mutex);
  FourierTable& t = *cache_;
  extend_cache_locked(t, std::numeric_limits<double>::infinity());
  const double end = t.xi.back();
  if (xi >= end) return t.end_level * std::pow((1 + end) / (1 + xi), n_ + 1);
  auto it = std::upper_bound(t.xi.begin(), t.xi.end(), xi);
  const std::size_t i = static_cast<std::size_t>(it - t.xi.begin()) - 1;
  return std::max(1.05 * t.suffix[i] + kFourierQuadTol, t.end_level);
}

double RadialMollifier::smoothed_indicator(double R, double s) const {
  s = std::fabs(s);
  const double eps = epsilon_;
  if (s <= R - eps) return 1.0;
  if (s >= R + eps) return 0.0;
  const double area = unit_sphere_area(n_);
  const bool outside = s >= R;
  // Only radii rho with eps*rho > |s - R| see both sides of the sphere.
  const double start = std::min(1.0, std::fabs(s - R) / eps);
  auto integrand = [&](double rho) {
    if (rho <= 0) return 0.0;
    const double er = eps * rho;
    const double kappa = ((s - R) * (s + R) + er * er) / (2 * s * er);
    const double inside_fraction = cap_fraction(n_, kappa);
    const double weight = area * profile(rho) * std::pow(rho, n_ - 1);
    return weight * (outside ? inside_fraction : 1 - inside_fraction);
  };
  // rho = start + (1 - start) u^2 absorbs the square-root edge of the cap at rho = start.
  const double span = 1 - start;
  auto smooth = [&](double u) { return 2 * span * u * integrand(start + span * u * u); };
  double v = 0;
  if (start < 1) v = integrate(smooth, 0.0, 1.0, 1e-14, 1e-13, 100000).value;
  v = std::clamp(v, 0.0, 1.0);
  return outside ? v : 1 - v;
}

// ---------------------------------------------------------------- counting

CountRecord make_record(int n, double R, std::uint64_t exact, double smoothed, double epsilon) {
  CountRecord rec;
  rec.R = R;
  rec.exact_count = exact;
  rec.smoothed_count = smoothed;
  rec.ball_volume = ball_volume(n, R);
  rec.error = static_cast<double>(exact) - rec.ball_volume;
  rec.epsilon = epsilon;
  return rec;
}

std::uint64_t count_exact(const IntegerLattice& lattice, double R, std::uint64_t budget) {
  if (!(R > 0) || !std::isfinite(R)) throw std::invalid_argument("R must be positive");
  return lattice.count_points(R, budget);
}

double ball_fourier(int n, double R, double lambda_norm) {
  if (n < 1) throw std::invalid_argument("ball_fourier: dimension must be positive");
  if (!(R > 0)) throw std::invalid_argument("ball_fourier: R must be positive");
  lambda_norm = std::fabs(lambda_norm);
  if (lambda_norm == 0) return ball_volume(n, R);
  const double x = R * lambda_norm;
  const double v = std::pow(2 * kPi, 0.5 * n) * std::pow(R, n) * bessel_j_scaled(0.5 * n, x);
  if (!std::isfinite(v)) throw std::overflow_error("ball_fourier: non-finite value");
  return v;
}

double ball_fourier_decay_constant(int n) {
  if (n < 1) throw std::invalid_argument("ball_fourier_decay_constant: dimension must be positive");
  // x (J^2 + Y^2)(x) decreases for nu > 1/2, so sqrt(x0 (J^2+Y^2)(x0)) bounds sqrt(x)|J_nu(x)| for x >= x0;
  // below x0 use |J_nu| <= 1.
  const double nu = 0.5 * n;
  const double x0 = 2 * nu + 2;
  double c = std::sqrt(2 / kPi) * 1.01;
  if (nu > 0.5) {
    const double j = boost::math::cyl_bessel_j(nu, x0), y = boost::math::cyl_neumann(nu, x0);
    c = std::sqrt(x0 * (j * j + y * y)) * 1.001;
  }
  return std::pow(2 * kPi, 0.5 * n) * std::max(c, std::sqrt(x0));
}

double mollified_count(const IntegerLattice& lattice, double R, const RadialMollifier& mollifier,
                       std::uint64_t budget) {
  if (!(R > 0) || !std::isfinite(R)) throw std::invalid_argument("R must be positive");
  if (mollifier.dimension() != lattice.dimension())
    throw std::invalid_argument("mollifier and lattice dimensions differ");
  const double eps = mollifier.epsilon();
  if (!(eps < R)) throw std::invalid_argument("mollified_count requires epsilon < R");
  std::map<double, double> memo;
  double total = 0;
  lattice.for_each_point_in_ball(R + eps, budget, [&](std::span<const double>, double norm2) {
    const double s = std::sqrt(norm2);
    if (s <= R - eps) {
      total += 1.0;
      return;
    }
    auto it = memo.find(norm2);
    if (it == memo.end()) it = memo.emplace(norm2, mollifier.smoothed_indicator(R, s)).first;
    total += it->second;
  });
  return total;
}

double spectral_tail_bound(const IntegerLattice& lattice, double R, const RadialMollifier& mollifier,
                           double dual_cutoff) {
  const int n = lattice.dimension();
  if (n < 2) throw std::invalid_argument("spectral evaluation requires dimension n >= 2");
  const double rho = lattice.dual_cell_radius();
  const double cov = lattice.dual_covolume();
  const double K = ball_fourier_decay_constant(n);
  const double eps = mollifier.epsilon();
  const double vol = ball_volume(n, R);
  const double width = std::max(4 * rho, 0.25);
  double total = 0;
  double a = dual_cutoff;
  for (int shell = 0; shell < 10'000'000; ++shell) {
    const double b = a + width;
    const double count =
        (ball_volume(n, b + rho) - ball_volume(n, std::max(a - rho, 0.0))) / cov;
    const double lambda = 2 * kPi * a;
    const double fb = a > 0 ? std::min(vol, K * std::pow(R, 0.5 * (n - 1)) *
                                                std::pow(lambda, -0.5 * (n + 1)))
                            : vol;
    const double term = count * fb * mollifier.fourier_envelope(eps * lambda);
    total += term;
    // past the cache the terms decay at least like a^{-5/2}, so the rest is below term * a / width
    if (a > 2 * dual_cutoff + 10 && term * (a / width) < 1e-17) {
      total += term * (a / width);
      break;
    }
    a = b;
  }
  return total;
}

namespace {

SpectralCount spectral_sum(const IntegerLattice& lattice, double R, const RadialMollifier& mollifier,
                           double cutoff, double tail, std::uint64_t budget) {
  const int n = lattice.dimension();
  const double eps = mollifier.epsilon();
  mollifier.ensure_fourier_cache(2 * kPi * eps * cutoff * 1.01 + 1);
  SpectralCount out;
  out.cutoff = cutoff;
  out.tail_bound = tail;
  std::map<double, double> memo;
  double sum = 0;
  lattice.for_each_dual_point_in_ball(
      std::nextafter(cutoff, std::numeric_limits<double>::infinity()), budget,
      [&](std::span<const double>, double norm2) {
        if (norm2 == 0 || norm2 > cutoff * cutoff) return;
        ++out.terms;
        auto it = memo.find(norm2);
        if (it == memo.end()) {
          const double lambda = 2 * kPi * std::sqrt(norm2);
          it = memo.emplace(norm2, ball_fourier(n, R, lambda) * mollifier.fourier(eps * lambda)).first;
        }
        sum += it->second;
      });
  out.value = (ball_volume(n, R) + sum) / lattice.covolume();
  return out;
}

void check_spectral_inputs(const IntegerLattice& lattice, double R, const RadialMollifier& mollifier) {
  if (lattice.dimension() < 2)
    throw std::invalid_argument("spectral evaluation requires dimension n >= 2");
  if (mollifier.dimension() != lattice.dimension())
    throw std::invalid_argument("mollifier and lattice dimensions differ");
  if (!(R > 0) || !std::isfinite(R)) throw std::invalid_argument("R must be positive");
}

}  // namespace

SpectralCount poisson_spectral_count(const IntegerLattice& lattice, double R,
                                     const RadialMollifier& mollifier, double dual_cutoff,
                                     std::uint64_t budget) {
  check_spectral_inputs(lattice, R, mollifier);
  if (!(dual_cutoff > 0)) throw std::invalid_argument("dual cutoff must be positive");
  const double tail = spectral_tail_bound(lattice, R, mollifier, dual_cutoff);
  if (!(tail <= kSpectralTailTolerance))
    throw TailBoundError("dual-sum tail bound " + std::to_string(tail) + " at cutoff " +
                         std::to_string(dual_cutoff) + " exceeds tolerance");
  return spectral_sum(lattice, R, mollifier, dual_cutoff, tail, budget);
}

SpectralCount poisson_spectral_count_auto(const IntegerLattice& lattice, double R,
                                          const RadialMollifier& mollifier, std::uint64_t budget) {
  check_spectral_inputs(lattice, R, mollifier);
  double cutoff = std::max(2.0, 2 / mollifier.epsilon());
  double tail = spectral_tail_bound(lattice, R, mollifier, cutoff);
  while (!(tail <= kSpectralTailTolerance)) {
    cutoff *= 1.25;
    if (cutoff > 1e6) throw TailBoundError("dual-sum tail bound does not reach tolerance");
    tail = spectral_tail_bound(lattice, R, mollifier, cutoff);
  }
  return spectral_sum(lattice, R, mollifier, cutoff, tail, budget);
}

double optimal_epsilon(int n, double R) {
  if (n < 2) throw std::invalid_argument("optimal_epsilon requires n >= 2");
  if (!(R > 0)) throw std::invalid_argument("R must be positive");
  return std::pow(R, static_cast<double>(1 - n) / (n + 1));
}

Rational balanced_error_exponent(int n) {
  if (n < 2) throw std::invalid_argument("balanced_error_exponent requires n >= 2");
  Rational q(n * (n - 1), n + 1);
  q.canonicalize();
  return q;
}

std::pair<Rational, Rational> error_term_exponents(int n) {
  if (n < 2) throw std::invalid_argument("error_term_exponents requires n >= 2");
  Rational eps_exp(1 - n, n + 1), half(n - 1, 2);
  eps_exp.canonicalize();
  half.canonicalize();
  const Rational first = half - half * eps_exp;
  const Rational second = Rational(n - 1) + eps_exp;
  Rational a = first, b = second;
  a.canonicalize();
  b.canonicalize();
  return {a, b};
}

double error_exponent_fit(std::span<const double> volumes, std::span<const double> errors,
                          std::span<const double> radii) {
  const std::size_t m = volumes.size();
  if (errors.size() != m || radii.size() != m)
    throw std::invalid_argument("error_exponent_fit: length mismatch");
  if (m < 10) throw std::invalid_argument("error_exponent_fit needs at least 10 records");
  for (std::size_t i = 1; i < m; ++i)
    if (!(radii[i] > radii[i - 1]))
      throw std::invalid_argument("error_exponent_fit: R sequence must be strictly increasing");
  std::vector<double> x(m), y(m);
  double running = 0;
  for (std::size_t i = 0; i < m; ++i) {
    if (!std::isfinite(errors[i]) || !(volumes[i] > 0))
      throw std::invalid_argument("error_exponent_fit: non-finite error or volume");
    running = std::max(running, std::fabs(errors[i]));
    if (running == 0) throw std::invalid_argument("error_exponent_fit: zero error has no logarithm");
    x[i] = std::log(volumes[i]);
    y[i] = std::log(running);
  }
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / m;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / m;
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < m; ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  if (sxx == 0) throw std::invalid_argument("error_exponent_fit: volumes are all equal");
  return sxy / sxx;
}

double error_exponent_fit(std::span<const CountRecord> records) {
  std::vector<double> v, e, r;
  for (const auto& rec : records) {
    v.push_back(rec.ball_volume);
    e.push_back(rec.error);
    r.push_back(rec.R);
  }
  return error_exponent_fit(v, e, r);
}

FactorizedCounts factorized_count_check(double R) {
  if (!(R > 0) || !std::isfinite(R)) throw std::invalid_argument("R must be positive");
  const auto f = static_cast<std::int64_t>(std::floor(R));
  auto in_h = [&](std::int64_t b) { return b >= -f && b < f + 1; };
  auto in_z = [&](std::int64_t a) { return std::fabs(static_cast<double>(a)) < R; };
  FactorizedCounts out;
  const std::int64_t box = f + 2;
  for (std::int64_t a = -box; a <= box; ++a)
    for (std::int64_t b = -box; b <= box; ++b)
      if (in_z(a) && in_h(b)) ++out.group;
  for (std::int64_t b = -box; b <= box; ++b)
    if (in_h(b)) ++out.subgroup;
  for (std::int64_t a = -box; a <= box; ++a)
    if (in_z(a)) ++out.quotient;
  out.holds = out.group == out.subgroup * out.quotient;
  return out;
}

}  // namespace wavecount::euclid
