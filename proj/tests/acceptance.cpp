// Acceptance run: one PASS/FAIL line per criterion, exit status 0 only if all pass.

#include "commands.hpp"

#include "wavecount/arithmetic_lattice.hpp"
#include "wavecount/constant_term.hpp"
#include "wavecount/euclid_count.hpp"
#include "wavecount/hyperbolic_count.hpp"
#include "wavecount/model_norms.hpp"
#include "wavecount/mostow_nilpotent.hpp"
#include "wavecount/spherical_structure.hpp"

#include <Eigen/Dense>

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <tuple>

using namespace wavecount;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool ok = false;
  std::string detail;
};

std::uint64_t brute_count2(double R) {
  const auto b = static_cast<long>(std::ceil(R));
  std::uint64_t n = 0;
  for (long x = -b; x <= b; ++x)
    for (long y = -b; y <= b; ++y)
      if (static_cast<double>(x * x + y * y) < R * R) ++n;
  return n;
}

Outcome poisson_identity() {
  const auto t0 = Clock::now();
  const auto Z2 = euclid::IntegerLattice::standard(2);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> dR(2, 10), de(0.2, 1);
  double worst = 0;
  for (int i = 0; i < 20; ++i) {
    const double R = dR(rng), e = de(rng);
    const euclid::RadialMollifier m(2, e);
    worst = std::max(worst, std::fabs(euclid::mollified_count(Z2, R, m) - euclid::poisson_spectral_count_auto(Z2, R, m).value));
  }
  const double s = seconds_since(t0);
  std::ostringstream os;
  os << "max deviation " << worst << ", " << s << " s";
  return {worst < 1e-6 && s < 60, os.str()};
}

Outcome sandwich() {
  const auto Z2 = euclid::IntegerLattice::standard(2);
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> dR(2, 40), de(0.05, 1);
  int good = 0;
  for (int i = 0; i < 100; ++i) {
    const double R = dR(rng), e = de(rng);
    const euclid::RadialMollifier m(2, e);
    const auto exact = static_cast<double>(brute_count2(R));
    if (euclid::mollified_count(Z2, R - e, m) <= exact && exact <= euclid::mollified_count(Z2, R + e, m)) ++good;
  }
  return {good == 100, std::to_string(good) + "/100 pairs"};
}

Outcome euclid_exponent() {
  const auto t0 = Clock::now();
  const auto rep = cli::run_euclid(cli::EuclidParams{});
  double alpha = NAN;
  for (const auto& [k, v] : rep.fits)
    if (k == "alpha") alpha = v;
  const double s = seconds_since(t0);
  std::ostringstream os;
  os << "alpha " << alpha << ", " << s << " s";
  return {alpha <= 0.4 && s < 300, os.str()};
}

Outcome bookkeeping() {
  bool ok = euclid::optimal_epsilon(2, 8) == 0.5 && euclid::optimal_epsilon(3, 16) == 0.25;
  ok = ok && euclid::balanced_error_exponent(2) == Rational(2, 3) && euclid::balanced_error_exponent(3) == Rational(3, 2);
  for (int n : {2, 3}) {
    const auto [a, b] = euclid::error_term_exponents(n);
    ok = ok && a == b && a == ratio(n * (n - 1), n + 1);
  }
  return {ok, "n = 2: 2/3, n = 3: 3/2"};
}

using Quad = std::tuple<long, long, long, long>;

std::size_t brute_orbit(double R) {
  const auto bound = static_cast<long>(std::ceil(std::sqrt(2 * std::cosh(R)))) + 1;
  const auto i = hyperbolic::UpperHalfPoint::make(0, 1);
  std::set<Quad> out;
  auto consider = [&](long a, long b, long c, long d) {
    const std::complex<double> w(0, 1);
    const auto z = (static_cast<double>(a) * w + static_cast<double>(b)) / (static_cast<double>(c) * w + static_cast<double>(d));
    if (hyperbolic::hyp_dist(hyperbolic::UpperHalfPoint::make(z.real(), z.imag()), i) < R)
      out.insert(std::max(Quad{a, b, c, d}, Quad{-a, -b, -c, -d}));
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
  return out.size();
}

Outcome hyperbolic_counts() {
  const auto t0 = Clock::now();
  const auto i = hyperbolic::UpperHalfPoint::make(0, 1);
  bool ok = true;
  for (double R : {4.0, 6.0, 8.0}) ok = ok && hyperbolic::count_in_ball(i, R).count == brute_orbit(R);
  const double rel10 = hyperbolic::count_in_ball(i, 10).relative_error;
  ok = ok && std::fabs(rel10) < 0.2;
  double sum = 0, prev = HUGE_VAL;
  for (int R = 6; R <= 10; ++R) {
    sum += std::fabs(hyperbolic::count_in_ball(i, R).relative_error);
    const double mean = sum / (R - 5);
    ok = ok && mean <= prev;
    prev = mean;
  }
  const double s = seconds_since(t0);
  std::ostringstream os;
  os << "relative error at 10: " << rel10 << ", " << s << " s";
  return {ok && s < 600, os.str()};
}

Outcome selberg() {
  const auto [a, b] = hyperbolic::selberg_cross_check(10);
  std::ostringstream os;
  os << "ratio " << a / b;
  return {std::fabs(a / b - 1) < 1e-3, os.str()};
}

Outcome projections() {
  using ct::CMatrix;
  using ct::CVector;
  using ct::Complex;
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> dim(1, 6);
  std::uniform_real_distribution<double> side(0.25, 3), im(-2, 2), mix(-0.3, 0.3);
  double worst = 0;
  bool lemma = true;
  for (int trial = 0; trial < 200; ++trial) {
    const int n = dim(rng);
    const double thr = im(rng);
    CVector lam(n), ind(n);
    for (int i = 0; i < n; ++i) {
      const bool left = rng() & 1U;
      lam(i) = Complex(thr + (left ? -side(rng) : side(rng)), im(rng));
      ind(i) = left ? 1.0 : 0.0;
    }
    CMatrix V = CMatrix::Identity(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) V(i, j) += Complex(mix(rng), mix(rng));
    const CMatrix Vi = V.inverse();
    const auto s = ct::spectral_projection(V * lam.asDiagonal() * Vi, thr, 0.5);
    worst = std::max(worst, (s.P - V * ind.asDiagonal() * Vi).cwiseAbs().maxCoeff());
    lemma = lemma && s.norm_P <= s.lemma_bound;
  }
  std::ostringstream os;
  os << "max entry deviation " << worst;
  return {worst < 1e-8 && lemma, os.str()};
}

Outcome constant_term_decay() {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> dc(-10, 10), dr(0.5, 1.5);
  int done = 0;
  double margin = HUGE_VAL, forced = 0;
  ct::CVector seed(2);
  seed << 1, 0.5;
  while (done < 50) {
    const double c = dc(rng), r = dr(rng), c0 = 2;
    try {
      const auto cs = ct::certified_rank_one(c, r, c0, 1.0, seed);
      const auto fn = ct::constant_term(cs.system, cs.phi0);
      const auto tr = ct::stable_trajectory(cs.system, fn, std::max(20.0, 10 / (r + c0 / 2)), 0.05);
      margin = std::min(margin, ct::decay_verify(tr, fn, r, c0) - (r + c0 / 2 - 0.05));
      for (auto i : fn.forced_zero(r)) forced = std::max(forced, fn.coefficient_size(i));
      ++done;
    } catch (const ct::GapViolation&) {
    } catch (const ct::CertificateViolation&) {
    }
  }
  std::ostringstream os;
  os << "min margin " << margin << ", max forced coefficient " << forced;
  return {margin >= 0 && forced < 1e-9, os.str()};
}

Outcome hypothesis_b() {
  const auto batch = ct::hypothesis_b_batch(-10, 10, 2.5, 2, 2, 10);
  std::ostringstream os;
  os << "empirical constant " << batch.max_ratio << " over " << batch.reports.size() << " systems";
  return {batch.bounded && std::isfinite(batch.max_ratio), os.str()};
}

Outcome cone_suite() {
  const auto family = spherical::symmetric_pair_family();
  int wave = 0, monoid = 0;
  std::size_t sampled = 0, covered = 0;
  std::vector<spherical::FaceDecomposition> fds;
  for (const auto& in : family) {
    const auto cone = spherical::compression_cone(in.roots, in.flags);
    if (spherical::is_wavefront(in.roots, cone)) ++wave;
    if (spherical::in_monoid(cone.S, cone.M)) ++monoid;
    // a_Z = 0 leaves nothing to decompose
    if (cone.dim_a_Z() > 0 && cone.S.size() == cone.dim_a_Z()) fds.push_back(spherical::face_decomposition(cone));
  }
  std::mt19937_64 rng(10);
  std::uniform_int_distribution<int> num(0, 300), den(1, 17);
  const std::size_t per = fds.empty() ? 0 : (100000 + fds.size() - 1) / fds.size();
  for (const auto& fd : fds)
    for (std::size_t k = 0; k < per; ++k) {
      RatVec x(fd.rank());
      for (auto& v : x) v = ratio(-num(rng), den(rng));
      ++sampled;
      if (!fd.regions_containing(fd.point(x)).empty()) ++covered;
    }
  std::ostringstream os;
  os << wave << "/" << family.size() << " wavefront, " << monoid << " monoid-exact, " << covered << "/" << sampled
     << " points covered in " << fds.size() << " decompositions";
  const bool ok = wave == 20 && family.size() == 20 && monoid == 20 && sampled >= 100000 && covered == sampled;
  return {ok, os.str()};
}

bool integer_member(const std::array<long, 9>& g) {
  const long S[3] = {2, -3, -1};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      long v = 0;
      for (int k = 0; k < 3; ++k) v += g[3 * k + i] * S[k] * g[3 * k + j];
      if (v != (i == j ? S[i] : 0)) return false;
    }
  return g[0] * (g[4] * g[8] - g[5] * g[7]) - g[1] * (g[3] * g[8] - g[5] * g[6]) + g[2] * (g[3] * g[7] - g[4] * g[6]) == 1;
}

std::array<long, 9> to_ints(const arithmetic::FormGroupElement& g) {
  std::array<long, 9> out{};
  for (std::size_t i = 0; i < 9; ++i) out[i] = g.entries()[i][0].get_num().get_si();
  return out;
}

Outcome arithmetic_lattice() {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> p(-50, 50), q(1, 9);
  auto draw = [&] { return CubicFieldElement(Rational(p(rng), q(rng)), Rational(p(rng), q(rng)), Rational(p(rng), q(rng))); };
  int good = 0;
  for (int k = 0; k < 10000; ++k) {
    const auto x = draw(), y = draw();
    if (galois_sigma(galois_sigma(galois_sigma(x))) == x && galois_sigma(x + y) == galois_sigma(x) + galois_sigma(y) &&
        galois_sigma(x * y) == galois_sigma(x) * galois_sigma(y))
      ++good;
  }
  bool preserved = true;
  const auto g3 = arithmetic::enumerate_gamma0(3);
  for (const auto& g : g3) preserved = preserved && g.is_integral() && g.is_rational() && integer_member(to_ints(g));
  std::set<std::array<long, 9>> lib, brute;
  for (const auto& g : arithmetic::enumerate_gamma0(1)) lib.insert(to_ints(g));
  std::array<long, 9> g{};
  for (long idx = 0; idx < 19683; ++idx) {
    long t = idx;
    for (auto& e : g) {
      e = t % 3 - 1;
      t /= 3;
    }
    if (integer_member(g)) brute.insert(g);
  }
  std::ostringstream os;
  os << good << "/10000 identities, " << g3.size() << " height-3 elements, height 1: " << lib.size() << " vs "
     << brute.size();
  return {good == 10000 && preserved && lib == brute, os.str()};
}

Outcome mostow_checks() {
  RatVec e0 = {1, 0, 0};
  const auto h = mostow::exp_decomposition_check(mostow::heisenberg(), {e0}, 100, 1);
  const auto f = mostow::exp_decomposition_check(mostow::filiform(4), {RatVec{1, 0, 0, 0}}, 100, 1);
  int fact = 0;
  for (int k = 1; k <= 20; ++k)
    if (euclid::factorized_count_check(k + 0.5).holds) ++fact;
  std::ostringstream os;
  os << "heisenberg " << h.recovered << "/100, filiform " << f.recovered << "/100, factorized " << fact << "/20";
  return {h.passed() && h.samples == 100 && f.passed() && f.samples == 100 && fact == 20, os.str()};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"poisson identity", poisson_identity},
      {"sandwich property", sandwich},
      {"euclidean error exponent", euclid_exponent},
      {"exponent bookkeeping", bookkeeping},
      {"hyperbolic counting", hyperbolic_counts},
      {"selberg main term", selberg},
      {"spectral projections", projections},
      {"constant-term decay", constant_term_decay},
      {"hypothesis B", hypothesis_b},
      {"cone suite", cone_suite},
      {"arithmetic lattice", arithmetic_lattice},
      {"mostow decomposition", mostow_checks},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.ok) ++failed;
    std::printf("%s %2zu %s: %s\n", o.ok ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
