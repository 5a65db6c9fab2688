#include "wavecount/spherical_structure.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace wavecount::spherical {

namespace {

constexpr std::size_t kMaxCertificatePoints = 20000;
constexpr long kMaxGridLevel = 200;

// Number of compositions of N into r nonnegative parts, saturating.
std::size_t compositions(long N, std::size_t r) {
  long double c = 1;
  for (std::size_t i = 1; i < r; ++i) c = c * static_cast<long double>(N + static_cast<long>(i)) / static_cast<long double>(i);
  return c > 1e18L ? static_cast<std::size_t>(-1) : static_cast<std::size_t>(c);
}

template <class F>
void for_each_composition(long N, std::size_t r, std::vector<long>& parts, std::size_t at, F&& f) {
  if (at + 1 == r) {
    parts[at] = N;
    f(parts);
    return;
  }
  for (long k = 0; k <= N; ++k) {
    parts[at] = k;
    for_each_composition(N - k, r, parts, at + 1, f);
  }
}

}  // namespace

Rational FaceDecomposition::norm2(const RatVec& X) const { return dot(X, gram_ * X); }

RatVec FaceDecomposition::point(const RatVec& x) const {
  if (x.size() != S_.size()) throw std::invalid_argument("coordinate vector has the wrong length");
  RatVec X(gram_.rows(), Rational(0));
  for (std::size_t t = 0; t < S_.size(); ++t) X = X + x[t] * H_[t];
  return X;
}

RatVec FaceDecomposition::coordinates(const RatVec& X) const {
  RatVec x(S_.size());
  for (std::size_t t = 0; t < S_.size(); ++t) x[t] = dot(S_[t], X);
  return x;
}

RatVec FaceDecomposition::project(std::uint32_t I, const RatVec& X) const {
  RatVec out(X.size(), Rational(0));
  for (std::size_t t = 0; t < S_.size(); ++t)
    if (!(I >> t & 1U)) out = out + dot(S_[t], X) * H_[t];
  return out;
}

bool FaceDecomposition::in_cone(const RatVec& X) const {
  if (X.size() != gram_.rows()) return false;
  if (!(point(coordinates(X)) == X)) return false;  // X must lie in a_Z
  for (const auto& s : S_)
    if (dot(s, X) > 0) return false;
  return true;
}

bool FaceDecomposition::in_ball(std::uint32_t I, const RatVec& X) const {
  const Rational f = 1 + delta;
  return norm2(X) <= f * f * norm2(project(I, X));
}

std::vector<bool> FaceDecomposition::memberships(const RatVec& X) const {
  const std::uint32_t full = (1U << S_.size()) - 1;
  std::vector<bool> in(full + 1, false);
  for (const auto& reg : regions) {
    bool excluded = false;
    for (std::uint32_t J = 0; J < full && !excluded; ++J)
      if ((J & reg.I) == reg.I && J != reg.I && in[J]) excluded = true;
    in[reg.I] = !excluded && in_ball(reg.I, X);
  }
  return in;
}

bool FaceDecomposition::in_region(std::uint32_t I, const RatVec& X) const {
  if (I >= (1U << S_.size()) - 1) throw std::invalid_argument("I must be a proper subset of S");
  return memberships(X)[I];
}

std::vector<std::uint32_t> FaceDecomposition::regions_containing(const RatVec& X) const {
  const std::vector<bool> in = memberships(X);
  std::vector<std::uint32_t> out;
  for (const auto& reg : regions)
    if (in[reg.I]) out.push_back(reg.I);
  return out;
}

bool FaceDecomposition::in_compact_cone(std::uint32_t I, const RatVec& X) const {
  const auto it = std::find_if(regions.begin(), regions.end(), [I](const FaceRegion& r) { return r.I == I; });
  if (it == regions.end()) throw std::invalid_argument("I must be a proper subset of S");
  const RatVec x = coordinates(X);
  Rational total = 0;
  for (std::size_t t = 0; t < S_.size(); ++t)
    if (!(I >> t & 1U)) {
      if (x[t] > 0) return false;
      total -= x[t];
    }
  if (total == 0) return true;
  for (std::size_t t = 0; t < S_.size(); ++t)
    if (!(I >> t & 1U) && -x[t] < it->eta * total) return false;
  return true;
}

FaceDecomposition face_decomposition(const CompressionCone& cone, const Rational& delta) {
  if (delta <= 0) throw std::invalid_argument("delta must be positive");
  const std::size_t d = cone.dim_a_Z();
  if (cone.S.size() != d)
    throw std::domain_error("a_S is nonzero: " + std::to_string(cone.S.size()) +
                            " spherical roots for dim a_Z = " + std::to_string(d));
  if (d == 0 || d > 16) throw std::domain_error("face decomposition needs 1 <= dim a_Z <= 16");

  FaceDecomposition fd;
  fd.delta = delta;
  fd.S_ = cone.S;
  fd.gram_ = cone.gram.rows() == 0 ? RatMatrix::identity(cone.dim_a) : cone.gram;

  RootSystemData shape;
  shape.dim_a = cone.dim_a;
  shape.a_H = cone.a_H;
  shape.gram = fd.gram_;
  const std::vector<RatVec> Z = shape.a_Z_basis();
  const RatMatrix Zm = RatMatrix::from_columns(Z, cone.dim_a);
  const RatMatrix TZ = RatMatrix::from_rows(cone.S, cone.dim_a) * Zm;
  const RatMatrix coeff = inverse(TZ);
  for (std::size_t t = 0; t < d; ++t) fd.H_.push_back(Zm * coeff.col(t));

  const std::uint32_t full = (1U << d) - 1;
  std::vector<std::uint32_t> masks;
  for (std::uint32_t I = 0; I < full; ++I) masks.push_back(I);
  std::stable_sort(masks.begin(), masks.end(),
                   [](std::uint32_t a, std::uint32_t b) { return std::popcount(a) > std::popcount(b); });
  for (auto I : masks) fd.regions.push_back({I, 0, 0});

  // Certificate: grid points of the simplex sum_tau -tau(X) = N.
  long N = 1;
  while (N < kMaxGridLevel && compositions(N + 1, d) <= kMaxCertificatePoints) ++N;
  std::vector<Rational> best(full + 1, Rational(2));
  std::vector<long> parts(d);
  for_each_composition(N, d, parts, 0, [&](const std::vector<long>& u) {
    RatVec x(d);
    for (std::size_t t = 0; t < d; ++t) x[t] = -u[t];
    const RatVec X = fd.point(x);
    const std::vector<bool> in = fd.memberships(X);
    for (auto& reg : fd.regions) {
      if (!in[reg.I]) continue;
      ++reg.witnesses;
      long sum = 0, low = -1;
      for (std::size_t t = 0; t < d; ++t)
        if (!(reg.I >> t & 1U)) {
          sum += u[t];
          low = low < 0 ? u[t] : std::min(low, u[t]);
        }
      Rational frac(low, sum);
      frac.canonicalize();
      best[reg.I] = std::min(best[reg.I], frac);
    }
  });
  for (auto& reg : fd.regions) {
    const long free = static_cast<long>(d) - std::popcount(reg.I);
    reg.eta = reg.witnesses == 0 ? Rational(1, 2 * free) : best[reg.I] / 2;
    reg.eta.canonicalize();
  }
  return fd;
}

}  // namespace wavecount::spherical
