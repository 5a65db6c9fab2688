#include "wavecount/arithmetic_lattice.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace wavecount::arithmetic {

namespace {
constexpr std::int64_t kS[3] = {2, -3, -1};

std::int64_t q_form(const std::array<std::int64_t, 3>& v) {
  return kS[0] * v[0] * v[0] + kS[1] * v[1] * v[1] + kS[2] * v[2] * v[2];
}

std::int64_t b_form(const std::array<std::int64_t, 3>& u, const std::array<std::int64_t, 3>& v) {
  return kS[0] * u[0] * v[0] + kS[1] * u[1] * v[1] + kS[2] * u[2] * v[2];
}
}  // namespace

FormGroupElement::FormGroupElement() {
  for (int i = 0; i < 3; ++i) entries_[static_cast<std::size_t>(4 * i)] = CubicFieldElement(1);
}

FormGroupElement::FormGroupElement(std::array<CubicFieldElement, 9> entries)
    : entries_(std::move(entries)) {}

FormGroupElement FormGroupElement::from_integers(const std::array<std::int64_t, 9>& entries) {
  std::array<CubicFieldElement, 9> e;
  for (std::size_t i = 0; i < 9; ++i) e[i] = CubicFieldElement(Rational(static_cast<long>(entries[i])));
  return FormGroupElement(e);
}

FormGroupElement FormGroupElement::from_rationals(const RatMatrix& m) {
  if (m.rows() != 3 || m.cols() != 3) throw std::invalid_argument("form group elements are 3x3");
  std::array<CubicFieldElement, 9> e;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) e[3 * i + j] = CubicFieldElement(m(i, j));
  return FormGroupElement(e);
}

FormGroupElement FormGroupElement::operator*(const FormGroupElement& o) const {
  std::array<CubicFieldElement, 9> e;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      CubicFieldElement s;
      for (int k = 0; k < 3; ++k) s = s + (*this)(i, k) * o(k, j);
      e[static_cast<std::size_t>(3 * i + j)] = s;
    }
  return FormGroupElement(e);
}

FormGroupElement FormGroupElement::transpose() const {
  std::array<CubicFieldElement, 9> e;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) e[static_cast<std::size_t>(3 * i + j)] = (*this)(j, i);
  return FormGroupElement(e);
}

CubicFieldElement FormGroupElement::determinant() const {
  const auto& m = *this;
  return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
         m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
         m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
}

FormGroupElement FormGroupElement::group_inverse() const {
  std::array<CubicFieldElement, 9> e;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      Rational s(kS[j], kS[i]);
      s.canonicalize();
      e[static_cast<std::size_t>(3 * i + j)] = CubicFieldElement(s) * (*this)(j, i);
    }
  return FormGroupElement(e);
}

FormGroupElement FormGroupElement::apply_sigma() const {
  std::array<CubicFieldElement, 9> e;
  for (std::size_t i = 0; i < 9; ++i) e[i] = galois_sigma(entries_[i]);
  return FormGroupElement(e);
}

bool FormGroupElement::is_rational() const {
  return std::all_of(entries_.begin(), entries_.end(), [](const auto& x) { return x.is_rational(); });
}

bool FormGroupElement::is_integral() const {
  return std::all_of(entries_.begin(), entries_.end(), [](const auto& x) { return x.is_integral(); });
}

const FormGroupElement& form_matrix() {
  static const FormGroupElement S = FormGroupElement::from_integers({2, 0, 0, 0, -3, 0, 0, 0, -1});
  return S;
}

bool is_in_group(const FormGroupElement& g) {
  return g.transpose() * form_matrix() * g == form_matrix() &&
         g.determinant() == CubicFieldElement(1);
}

std::vector<FormGroupElement> enumerate_gamma0(int height, std::uint64_t budget) {
  if (height < 1) throw std::invalid_argument("height must be a positive integer");
  const long double side = 2.0L * height + 1;
  if (side * side * side > static_cast<long double>(budget))
    throw BudgetExceeded("height " + std::to_string(height) + " exceeds the enumeration budget");
  std::vector<std::array<std::int64_t, 3>> cols[3];
  for (std::int64_t x = -height; x <= height; ++x)
    for (std::int64_t y = -height; y <= height; ++y)
      for (std::int64_t z = -height; z <= height; ++z) {
        const std::array<std::int64_t, 3> v{x, y, z};
        const std::int64_t q = q_form(v);
        for (int j = 0; j < 3; ++j)
          if (q == kS[j]) cols[j].push_back(v);
      }
  std::vector<FormGroupElement> out;
  for (const auto& c0 : cols[0])
    for (const auto& c1 : cols[1]) {
      if (b_form(c0, c1) != 0) continue;
      for (const auto& c2 : cols[2]) {
        if (b_form(c0, c2) != 0 || b_form(c1, c2) != 0) continue;
        const std::int64_t det = c0[0] * (c1[1] * c2[2] - c2[1] * c1[2]) -
                                 c1[0] * (c0[1] * c2[2] - c2[1] * c0[2]) +
                                 c2[0] * (c0[1] * c1[2] - c1[1] * c0[2]);
        if (det != 1) continue;
        FormGroupElement g = FormGroupElement::from_integers(
            {c0[0], c1[0], c2[0], c0[1], c1[1], c2[1], c0[2], c1[2], c2[2]});
        if (!is_in_group(g)) throw InvariantViolation("column search produced a non-group element");
        out.push_back(std::move(g));
      }
    }
  std::sort(out.begin(), out.end());
  return out;
}

FormGroupElement cayley_element(const CubicFieldElement& w01, const CubicFieldElement& w02,
                                const CubicFieldElement& w12) {
  const CubicFieldElement s0(2), s1(-3), s2(-1);
  // S - W and S + W with W antisymmetric
  const FormGroupElement minus({s0, -w01, -w02, w01, s1, -w12, w02, w12, s2});
  const FormGroupElement plus({s0, w01, w02, -w01, s1, w12, -w02, -w12, s2});
  const CubicFieldElement det = minus.determinant();
  if (!det.is_unit()) throw std::domain_error("det(S - W) = " + det.to_string() + " is not a unit");
  const CubicFieldElement inv = det.inverse();
  const auto& m = minus;
  // adjugate of S - W
  std::array<CubicFieldElement, 9> adj;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const int r0 = (j + 1) % 3, r1 = (j + 2) % 3, c0 = (i + 1) % 3, c1 = (i + 2) % 3;
      adj[static_cast<std::size_t>(3 * i + j)] = inv * (m(r0, c0) * m(r1, c1) - m(r0, c1) * m(r1, c0));
    }
  FormGroupElement g = FormGroupElement(adj) * plus;
  if (!is_in_group(g)) throw InvariantViolation("Cayley transform left the group");
  return g;
}

std::vector<FormGroupElement> find_irrational_elements(std::size_t count, int range) {
  std::vector<CubicFieldElement> params;
  for (int a = -range; a <= range; ++a)
    for (int b = -range; b <= range; ++b)
      for (int c = -range; c <= range; ++c) params.emplace_back(a, b, c);
  std::vector<FormGroupElement> out;
  for (const auto& w01 : params)
    for (const auto& w02 : params)
      for (const auto& w12 : params) {
        if (w01.is_rational() && w02.is_rational() && w12.is_rational()) continue;
        const CubicFieldElement det = CubicFieldElement(6) - w01 * w01 - CubicFieldElement(3) * w02 * w02 +
                                      CubicFieldElement(2) * w12 * w12;
        if (!det.is_unit()) continue;
        FormGroupElement g = cayley_element(w01, w02, w12);
        if (g.is_integral() && !g.is_rational()) out.push_back(std::move(g));
        if (out.size() >= count) return out;
      }
  return out;
}

Eigen::Matrix3d TripleLatticePoint::component(int j) const {
  Eigen::Matrix3d m;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c)
      m(r, c) = components[static_cast<std::size_t>(j)][static_cast<std::size_t>(3 * r + c)].convert_to<double>();
  return m;
}

double embedded_form_defect(const TripleLatticePoint& p) {
  PrecisionScope scope(p.bits + 32);
  const int S[3] = {2, -3, -1};
  double worst = 0;
  for (const auto& comp : p.components)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        BigFloat s = 0;
        for (int k = 0; k < 3; ++k) s += comp[static_cast<std::size_t>(3 * k + i)] * S[k] * comp[static_cast<std::size_t>(3 * k + j)];
        if (i == j) s -= S[i];
        worst = std::max(worst, abs(s).convert_to<double>());
      }
  return worst;
}

TripleLatticePoint triple_embed(const FormGroupElement& g, unsigned bits) {
  if (bits < 64) throw std::invalid_argument("precision must be at least 64 bits");
  if (!is_in_group(g)) throw InvariantViolation("triple_embed: element is not in the group");
  PrecisionScope scope(bits + 32);
  TripleLatticePoint p;
  p.bits = bits;
  FormGroupElement h = g;
  for (std::size_t j = 0; j < 3; ++j) {
    for (std::size_t e = 0; e < 9; ++e) p.components[j][e] = real_embeddings(h.entries()[e], bits)[0];
    h = h.apply_sigma();
  }
  if (!(embedded_form_defect(p) < 1e-9))
    throw InvariantViolation("triple_embed: embedded component does not preserve the form");
  return p;
}

double frobenius_norm(const Eigen::Matrix3d& m) { return m.norm(); }

namespace {
NormBallCounts count_by_norm(std::vector<double> norms, const std::vector<double>& radii,
                             const std::function<double(double)>& volume_proxy) {
  for (std::size_t i = 1; i < radii.size(); ++i)
    if (!(radii[i] >= radii[i - 1])) throw std::invalid_argument("radii must be nondecreasing");
  std::sort(norms.begin(), norms.end());
  NormBallCounts out;
  out.radii = radii;
  for (double R : radii) {
    if (!(R > 0)) throw std::invalid_argument("radii must be positive");
    out.counts.push_back(static_cast<std::uint64_t>(std::lower_bound(norms.begin(), norms.end(), R) - norms.begin()));
  }
  if (radii.size() >= 2 && volume_proxy) {
    std::vector<double> q;
    for (std::size_t i = radii.size() / 2; i < radii.size(); ++i)
      q.push_back(static_cast<double>(out.counts[i]) / volume_proxy(radii[i]));
    const auto [lo, hi] = std::minmax_element(q.begin(), q.end());
    out.cauchy_spread = q.back() > 0 ? (*hi - *lo) / q.back() : 0;
  }
  return out;
}
}  // namespace

NormBallCounts count_norm_ball(const std::vector<FormGroupElement>& points,
                               const std::vector<double>& radii,
                               const std::function<double(double)>& volume_proxy) {
  std::vector<double> norms;
  for (const auto& g : points) {
    if (!g.is_rational()) throw std::invalid_argument("count_norm_ball: irrational element needs triple_embed");
    Eigen::Matrix3d m;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) m(i, j) = g(i, j)[0].get_d();
    norms.push_back(frobenius_norm(m));
  }
  return count_by_norm(std::move(norms), radii, volume_proxy);
}

NormBallCounts count_norm_ball(const std::vector<TripleLatticePoint>& points,
                               const std::vector<double>& radii,
                               const std::function<double(double)>& volume_proxy) {
  std::vector<double> norms;
  for (const auto& p : points) {
    double worst = 0;
    for (int j = 0; j < 3; ++j) worst = std::max(worst, frobenius_norm(p.component(j)));
    norms.push_back(worst);
  }
  return count_by_norm(std::move(norms), radii, volume_proxy);
}

bool anisotropic_up_to(int height) {
  for (std::int64_t x = -height; x <= height; ++x)
    for (std::int64_t y = -height; y <= height; ++y)
      for (std::int64_t z = -height; z <= height; ++z) {
        if (x == 0 && y == 0 && z == 0) continue;
        if (q_form({x, y, z}) == 0) return false;
      }
  return true;
}

}  // namespace wavecount::arithmetic
