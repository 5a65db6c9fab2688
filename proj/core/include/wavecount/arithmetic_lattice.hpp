#pragma once

// The special orthogonal group of Q = 2 x0^2 - 3 x1^2 - x2^2 over the cubic field
// and its three real embeddings: the lattice g -> (g, g^sigma, g^{sigma^2}).

#include "wavecount/cubic_field.hpp"
#include "wavecount/errors.hpp"

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

namespace wavecount::arithmetic {

inline constexpr std::uint64_t kDefaultHeightBudget = 100'000'000ULL;

/// 3x3 matrix over Q(theta), row-major.
class FormGroupElement {
 public:
  FormGroupElement();  // identity
  explicit FormGroupElement(std::array<CubicFieldElement, 9> entries);
  static FormGroupElement from_integers(const std::array<std::int64_t, 9>& entries);
  static FormGroupElement from_rationals(const RatMatrix& m);

  const CubicFieldElement& operator()(int i, int j) const { return entries_[static_cast<std::size_t>(3 * i + j)]; }
  const std::array<CubicFieldElement, 9>& entries() const { return entries_; }

  FormGroupElement operator*(const FormGroupElement& o) const;
  FormGroupElement transpose() const;
  CubicFieldElement determinant() const;
  /// S^{-1} g^T S, the inverse for elements of the group.
  FormGroupElement group_inverse() const;
  FormGroupElement apply_sigma() const;
  bool is_rational() const;
  bool is_integral() const;

  friend bool operator==(const FormGroupElement& a, const FormGroupElement& b) {
    return a.entries_ == b.entries_;
  }
  friend bool operator<(const FormGroupElement& a, const FormGroupElement& b) {
    return a.entries_ < b.entries_;
  }

 private:
  std::array<CubicFieldElement, 9> entries_;
};

/// diag(2, -3, -1).
const FormGroupElement& form_matrix();

/// g^T S g == S and det g == 1, both exactly.
bool is_in_group(const FormGroupElement& g);

/// Integer points of the group with entries in [-height, height], sorted.
std::vector<FormGroupElement> enumerate_gamma0(int height,
                                               std::uint64_t budget = kDefaultHeightBudget);

/// Cayley transform (S - W)^{-1}(S + W) of the antisymmetric matrix with upper
/// entries (w01, w02, w12). Throws std::domain_error unless det(S - W) is a unit of Z[theta].
FormGroupElement cayley_element(const CubicFieldElement& w01, const CubicFieldElement& w02,
                                const CubicFieldElement& w12);

/// Group elements over Z[theta] with at least one irrational entry, found by searching
/// Cayley parameters with coordinates in [-range, range].
std::vector<FormGroupElement> find_irrational_elements(std::size_t count, int range = 1);

struct TripleLatticePoint {
  unsigned bits = 0;
  std::array<std::array<BigFloat, 9>, 3> components;  ///< row-major, component j = embedding of sigma^j(g)
  Eigen::Matrix3d component(int j) const;
};

/// Embeds g in G0^3. Throws InvariantViolation if g is not in the group or an
/// embedded component fails to preserve the form to 1e-9.
TripleLatticePoint triple_embed(const FormGroupElement& g, unsigned bits);

/// Largest entry of |g^T S g - S| over the three components.
double embedded_form_defect(const TripleLatticePoint& p);

double frobenius_norm(const Eigen::Matrix3d& m);

struct NormBallCounts {
  std::vector<double> radii;
  std::vector<std::uint64_t> counts;
  /// max |q_i - q_j| / q_last over the second half of the radii, q = N_R / volume proxy.
  double cauchy_spread = 0;
};

/// Counts elements with Frobenius norm below each radius. A triple is counted when all
/// three components lie in the ball.
NormBallCounts count_norm_ball(const std::vector<FormGroupElement>& points,
                               const std::vector<double>& radii,
                               const std::function<double(double)>& volume_proxy);
NormBallCounts count_norm_ball(const std::vector<TripleLatticePoint>& points,
                               const std::vector<double>& radii,
                               const std::function<double(double)>& volume_proxy);

/// True when no nonzero integer triple with entries bounded by height is isotropic for Q.
bool anisotropic_up_to(int height);

}  // namespace wavecount::arithmetic
