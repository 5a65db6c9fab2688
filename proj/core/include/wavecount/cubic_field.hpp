#pragma once

// The totally real cubic field k = Q(theta), theta^3 = -theta^2 + 2 theta + 1
// (theta a root of x^3 + x^2 - 2x - 1, the splitting field of that polynomial).

#include "wavecount/rational.hpp"

#include <boost/multiprecision/mpfr.hpp>

#include <array>
#include <string>

namespace wavecount {

using BigFloat = boost::multiprecision::mpfr_float;

/// Sets the working precision of BigFloat temporaries (in bits) for the current thread.
class PrecisionScope {
 public:
  explicit PrecisionScope(unsigned bits);
  ~PrecisionScope();
  PrecisionScope(const PrecisionScope&) = delete;
  PrecisionScope& operator=(const PrecisionScope&) = delete;

 private:
  unsigned previous_;
};

/// a + b theta + c theta^2 with exact rational coordinates.
class CubicFieldElement {
 public:
  CubicFieldElement() = default;
  CubicFieldElement(Rational a, Rational b = 0, Rational c = 0);
  static CubicFieldElement theta();

  const Rational& operator[](int i) const { return coords_[static_cast<std::size_t>(i)]; }
  const std::array<Rational, 3>& coords() const { return coords_; }

  friend CubicFieldElement operator+(const CubicFieldElement& x, const CubicFieldElement& y);
  friend CubicFieldElement operator-(const CubicFieldElement& x, const CubicFieldElement& y);
  friend CubicFieldElement operator-(const CubicFieldElement& x);
  friend CubicFieldElement operator*(const CubicFieldElement& x, const CubicFieldElement& y);
  friend bool operator==(const CubicFieldElement& x, const CubicFieldElement& y) {
    return x.coords_ == y.coords_;
  }
  friend bool operator<(const CubicFieldElement& x, const CubicFieldElement& y) {
    return x.coords_ < y.coords_;
  }

  /// Throws std::domain_error for zero.
  CubicFieldElement inverse() const;
  bool is_zero() const;
  bool is_rational() const { return coords_[1] == 0 && coords_[2] == 0; }
  /// All coordinates integral, i.e. the element lies in Z[theta].
  bool is_integral() const;

  /// Matrix of multiplication by this element in the basis 1, theta, theta^2.
  RatMatrix multiplication_matrix() const;
  Rational trace() const;
  Rational norm() const;
  /// Norm is +-1 and the element is integral.
  bool is_unit() const;

  std::string to_string() const;

 private:
  std::array<Rational, 3> coords_{Rational(0), Rational(0), Rational(0)};
};

/// Discriminant of x^3 + x^2 - 2x - 1 (computed from the coefficients).
Rational defining_polynomial_discriminant();

/// Evaluates x^3 + x^2 - 2x - 1 at a field element.
CubicFieldElement defining_polynomial_at(const CubicFieldElement& x);

/// True iff theta^2 - 2 is a root of the defining polynomial and generates a
/// nontrivial automorphism of order three.
bool verify_sigma_generator();

/// The Galois automorphism theta -> theta^2 - 2.
CubicFieldElement galois_sigma(const CubicFieldElement& x);

/// The three real roots of the defining polynomial, descending, to the given precision.
/// Each root is refined by Newton's method and certified by a sign change of the
/// polynomial across a 2^{8-bits} neighbourhood.
std::array<BigFloat, 3> cubic_real_roots(unsigned bits);

/// Values of x under the three real embeddings (descending-root order). bits >= 64.
std::array<BigFloat, 3> real_embeddings(const CubicFieldElement& x, unsigned bits);

BigFloat to_bigfloat(const Rational& q);
std::string to_decimal(const BigFloat& v, unsigned bits);

}  // namespace wavecount
