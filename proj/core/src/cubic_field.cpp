#include "wavecount/cubic_field.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace wavecount {

namespace {
unsigned digits_for_bits(unsigned bits) {
  return static_cast<unsigned>(std::ceil(bits * 0.30102999566398120)) + 2;
}
}  // namespace

PrecisionScope::PrecisionScope(unsigned bits) : previous_(BigFloat::default_precision()) {
  BigFloat::default_precision(digits_for_bits(bits));
}

PrecisionScope::~PrecisionScope() { BigFloat::default_precision(previous_); }

CubicFieldElement::CubicFieldElement(Rational a, Rational b, Rational c)
    : coords_{std::move(a), std::move(b), std::move(c)} {
  for (auto& q : coords_) q.canonicalize();
}

CubicFieldElement CubicFieldElement::theta() { return CubicFieldElement(0, 1, 0); }

CubicFieldElement operator+(const CubicFieldElement& x, const CubicFieldElement& y) {
  return {x[0] + y[0], x[1] + y[1], x[2] + y[2]};
}

CubicFieldElement operator-(const CubicFieldElement& x, const CubicFieldElement& y) {
  return {x[0] - y[0], x[1] - y[1], x[2] - y[2]};
}

CubicFieldElement operator-(const CubicFieldElement& x) { return {-x[0], -x[1], -x[2]}; }

// theta^3 = -theta^2 + 2 theta + 1, theta^4 = 3 theta^2 - theta - 1
CubicFieldElement operator*(const CubicFieldElement& x, const CubicFieldElement& y) {
  const Rational c0 = x[0] * y[0];
  const Rational c1 = x[0] * y[1] + x[1] * y[0];
  const Rational c2 = x[0] * y[2] + x[1] * y[1] + x[2] * y[0];
  const Rational c3 = x[1] * y[2] + x[2] * y[1];
  const Rational c4 = x[2] * y[2];
  return {c0 + c3 - c4, c1 + 2 * c3 - c4, c2 - c3 + 3 * c4};
}

bool CubicFieldElement::is_zero() const {
  return coords_[0] == 0 && coords_[1] == 0 && coords_[2] == 0;
}

bool CubicFieldElement::is_integral() const {
  for (const auto& q : coords_)
    if (q.get_den() != 1) return false;
  return true;
}

RatMatrix CubicFieldElement::multiplication_matrix() const {
  RatMatrix m(3, 3);
  CubicFieldElement basis[3] = {CubicFieldElement(1), theta(), theta() * theta()};
  for (int j = 0; j < 3; ++j) {
    const CubicFieldElement col = *this * basis[j];
    for (int i = 0; i < 3; ++i) m(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = col[i];
  }
  return m;
}

Rational CubicFieldElement::trace() const {
  const RatMatrix m = multiplication_matrix();
  return m(0, 0) + m(1, 1) + m(2, 2);
}

Rational CubicFieldElement::norm() const { return determinant(multiplication_matrix()); }

bool CubicFieldElement::is_unit() const {
  if (!is_integral()) return false;
  const Rational n = norm();
  return n == 1 || n == -1;
}

CubicFieldElement CubicFieldElement::inverse() const {
  if (is_zero()) throw std::domain_error("inverse of zero in the cubic field");
  RatVec x;
  if (!solve(multiplication_matrix(), RatVec{Rational(1), Rational(0), Rational(0)}, x))
    throw std::logic_error("cubic field inverse: singular multiplication matrix");
  return {x[0], x[1], x[2]};
}

std::string CubicFieldElement::to_string() const {
  return "(" + wavecount::to_string(coords_[0]) + ", " + wavecount::to_string(coords_[1]) + ", " +
         wavecount::to_string(coords_[2]) + ")";
}

Rational defining_polynomial_discriminant() {
  // a x^3 + b x^2 + c x + d
  const Rational a = 1, b = 1, c = -2, d = -1;
  return 18 * a * b * c * d - 4 * b * b * b * d + b * b * c * c - 4 * a * c * c * c -
         27 * a * a * d * d;
}

CubicFieldElement defining_polynomial_at(const CubicFieldElement& x) {
  const CubicFieldElement x2 = x * x;
  return x2 * x + x2 - CubicFieldElement(2) * x - CubicFieldElement(1);
}

namespace {
CubicFieldElement apply_sigma(const CubicFieldElement& x) {
  static const CubicFieldElement s = CubicFieldElement::theta() * CubicFieldElement::theta() -
                                     CubicFieldElement(2);
  return CubicFieldElement(x[0]) + CubicFieldElement(x[1]) * s + CubicFieldElement(x[2]) * s * s;
}
}  // namespace

bool verify_sigma_generator() {
  const CubicFieldElement t = CubicFieldElement::theta();
  const CubicFieldElement s = apply_sigma(t);
  if (!defining_polynomial_at(s).is_zero()) return false;
  if (s == t) return false;
  return apply_sigma(apply_sigma(s)) == t;
}

CubicFieldElement galois_sigma(const CubicFieldElement& x) {
  static const bool verified = verify_sigma_generator();
  if (!verified) throw std::logic_error("theta -> theta^2 - 2 is not a field automorphism");
  return apply_sigma(x);
}

BigFloat to_bigfloat(const Rational& q) {
  BigFloat v;
  mpfr_set_q(v.backend().data(), q.get_mpq_t(), MPFR_RNDN);
  return v;
}

std::string to_decimal(const BigFloat& v, unsigned bits) {
  return v.str(static_cast<std::streamsize>(digits_for_bits(bits)), std::ios_base::scientific);
}

std::array<BigFloat, 3> cubic_real_roots(unsigned bits) {
  if (bits < 64) throw std::invalid_argument("precision must be at least 64 bits");
  PrecisionScope scope(bits + 32);
  auto f = [](const BigFloat& x) { return ((x + 1) * x - 2) * x - 1; };
  auto df = [](const BigFloat& x) { return (3 * x + 2) * x - 2; };
  const double seeds[3] = {2 * std::cos(2 * std::numbers::pi / 7), 2 * std::cos(4 * std::numbers::pi / 7),
                           2 * std::cos(6 * std::numbers::pi / 7)};
  const BigFloat tol = boost::multiprecision::ldexp(BigFloat(1), -static_cast<int>(bits) - 16);
  const BigFloat radius = boost::multiprecision::ldexp(BigFloat(1), 8 - static_cast<int>(bits));
  std::array<BigFloat, 3> roots;
  for (int k = 0; k < 3; ++k) {
    BigFloat x = seeds[k];
    for (int it = 0; it < 200; ++it) {
      const BigFloat step = f(x) / df(x);
      x -= step;
      if (abs(step) < tol) break;
    }
    if (f(x - radius) * f(x + radius) >= 0)
      throw std::runtime_error("cubic root enclosure check failed");
    roots[static_cast<std::size_t>(k)] = x;
  }
  if (!(roots[0] > roots[1] && roots[1] > roots[2]))
    throw std::runtime_error("cubic roots are not in descending order");
  return roots;
}

std::array<BigFloat, 3> real_embeddings(const CubicFieldElement& x, unsigned bits) {
  static std::mutex mutex;
  static std::map<unsigned, std::array<BigFloat, 3>> cache;
  PrecisionScope scope(bits + 32);
  std::array<BigFloat, 3> roots;
  {
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(bits);
    if (it == cache.end()) it = cache.emplace(bits, cubic_real_roots(bits)).first;
    roots = it->second;
  }
  const BigFloat a = to_bigfloat(x[0]), b = to_bigfloat(x[1]), c = to_bigfloat(x[2]);
  std::array<BigFloat, 3> out;
  for (std::size_t k = 0; k < 3; ++k) out[k] = a + (b + c * roots[k]) * roots[k];
  return out;
}

}  // namespace wavecount
