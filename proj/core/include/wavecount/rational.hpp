#pragma once

// Exact rational scalars, vectors and dense matrices backed by GMP.

#include <gmpxx.h>

#include <cstddef>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

namespace wavecount {

using Rational = mpq_class;
using RatVec = std::vector<Rational>;

/// Parses "3", "-7/10" or a finite decimal such as "0.125" into an exact rational.
Rational parse_rational(std::string_view text);
std::string to_string(const Rational& q);
/// num / den in lowest terms. Throws std::domain_error for a zero denominator.
Rational ratio(long num, long den);

Rational dot(const RatVec& a, const RatVec& b);
RatVec operator+(const RatVec& a, const RatVec& b);
RatVec operator-(const RatVec& a, const RatVec& b);
RatVec operator*(const Rational& s, const RatVec& v);
bool is_zero(const RatVec& v);

/// Scales a nonzero rational vector to the unique primitive integral vector on the same ray.
RatVec primitive_integral(const RatVec& v);

/// Row-major dense rational matrix.
class RatMatrix {
 public:
  RatMatrix() = default;
  RatMatrix(std::size_t rows, std::size_t cols);
  RatMatrix(std::initializer_list<std::initializer_list<Rational>> rows);
  static RatMatrix identity(std::size_t n);
  static RatMatrix from_rows(const std::vector<RatVec>& rows, std::size_t cols);
  static RatMatrix from_columns(const std::vector<RatVec>& cols, std::size_t rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Rational& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Rational& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  RatVec row(std::size_t i) const;
  RatVec col(std::size_t j) const;
  RatMatrix transpose() const;

  friend RatMatrix operator*(const RatMatrix& a, const RatMatrix& b);
  friend RatVec operator*(const RatMatrix& a, const RatVec& v);
  friend RatMatrix operator+(const RatMatrix& a, const RatMatrix& b);
  friend RatMatrix operator-(const RatMatrix& a, const RatMatrix& b);
  friend RatMatrix operator*(const Rational& s, const RatMatrix& a);
  friend bool operator==(const RatMatrix& a, const RatMatrix& b);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> data_;
};

/// Reduced row echelon form; returns pivot columns.
std::vector<std::size_t> rref(RatMatrix& m);
std::size_t rank(RatMatrix m);
Rational determinant(RatMatrix m);
/// Throws std::domain_error on singular input.
RatMatrix inverse(const RatMatrix& m);
/// Basis of {x : m x = 0}.
std::vector<RatVec> nullspace(const RatMatrix& m);
/// Row-space basis (reduced) of the given vectors.
std::vector<RatVec> span_basis(const std::vector<RatVec>& vectors, std::size_t dim);
/// Solves m x = b; returns false when inconsistent. Free variables are set to zero.
bool solve(const RatMatrix& m, const RatVec& b, RatVec& x);
/// True iff v lies in the span of the given vectors.
bool in_span(const std::vector<RatVec>& basis, const RatVec& v, std::size_t dim);

}  // namespace wavecount
