#pragma once

// Nilpotent Lie algebras in exact arithmetic: lower central series, the filtration
// w_j = u_H + u^j with coordinate-orthogonal complements, and the decomposition
// g = exp(X) h with X in V and h in exp(u_H) for unipotent matrix realizations.

#include "wavecount/rational.hpp"

#include <cstddef>
#include <cstdint>
#include <string>
#include <tuple>
#include <vector>

namespace wavecount::mostow {

using Subspace = std::vector<RatVec>;  ///< basis, coordinates in the basis of u

struct NilpotentLieAlgebra {
  std::size_t dim = 0;
  std::vector<RatVec> brackets;           ///< brackets[i * dim + j] = [e_i, e_j]
  std::vector<RatMatrix> realization;     ///< optional: strictly upper-triangular matrices per e_i
  std::string name;

  /// Builds from the nonzero brackets [e_i, e_j] = v with i < j; antisymmetry fills the rest.
  static NilpotentLieAlgebra from_structure(
      std::size_t dim, const std::vector<std::tuple<std::size_t, std::size_t, RatVec>>& nonzero);

  RatVec bracket(const RatVec& x, const RatVec& y) const;
  /// Throws std::invalid_argument unless antisymmetry and Jacobi hold exactly and the
  /// realization (when present) is strictly upper triangular, faithful and bracket-preserving.
  void validate() const;
  bool has_realization() const { return !realization.empty(); }
  RatMatrix to_matrix(const RatVec& x) const;
  /// Coordinates of a matrix in the realization; throws std::domain_error outside its span.
  RatVec from_matrix(const RatMatrix& m) const;
};

/// [X, Y] = Z with X = E12, Y = E23, Z = E13.
NilpotentLieAlgebra heisenberg();
/// [X1, Xi] = X_{i+1} for 2 <= i < dim, realized in dim x dim matrices; dim >= 3.
NilpotentLieAlgebra filiform(std::size_t dim = 4);
NilpotentLieAlgebra abelian(std::size_t dim);

/// JSON: {"dim": n, "brackets": [[i, j, [c...]], ...], "realization": [[[..]..], ...]}
/// with rationals as strings or integers. Throws std::invalid_argument naming the field.
NilpotentLieAlgebra parse_algebra(const std::string& json_text);

struct CentralSeries {
  std::vector<Subspace> terms;  ///< u^0 = u, ..., u^n = {0}
  std::size_t degree = 0;       ///< n
};

/// Throws std::domain_error when the chain stalls above {0}.
CentralSeries lower_central_series(const NilpotentLieAlgebra& u);

bool is_subalgebra(const NilpotentLieAlgebra& u, const Subspace& s);
/// [a, b] in c for all basis pairs.
bool brackets_into(const NilpotentLieAlgebra& u, const Subspace& a, const Subspace& b, const Subspace& c);

struct FiltrationData {
  Subspace u_H;
  std::vector<Subspace> w;  ///< w_0 = u, ..., w_n = u_H
  std::vector<Subspace> V;  ///< V_j = w_j cap w_{j+1}^perp, j < n
  Subspace V_total;
};

/// Throws std::invalid_argument when u_H is not a subalgebra, InvariantViolation when a
/// filtration step is not co-abelian or u_H + V is not direct.
FiltrationData build_filtration(const NilpotentLieAlgebra& u, const Subspace& u_H);

/// Exact exp of a nilpotent matrix and log of a unipotent one.
RatMatrix exp_nilpotent(const RatMatrix& N);
RatMatrix log_unipotent(const RatMatrix& g);

struct Decomposition {
  RatVec X;  ///< in V
  RatVec Y;  ///< in u_H, h = exp(Y)
  int iterations = 0;
};

/// Solves g = exp(X) exp(Y) by repeated peeling along w_0 > w_1 > ... > w_n; exact. Throws
/// std::invalid_argument without a realization and std::domain_error if peeling does not settle.
Decomposition decompose(const NilpotentLieAlgebra& u, const FiltrationData& f, const RatMatrix& g);

struct DecompositionCheck {
  std::size_t samples = 0;
  std::size_t recovered = 0;
  bool passed() const { return samples == recovered; }
};

/// Random rational (X, Y) with coefficients p/q, |p| <= 5, 1 <= q <= 4; g = exp(X) exp(Y) is
/// decomposed again and compared exactly.
DecompositionCheck exp_decomposition_check(const NilpotentLieAlgebra& u, const Subspace& u_H,
                                           std::size_t samples, std::uint64_t seed);

}  // namespace wavecount::mostow
