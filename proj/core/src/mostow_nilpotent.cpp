#include "wavecount/mostow_nilpotent.hpp"

#include "wavecount/errors.hpp"

#include <nlohmann/json.hpp>

#include <random>
#include <stdexcept>

namespace wavecount::mostow {

namespace {

constexpr int kMaxPeelRounds = 64;

RatVec unit(std::size_t n, std::size_t i) {
  RatVec v(n, Rational(0));
  v[i] = 1;
  return v;
}

Subspace whole(std::size_t n) {
  Subspace s;
  for (std::size_t i = 0; i < n; ++i) s.push_back(unit(n, i));
  return s;
}

Subspace span_of(const Subspace& vs, std::size_t n) { return span_basis(vs, n); }

// Vectors of `big` orthogonal (standard inner product) to `small`.
Subspace orthogonal_part(const Subspace& big, const Subspace& small, std::size_t n) {
  if (big.empty()) return {};
  if (small.empty()) return big;
  const RatMatrix B = RatMatrix::from_rows(big, n);
  const RatMatrix S = RatMatrix::from_rows(small, n);
  Subspace out;
  for (const auto& c : nullspace(S * B.transpose())) out.push_back(B.transpose() * c);
  return span_of(out, n);
}

RatMatrix zero_like(const RatMatrix& m) { return RatMatrix(m.rows(), m.cols()); }

bool is_zero_matrix(const RatMatrix& m) { return m == zero_like(m); }

Rational json_rational(const nlohmann::json& j, const std::string& field) {
  if (j.is_number_integer()) return Rational(j.get<long>());
  if (j.is_string()) return parse_rational(j.get<std::string>());
  throw std::invalid_argument(field + ": expected an integer or a rational string");
}

}  // namespace

NilpotentLieAlgebra NilpotentLieAlgebra::from_structure(
    std::size_t dim, const std::vector<std::tuple<std::size_t, std::size_t, RatVec>>& nonzero) {
  if (dim == 0) throw std::invalid_argument("dim must be positive");
  NilpotentLieAlgebra u;
  u.dim = dim;
  u.brackets.assign(dim * dim, RatVec(dim, Rational(0)));
  for (const auto& [i, j, v] : nonzero) {
    if (i >= dim || j >= dim) throw std::invalid_argument("bracket index out of range");
    if (v.size() != dim) throw std::invalid_argument("bracket value has the wrong length");
    u.brackets[i * dim + j] = v;
    u.brackets[j * dim + i] = Rational(-1) * v;
  }
  return u;
}

RatVec NilpotentLieAlgebra::bracket(const RatVec& x, const RatVec& y) const {
  RatVec out(dim, Rational(0));
  for (std::size_t i = 0; i < dim; ++i) {
    if (x[i] == 0) continue;
    for (std::size_t j = 0; j < dim; ++j)
      if (y[j] != 0) out = out + (x[i] * y[j]) * brackets[i * dim + j];
  }
  return out;
}

void NilpotentLieAlgebra::validate() const {
  if (dim == 0 || brackets.size() != dim * dim) throw std::invalid_argument("brackets: need dim^2 entries");
  for (const auto& b : brackets)
    if (b.size() != dim) throw std::invalid_argument("brackets: wrong vector length");
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j)
      if (!is_zero(brackets[i * dim + j] + brackets[j * dim + i]))
        throw std::invalid_argument("brackets: antisymmetry fails at (" + std::to_string(i) + ", " +
                                    std::to_string(j) + ")");
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j)
      for (std::size_t k = 0; k < dim; ++k) {
        const RatVec a = unit(dim, i), b = unit(dim, j), c = unit(dim, k);
        const RatVec s = bracket(a, bracket(b, c)) + bracket(b, bracket(c, a)) + bracket(c, bracket(a, b));
        if (!is_zero(s)) throw std::invalid_argument("brackets: Jacobi identity fails");
      }
  if (!has_realization()) return;
  if (realization.size() != dim) throw std::invalid_argument("realization: need one matrix per basis vector");
  const std::size_t m = realization.front().rows();
  for (const auto& M : realization) {
    if (M.rows() != m || M.cols() != m) throw std::invalid_argument("realization: matrices must be square and equal in size");
    for (std::size_t r = 0; r < m; ++r)
      for (std::size_t c = 0; c <= r; ++c)
        if (M(r, c) != 0) throw std::invalid_argument("realization: matrices must be strictly upper triangular");
  }
  std::vector<RatVec> flat;
  for (const auto& M : realization) {
    RatVec v;
    for (std::size_t r = 0; r < m; ++r)
      for (std::size_t c = 0; c < m; ++c) v.push_back(M(r, c));
    flat.push_back(std::move(v));
  }
  if (span_basis(flat, m * m).size() != dim) throw std::invalid_argument("realization: not faithful");
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j) {
      const RatMatrix lhs = realization[i] * realization[j] - realization[j] * realization[i];
      if (!(lhs == to_matrix(brackets[i * dim + j])))
        throw std::invalid_argument("realization: does not preserve brackets");
    }
}

RatMatrix NilpotentLieAlgebra::to_matrix(const RatVec& x) const {
  if (!has_realization()) throw std::invalid_argument("matrix realization missing");
  RatMatrix out = zero_like(realization.front());
  for (std::size_t i = 0; i < dim; ++i)
    if (x[i] != 0) out = out + x[i] * realization[i];
  return out;
}

RatVec NilpotentLieAlgebra::from_matrix(const RatMatrix& g) const {
  if (!has_realization()) throw std::invalid_argument("matrix realization missing");
  const std::size_t m = g.rows();
  RatMatrix A(m * m, dim);
  RatVec b(m * m);
  for (std::size_t r = 0; r < m; ++r)
    for (std::size_t c = 0; c < m; ++c) {
      b[r * m + c] = g(r, c);
      for (std::size_t i = 0; i < dim; ++i) A(r * m + c, i) = realization[i](r, c);
    }
  RatVec x;
  if (!solve(A, b, x)) throw std::domain_error("matrix outside the realized algebra");
  return x;
}

NilpotentLieAlgebra heisenberg() {
  auto u = NilpotentLieAlgebra::from_structure(3, {{0, 1, unit(3, 2)}});
  u.name = "heisenberg";
  RatMatrix X(3, 3), Y(3, 3), Z(3, 3);
  X(0, 1) = 1;
  Y(1, 2) = 1;
  Z(0, 2) = 1;
  u.realization = {X, Y, Z};
  return u;
}

NilpotentLieAlgebra filiform(std::size_t dim) {
  if (dim < 3) throw std::invalid_argument("filiform algebras need dim >= 3");
  std::vector<std::tuple<std::size_t, std::size_t, RatVec>> nz;
  for (std::size_t i = 1; i + 1 < dim; ++i) nz.emplace_back(0, i, unit(dim, i + 1));
  auto u = NilpotentLieAlgebra::from_structure(dim, nz);
  u.name = "filiform" + std::to_string(dim);
  // X1 = -(shift on rows 2..dim), X_k = E_{1k}
  RatMatrix X1(dim, dim);
  for (std::size_t r = 1; r + 1 < dim; ++r) X1(r, r + 1) = -1;
  u.realization.push_back(X1);
  for (std::size_t k = 1; k < dim; ++k) {
    RatMatrix E(dim, dim);
    E(0, k) = 1;
    u.realization.push_back(E);
  }
  return u;
}

NilpotentLieAlgebra abelian(std::size_t dim) {
  auto u = NilpotentLieAlgebra::from_structure(dim, {});
  u.name = "abelian" + std::to_string(dim);
  for (std::size_t k = 0; k < dim; ++k) {
    RatMatrix E(dim + 1, dim + 1);
    E(0, k + 1) = 1;
    u.realization.push_back(E);
  }
  return u;
}

NilpotentLieAlgebra parse_algebra(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("algebra document: ") + e.what());
  }
  if (!j.contains("dim") || !j["dim"].is_number_unsigned())
    throw std::invalid_argument("dim: expected a positive integer");
  const auto dim = j["dim"].get<std::size_t>();
  std::vector<std::tuple<std::size_t, std::size_t, RatVec>> nz;
  if (j.contains("brackets")) {
    if (!j["brackets"].is_array()) throw std::invalid_argument("brackets: expected an array");
    std::size_t n = 0;
    for (const auto& b : j["brackets"]) {
      const std::string field = "brackets[" + std::to_string(n++) + "]";
      if (!b.is_array() || b.size() != 3 || !b[0].is_number_unsigned() || !b[1].is_number_unsigned() || !b[2].is_array())
        throw std::invalid_argument(field + ": expected [i, j, [coefficients]]");
      RatVec v;
      for (const auto& c : b[2]) v.push_back(json_rational(c, field));
      if (v.size() != dim) throw std::invalid_argument(field + ": expected " + std::to_string(dim) + " coefficients");
      nz.emplace_back(b[0].get<std::size_t>(), b[1].get<std::size_t>(), v);
    }
  }
  NilpotentLieAlgebra u = NilpotentLieAlgebra::from_structure(dim, nz);
  u.name = j.value("name", std::string("custom"));
  if (j.contains("realization")) {
    if (!j["realization"].is_array()) throw std::invalid_argument("realization: expected an array of matrices");
    std::size_t n = 0;
    for (const auto& M : j["realization"]) {
      const std::string field = "realization[" + std::to_string(n++) + "]";
      if (!M.is_array() || M.empty()) throw std::invalid_argument(field + ": expected a square matrix");
      const std::size_t m = M.size();
      RatMatrix R(m, m);
      for (std::size_t r = 0; r < m; ++r) {
        if (!M[r].is_array() || M[r].size() != m) throw std::invalid_argument(field + ": expected a square matrix");
        for (std::size_t c = 0; c < m; ++c) R(r, c) = json_rational(M[r][c], field);
      }
      u.realization.push_back(std::move(R));
    }
  }
  u.validate();
  return u;
}

CentralSeries lower_central_series(const NilpotentLieAlgebra& u) {
  CentralSeries cs;
  cs.terms.push_back(whole(u.dim));
  while (!cs.terms.back().empty()) {
    Subspace next;
    for (std::size_t i = 0; i < u.dim; ++i)
      for (const auto& y : cs.terms.back()) {
        const RatVec b = u.bracket(unit(u.dim, i), y);
        if (!is_zero(b)) next.push_back(b);
      }
    next = span_of(next, u.dim);
    if (next.size() == cs.terms.back().size()) throw std::domain_error("lower central series stalls: algebra is not nilpotent");
    cs.terms.push_back(std::move(next));
  }
  cs.degree = cs.terms.size() - 1;
  return cs;
}

bool brackets_into(const NilpotentLieAlgebra& u, const Subspace& a, const Subspace& b, const Subspace& c) {
  for (const auto& x : a)
    for (const auto& y : b) {
      const RatVec z = u.bracket(x, y);
      if (!is_zero(z) && !in_span(c, z, u.dim)) return false;
    }
  return true;
}

bool is_subalgebra(const NilpotentLieAlgebra& u, const Subspace& s) { return brackets_into(u, s, s, s); }

FiltrationData build_filtration(const NilpotentLieAlgebra& u, const Subspace& u_H) {
  for (const auto& v : u_H)
    if (v.size() != u.dim) throw std::invalid_argument("u_H: vectors must have length dim");
  FiltrationData f;
  f.u_H = span_of(u_H, u.dim);
  if (!is_subalgebra(u, f.u_H)) throw std::invalid_argument("u_H: not a subalgebra");
  const CentralSeries cs = lower_central_series(u);
  for (const auto& term : cs.terms) {
    Subspace w = f.u_H;
    w.insert(w.end(), term.begin(), term.end());
    f.w.push_back(span_of(w, u.dim));
  }
  for (std::size_t j = 0; j + 1 < f.w.size(); ++j) {
    if (!brackets_into(u, f.w[j], f.w[j], f.w[j + 1]))
      throw InvariantViolation("w_" + std::to_string(j + 1) + " is not co-abelian in w_" + std::to_string(j));
    Subspace Vj = orthogonal_part(f.w[j], f.w[j + 1], u.dim);
    if (Vj.size() + f.w[j + 1].size() != f.w[j].size()) throw InvariantViolation("complement has the wrong dimension");
    f.V_total.insert(f.V_total.end(), Vj.begin(), Vj.end());
    f.V.push_back(std::move(Vj));
  }
  Subspace all = f.u_H;
  all.insert(all.end(), f.V_total.begin(), f.V_total.end());
  if (all.size() != u.dim || span_of(all, u.dim).size() != u.dim)
    throw InvariantViolation("u_H + V is not a direct sum equal to u");
  return f;
}

RatMatrix exp_nilpotent(const RatMatrix& N) {
  const std::size_t n = N.rows();
  RatMatrix out = RatMatrix::identity(n), term = RatMatrix::identity(n);
  for (std::size_t k = 1; k <= n; ++k) {
    term = Rational(1, static_cast<long>(k)) * (term * N);
    if (is_zero_matrix(term)) return out;
    out = out + term;
  }
  if (!is_zero_matrix(term * N)) throw std::domain_error("matrix is not nilpotent");
  return out;
}

RatMatrix log_unipotent(const RatMatrix& g) {
  const std::size_t n = g.rows();
  const RatMatrix N = g - RatMatrix::identity(n);
  RatMatrix out = zero_like(g), power = RatMatrix::identity(n);
  for (std::size_t k = 1; k <= n; ++k) {
    power = power * N;
    if (is_zero_matrix(power)) return out;
    const Rational c(k % 2 == 1 ? 1 : -1, static_cast<long>(k));
    out = out + c * power;
  }
  if (!is_zero_matrix(power * N)) throw std::domain_error("matrix is not unipotent");
  return out;
}

Decomposition decompose(const NilpotentLieAlgebra& u, const FiltrationData& f, const RatMatrix& g) {
  if (!u.has_realization()) throw std::invalid_argument("exp decomposition needs a matrix realization");
  Decomposition d;
  d.X.assign(u.dim, Rational(0));
  for (int round = 1; round <= kMaxPeelRounds; ++round) {
    RatMatrix r = exp_nilpotent(u.to_matrix(Rational(-1) * d.X)) * g;
    RatVec step(u.dim, Rational(0));
    for (std::size_t j = 0; j < f.V.size(); ++j) {
      if (f.V[j].empty()) continue;
      const RatVec L = u.from_matrix(log_unipotent(r));
      Subspace basis = f.V[j];
      basis.insert(basis.end(), f.w[j + 1].begin(), f.w[j + 1].end());
      RatVec c;
      if (!solve(RatMatrix::from_columns(basis, u.dim), L, c))
        throw InvariantViolation("peeling left w_" + std::to_string(j));
      RatVec Yj(u.dim, Rational(0));
      for (std::size_t i = 0; i < f.V[j].size(); ++i) Yj = Yj + c[i] * f.V[j][i];
      r = exp_nilpotent(u.to_matrix(Rational(-1) * Yj)) * r;
      step = step + Yj;
    }
    if (is_zero(step)) {
      d.Y = u.from_matrix(log_unipotent(r));
      if (!f.u_H.empty() ? !in_span(f.u_H, d.Y, u.dim) : !is_zero(d.Y))
        throw InvariantViolation("remainder after peeling is not in u_H");
      d.iterations = round;
      return d;
    }
    d.X = d.X + step;
  }
  throw std::domain_error("peeling did not settle");
}

DecompositionCheck exp_decomposition_check(const NilpotentLieAlgebra& u, const Subspace& u_H,
                                           std::size_t samples, std::uint64_t seed) {
  if (!u.has_realization()) throw std::invalid_argument("exp decomposition check needs a matrix realization");
  const FiltrationData f = build_filtration(u, u_H);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<long> num(-5, 5), den(1, 4);
  auto coefficient = [&] {
    Rational q(num(rng), den(rng));
    q.canonicalize();
    return q;
  };
  DecompositionCheck out;
  out.samples = samples;
  for (std::size_t s = 0; s < samples; ++s) {
    RatVec X(u.dim, Rational(0)), Y(u.dim, Rational(0));
    for (const auto& v : f.V_total) X = X + coefficient() * v;
    for (const auto& v : f.u_H) Y = Y + coefficient() * v;
    if (s == 0) X.assign(u.dim, Rational(0));  // X = 0 edge case
    const RatMatrix g = exp_nilpotent(u.to_matrix(X)) * exp_nilpotent(u.to_matrix(Y));
    try {
      const Decomposition d = decompose(u, f, g);
      if (d.X == X && d.Y == Y) ++out.recovered;
    } catch (const std::domain_error&) {
    }
  }
  return out;
}

}  // namespace wavecount::mostow
