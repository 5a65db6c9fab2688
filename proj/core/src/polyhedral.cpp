#include "wavecount/polyhedral.hpp"

#include <algorithm>
#include <stdexcept>

namespace wavecount {
namespace {

struct DdRay {
  RatVec v;
  std::vector<bool> zero;  // tight constraints among those processed so far
};

int sign_of(const Rational& q) { return sgn(q); }

// Orthonormal-free complement basis of the lineality space: columns spanning
// the row space of A, so that A restricted to it has full column rank.
std::vector<RatVec> row_space(const std::vector<RatVec>& rows, std::size_t dim) {
  return span_basis(rows, dim);
}

}  // namespace

ConeGenerators h_to_v(const std::vector<RatVec>& inequalities, std::size_t dim) {
  ConeGenerators out;
  out.dim = dim;
  for (const auto& a : inequalities)
    if (a.size() != dim) throw std::invalid_argument("h_to_v: inequality dimension mismatch");

  std::vector<RatVec> nonzero;
  for (const auto& a : inequalities)
    if (!is_zero(a)) nonzero.push_back(a);

  if (nonzero.empty()) {
    for (std::size_t i = 0; i < dim; ++i) {
      RatVec e(dim, Rational(0));
      e[i] = 1;
      out.lineality.push_back(e);
    }
    return out;
  }

  RatMatrix A = RatMatrix::from_rows(nonzero, dim);
  out.lineality = nullspace(A);

  // Pointed part lives in the row space of A.
  std::vector<RatVec> basis = row_space(nonzero, dim);
  const std::size_t k = basis.size();
  RatMatrix B = RatMatrix::from_columns(basis, dim);  // dim x k
  RatMatrix Ak = A * B;                               // m x k, full column rank
  const std::size_t m = Ak.rows();

  // Greedy choice of k independent rows for the initial simplicial cone.
  std::vector<std::size_t> init;
  {
    std::vector<RatVec> chosen;
    for (std::size_t i = 0; i < m && init.size() < k; ++i) {
      chosen.push_back(Ak.row(i));
      if (rank(RatMatrix::from_rows(chosen, k)) == chosen.size()) {
        init.push_back(i);
      } else {
        chosen.pop_back();
      }
    }
  }
  if (init.size() != k) throw std::logic_error("h_to_v: rank deficiency after projection");

  std::vector<RatVec> init_rows;
  for (auto i : init) init_rows.push_back(Ak.row(i));
  RatMatrix A0inv = inverse(RatMatrix::from_rows(init_rows, k));

  std::vector<bool> processed(m, false);
  for (auto i : init) processed[i] = true;

  std::vector<DdRay> rays;
  for (std::size_t j = 0; j < k; ++j) {
    DdRay r;
    r.v = Rational(-1) * A0inv.col(j);
    r.zero.assign(m, false);
    for (std::size_t i = 0; i < m; ++i)
      if (processed[i] && dot(Ak.row(i), r.v) == 0) r.zero[i] = true;
    rays.push_back(std::move(r));
  }

  for (std::size_t row = 0; row < m; ++row) {
    if (processed[row]) continue;
    const RatVec a = Ak.row(row);
    std::vector<std::size_t> pos, neg, zer;
    std::vector<Rational> val(rays.size());
    for (std::size_t t = 0; t < rays.size(); ++t) {
      val[t] = dot(a, rays[t].v);
      int s = sign_of(val[t]);
      (s > 0 ? pos : s < 0 ? neg : zer).push_back(t);
    }
    std::vector<DdRay> next;
    for (auto t : neg) next.push_back(rays[t]);
    for (auto t : zer) {
      DdRay r = rays[t];
      r.zero[row] = true;
      next.push_back(std::move(r));
    }
    for (auto p : pos) {
      for (auto q : neg) {
        std::vector<bool> common(m, false);
        std::size_t count = 0;
        for (std::size_t i = 0; i < m; ++i)
          if (processed[i] && rays[p].zero[i] && rays[q].zero[i]) {
            common[i] = true;
            ++count;
          }
        if (k >= 2 && count + 2 < k) continue;
        bool adjacent = true;
        for (std::size_t t = 0; t < rays.size() && adjacent; ++t) {
          if (t == p || t == q) continue;
          bool contains = true;
          for (std::size_t i = 0; i < m && contains; ++i)
            if (common[i] && !rays[t].zero[i]) contains = false;
          if (contains) adjacent = false;
        }
        if (!adjacent) continue;
        DdRay r;
        r.v = val[p] * rays[q].v - val[q] * rays[p].v;
        r.zero = common;
        r.zero[row] = true;
        next.push_back(std::move(r));
      }
    }
    processed[row] = true;
    rays = std::move(next);
  }

  for (const auto& r : rays) {
    if (is_zero(r.v)) continue;
    out.rays.push_back(primitive_integral(B * r.v));
  }
  out.rays = canonical_rays(std::move(out.rays));
  return out;
}

std::vector<RatVec> v_to_h(const ConeGenerators& gens) {
  std::vector<RatVec> polar_rows;
  for (const auto& r : gens.rays) polar_rows.push_back(r);
  for (const auto& l : gens.lineality) {
    polar_rows.push_back(l);
    polar_rows.push_back(Rational(-1) * l);
  }
  ConeGenerators polar = h_to_v(polar_rows, gens.dim);
  std::vector<RatVec> ineqs = polar.rays;
  for (const auto& l : polar.lineality) {
    ineqs.push_back(primitive_integral(l));
    ineqs.push_back(primitive_integral(Rational(-1) * l));
  }
  return ineqs;
}

bool satisfies(const std::vector<RatVec>& inequalities, const RatVec& x) {
  for (const auto& a : inequalities)
    if (dot(a, x) > 0) return false;
  return true;
}

bool generators_inside(const ConeGenerators& gens, const std::vector<RatVec>& inequalities) {
  for (const auto& r : gens.rays)
    if (!satisfies(inequalities, r)) return false;
  for (const auto& l : gens.lineality)
    if (!satisfies(inequalities, l) || !satisfies(inequalities, Rational(-1) * l)) return false;
  return true;
}

std::vector<RatVec> canonical_rays(std::vector<RatVec> rays) {
  for (auto& r : rays) r = primitive_integral(r);
  std::sort(rays.begin(), rays.end());
  rays.erase(std::unique(rays.begin(), rays.end()), rays.end());
  return rays;
}

}  // namespace wavecount
