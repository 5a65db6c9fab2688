#include "wavecount/spherical_structure.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <stdexcept>

namespace wavecount::spherical {

namespace {

void require_dim(const RatVec& v, std::size_t dim, const char* what) {
  if (v.size() != dim) throw std::invalid_argument(std::string(what) + " has the wrong dimension");
}

bool contains(const std::vector<RatVec>& list, const RatVec& v) {
  return std::find(list.begin(), list.end(), v) != list.end();
}

RatVec negate(const RatVec& v) { return Rational(-1) * v; }

// Largest positive rational g with q / g integral for every q in the list.
Rational rational_gcd(const std::vector<Rational>& values) {
  mpz_class num = 0, den = 1;
  for (const auto& q : values) {
    num = gcd(num, abs(q.get_num()));
    den = lcm(den, q.get_den());
  }
  Rational g(num, den);
  g.canonicalize();
  return g;
}

}  // namespace

RatMatrix RootSystemData::inner_product() const {
  if (gram.rows() == 0) return RatMatrix::identity(dim_a);
  return gram;
}

std::vector<RatVec> RootSystemData::positive_roots() const {
  std::vector<RatVec> out;
  for (auto i : positive) out.push_back(roots.at(i));
  return out;
}

std::vector<RatVec> RootSystemData::u_roots() const {
  if (sigma_u.empty()) return positive_roots();
  std::vector<RatVec> out;
  for (auto i : sigma_u) out.push_back(roots.at(i));
  return out;
}

std::vector<RatVec> RootSystemData::a_Z_basis() const {
  if (a_H.empty()) {
    std::vector<RatVec> e;
    for (std::size_t i = 0; i < dim_a; ++i) e.push_back(RatMatrix::identity(dim_a).row(i));
    return e;
  }
  const RatMatrix G = inner_product();
  std::vector<RatVec> rows;
  for (const auto& h : a_H) rows.push_back(G * h);
  return nullspace(RatMatrix::from_rows(rows, dim_a));
}

void RootSystemData::validate() const {
  if (dim_a == 0) throw std::invalid_argument("dim_a must be positive");
  for (const auto& r : roots) {
    require_dim(r, dim_a, "root");
    if (is_zero(r)) throw std::invalid_argument("roots must be nonzero");
  }
  for (const auto& h : a_H) require_dim(h, dim_a, "a_H basis vector");
  if (!a_H.empty() && rank(RatMatrix::from_rows(a_H, dim_a)) != a_H.size())
    throw std::invalid_argument("a_H basis is linearly dependent");
  if (gram.rows() != 0) {
    if (gram.rows() != dim_a || gram.cols() != dim_a || !(gram == gram.transpose()))
      throw std::invalid_argument("gram must be a symmetric dim_a x dim_a matrix");
    for (std::size_t k = 1; k <= dim_a; ++k) {
      RatMatrix minor(k, k);
      for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) minor(i, j) = gram(i, j);
      if (determinant(minor) <= 0) throw std::invalid_argument("gram must be positive definite");
    }
  }
  std::set<std::size_t> pos(positive.begin(), positive.end());
  for (auto i : positive)
    if (i >= roots.size()) throw std::invalid_argument("positive index out of range");
  for (std::size_t i = 0; i < roots.size(); ++i) {
    const bool neg_listed = contains(roots, negate(roots[i]));
    if (!neg_listed) throw std::invalid_argument("root system must be closed under negation");
    const auto j = static_cast<std::size_t>(std::find(roots.begin(), roots.end(), negate(roots[i])) - roots.begin());
    if (pos.count(i) == pos.count(j))
      throw std::invalid_argument("exactly one of each root pair must be positive");
  }
  for (auto i : sigma_u)
    if (!pos.count(i)) throw std::invalid_argument("Sigma_u must be a subset of the positive roots");
  if (positive.empty()) return;
  std::vector<RatVec> rows;
  for (auto i : positive) rows.push_back(negate(roots[i]));
  const ConeGenerators c = h_to_v(rows, dim_a);
  RatVec x(dim_a, Rational(0));
  for (const auto& r : c.rays) x = x + r;
  for (auto i : positive)
    if (dot(roots[i], x) <= 0)
      throw std::invalid_argument("positive roots are not cut out by a generic functional");
}

void TFlagData::validate(const RootSystemData& roots) const {
  const std::vector<RatVec> u = roots.u_roots();
  for (const auto& f : pairs) {
    if (!contains(u, f.alpha)) throw std::invalid_argument("flag alpha is not in Sigma_u");
    if (f.beta && !contains(u, *f.beta)) throw std::invalid_argument("flag beta is neither 0 nor in Sigma_u");
    for (const auto& Y : roots.a_H) {
      const Rational b = f.beta ? dot(*f.beta, Y) : Rational(0);
      if (-dot(f.alpha, Y) != b)
        throw std::invalid_argument("flag violates -alpha(Y) = beta(Y) on a_H");
    }
  }
}

std::vector<RatVec> compute_M(const TFlagData& flags, const RootSystemData& roots) {
  flags.validate(roots);
  std::vector<RatVec> M;
  for (const auto& f : flags.pairs) {
    const RatVec m = f.beta ? f.alpha + *f.beta : f.alpha;
    for (const auto& Y : roots.a_H)
      if (dot(m, Y) != 0) throw std::invalid_argument("inconsistent flags: alpha + beta does not vanish on a_H");
    M.push_back(m);
  }
  std::sort(M.begin(), M.end());
  M.erase(std::unique(M.begin(), M.end()), M.end());
  return M;
}

std::optional<RatVec> coordinates_in(const std::vector<RatVec>& S, const RatVec& m) {
  if (S.empty()) {
    if (is_zero(m)) return RatVec{};
    return std::nullopt;
  }
  RatVec x;
  if (!solve(RatMatrix::from_columns(S, m.size()), m, x)) return std::nullopt;
  return x;
}

bool in_monoid(const std::vector<RatVec>& S, const std::vector<RatVec>& M) {
  for (const auto& m : M) {
    const auto c = coordinates_in(S, m);
    if (!c) return false;
    for (const auto& q : *c)
      if (q < 0 || q.get_den() != 1) return false;
  }
  return true;
}

std::vector<RatVec> spherical_roots(const std::vector<RatVec>& M) {
  if (M.empty()) throw std::invalid_argument("spherical_roots needs a nonempty M");
  const std::size_t dim = M.front().size();
  for (const auto& m : M) {
    require_dim(m, dim, "element of M");
    if (is_zero(m)) throw std::invalid_argument("M contains the zero covector");
  }
  ConeGenerators gens;
  gens.dim = dim;
  gens.rays = M;
  const ConeGenerators extreme = h_to_v(v_to_h(gens), dim);
  if (!extreme.lineality.empty()) throw std::domain_error("cone(M) is not pointed");
  const std::size_t span_dim = rank(RatMatrix::from_rows(M, dim));
  if (extreme.rays.size() != span_dim)
    throw std::domain_error("cone(M) is not simplicial: " + std::to_string(extreme.rays.size()) +
                            " extreme rays in a span of dimension " + std::to_string(span_dim));
  const std::vector<RatVec>& rays = extreme.rays;
  std::vector<std::vector<Rational>> coeffs(rays.size());
  for (const auto& m : M) {
    const auto c = coordinates_in(rays, m);
    if (!c) throw std::logic_error("element of M outside the span of its extreme rays");
    for (std::size_t i = 0; i < rays.size(); ++i) {
      if ((*c)[i] < 0) throw std::logic_error("element of M outside its own cone");
      if ((*c)[i] != 0) coeffs[i].push_back((*c)[i]);
    }
  }
  std::vector<RatVec> S;
  for (std::size_t i = 0; i < rays.size(); ++i) S.push_back(rational_gcd(coeffs[i]) * rays[i]);
  if (!in_monoid(S, M)) throw std::domain_error("no integral spherical-root scaling exists");
  return S;
}

ConeGenerators CompressionCone::generators() const { return h_to_v(S, dim_a); }

std::size_t CompressionCone::facets() const {
  const std::vector<RatVec> h = v_to_h(generators());
  std::size_t n = 0;
  for (const auto& r : h)
    if (!contains(h, negate(r))) ++n;
  return n;
}

CompressionCone compression_cone(const std::vector<RatVec>& S, std::size_t dim_a,
                                 std::vector<RatVec> a_H, RatMatrix gram) {
  for (const auto& s : S) require_dim(s, dim_a, "spherical root");
  if (!S.empty() && rank(RatMatrix::from_rows(S, dim_a)) != S.size())
    throw std::invalid_argument("spherical roots must be linearly independent");
  for (const auto& h : a_H) {
    require_dim(h, dim_a, "a_H basis vector");
    for (const auto& s : S)
      if (dot(s, h) != 0) throw std::invalid_argument("spherical roots must vanish on a_H");
  }
  CompressionCone c;
  c.dim_a = dim_a;
  c.a_H = std::move(a_H);
  c.gram = std::move(gram);
  c.S = S;
  return c;
}

CompressionCone compression_cone(const RootSystemData& roots, const TFlagData& flags) {
  roots.validate();
  std::vector<RatVec> M = compute_M(flags, roots);
  std::vector<RatVec> S = M.empty() ? std::vector<RatVec>{} : spherical_roots(M);
  CompressionCone c = compression_cone(S, roots.dim_a, roots.a_H, roots.gram);
  c.M = std::move(M);
  return c;
}

ConeGenerators negative_chamber_plus_a_H(const RootSystemData& roots) {
  ConeGenerators g = h_to_v(roots.positive_roots(), roots.dim_a);
  std::vector<RatVec> lin = g.lineality;
  lin.insert(lin.end(), roots.a_H.begin(), roots.a_H.end());
  g.lineality = span_basis(lin, roots.dim_a);
  return g;
}

WavefrontReport wavefront_report(const RootSystemData& roots, const CompressionCone& cone) {
  if (cone.dim_a != roots.dim_a) throw std::invalid_argument("cone and root data dimensions differ");
  WavefrontReport r;
  const ConeGenerators lower = negative_chamber_plus_a_H(roots);
  const ConeGenerators upper = cone.generators();
  r.cone_is_full = upper.lineality.size() == cone.dim_a;
  r.inclusion = generators_inside(lower, cone.inequalities());
  r.wavefront = r.inclusion && generators_inside(upper, v_to_h(lower));
  return r;
}

bool is_wavefront(const RootSystemData& roots, const CompressionCone& cone) {
  return wavefront_report(roots, cone).wavefront;
}

namespace {

RatMatrix symmetric_form(const std::string& name) {
  if (name == "A1") return {{2}};
  if (name == "A2") return {{2, -1}, {-1, 2}};
  if (name == "A3") return {{2, -1, 0}, {-1, 2, -1}, {0, -1, 2}};
  if (name == "B2") return {{2, -1}, {-1, 1}};
  if (name == "B3") return {{2, -1, 0}, {-1, 2, -1}, {0, -1, 1}};
  if (name == "G2") return {{2, -3}, {-3, 6}};
  if (name == "A1xA1") return {{2, 0}, {0, 2}};
  const auto plus = name.find('+');
  if (plus != std::string::npos && name.substr(0, plus) == name.substr(plus + 1)) {
    const RatMatrix b = symmetric_form(name.substr(0, plus));
    const std::size_t r = b.rows();
    RatMatrix out(2 * r, 2 * r);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < r; ++j) out(i, j) = out(r + i, r + j) = b(i, j);
    return out;
  }
  throw std::invalid_argument("unknown root system '" + name + "'");
}

RatVec apply(const RatMatrix& m, const RatVec& v) { return m * v; }

}  // namespace

RatMatrix simple_reflection(const RootSystem& rs, std::size_t i) {
  const std::size_t r = rs.cartan.rows();
  if (i >= r) throw std::invalid_argument("simple reflection index out of range");
  RatMatrix m = RatMatrix::identity(r);
  for (std::size_t j = 0; j < r; ++j) m(i, j) -= rs.cartan(j, i);
  return m;
}

RatMatrix summand_swap(const RootSystem& rs) {
  const std::size_t n = rs.cartan.rows();
  if (n % 2 != 0 || rs.name.find('+') == std::string::npos)
    throw std::invalid_argument("summand_swap needs a root system of the form X+X");
  const std::size_t r = n / 2;
  RatMatrix m(n, n);
  for (std::size_t i = 0; i < r; ++i) m(i, r + i) = m(r + i, i) = 1;
  return m;
}

RootSystem root_system(const std::string& name) {
  const RatMatrix B = symmetric_form(name);
  const std::size_t r = B.rows();
  RootSystem rs;
  rs.name = name;
  rs.cartan = RatMatrix(r, r);
  for (std::size_t j = 0; j < r; ++j)
    for (std::size_t i = 0; i < r; ++i) rs.cartan(j, i) = 2 * B(j, i) / B(i, i);
  std::vector<RatMatrix> refl;
  for (std::size_t i = 0; i < r; ++i) refl.push_back(simple_reflection(rs, i));
  std::set<RatVec> seen;
  std::vector<RatVec> frontier;
  for (std::size_t i = 0; i < r; ++i) {
    RatVec e(r, Rational(0));
    e[i] = 1;
    if (seen.insert(e).second) frontier.push_back(e);
  }
  while (!frontier.empty()) {
    std::vector<RatVec> next;
    for (const auto& v : frontier)
      for (const auto& s : refl) {
        RatVec w = apply(s, v);
        if (seen.insert(w).second) next.push_back(std::move(w));
      }
    frontier = std::move(next);
  }
  std::vector<RatVec> pos;
  for (const auto& v : seen)
    if (std::all_of(v.begin(), v.end(), [](const Rational& q) { return q >= 0; })) pos.push_back(v);
  auto height = [](const RatVec& v) {
    Rational h = 0;
    for (const auto& q : v) h += q;
    return h;
  };
  std::sort(pos.begin(), pos.end(), [&](const RatVec& a, const RatVec& b) {
    const Rational ha = height(a), hb = height(b);
    if (ha != hb) return ha < hb;
    return a > b;
  });
  if (2 * pos.size() != seen.size()) throw std::logic_error("root system generation failed");
  rs.roots = pos;
  for (const auto& p : pos) rs.roots.push_back(negate(p));
  rs.positive_count = pos.size();
  return rs;
}

SymmetricPairInput symmetric_pair_input(const RootSystem& rs, const RatMatrix& sigma,
                                        std::string label) {
  const std::size_t n = rs.cartan.rows();
  if (sigma.rows() != n || sigma.cols() != n) throw std::invalid_argument("sigma has the wrong size");
  if (!(sigma * sigma == RatMatrix::identity(n))) throw std::invalid_argument("sigma is not an involution");
  for (const auto& a : rs.roots)
    if (!contains(rs.roots, sigma * a)) throw std::invalid_argument("sigma does not preserve the roots");

  // sigma acts on a by the transpose
  const RatMatrix st = sigma.transpose();
  const RatMatrix I = RatMatrix::identity(n);
  const std::vector<RatVec> a_H = nullspace(st - I);
  const std::vector<RatVec> a_Z = nullspace(st + I);

  auto generic = [&](const std::vector<RatVec>& basis, const std::vector<RatVec>& must_be_nonzero) {
    for (long t = 2;; ++t) {
      RatVec y(n, Rational(0));
      Rational c = 1;
      for (const auto& b : basis) {
        y = y + c * b;
        c *= t;
      }
      if (std::all_of(must_be_nonzero.begin(), must_be_nonzero.end(),
                      [&](const RatVec& a) { return dot(a, y) != 0; }))
        return y;
      if (t > 1000) throw std::logic_error("no generic element found");
    }
  };
  std::vector<RatVec> off_Z, on_Z;
  for (const auto& a : rs.roots) {
    bool vanishes = true;
    for (const auto& z : a_Z)
      if (dot(a, z) != 0) vanishes = false;
    (vanishes ? on_Z : off_Z).push_back(a);
  }
  const RatVec YZ = a_Z.empty() ? RatVec(n, Rational(0)) : generic(a_Z, off_Z);
  const RatVec YH = a_H.empty() ? RatVec(n, Rational(0)) : generic(a_H, on_Z);

  SymmetricPairInput in;
  in.label = std::move(label);
  in.roots.dim_a = n;
  in.roots.roots = rs.roots;
  in.roots.a_H = a_H;
  // W-invariant inner product on a, so that a_Z is the orthogonal complement of a_H
  in.roots.gram = inverse(symmetric_form(rs.name));
  for (std::size_t i = 0; i < rs.roots.size(); ++i) {
    const RatVec& a = rs.roots[i];
    const Rational z = dot(a, YZ);
    const bool positive = z != 0 ? z > 0 : dot(a, YH) > 0;
    if (!positive) continue;
    in.roots.positive.push_back(i);
    if (z != 0) in.roots.sigma_u.push_back(i);
  }
  for (auto i : in.roots.sigma_u) {
    TFlag f;
    f.alpha = rs.roots[i];
    f.beta = negate(sigma * f.alpha);
    in.flags.pairs.push_back(std::move(f));
  }
  return in;
}

std::vector<SymmetricPairInput> symmetric_pair_family() {
  std::vector<SymmetricPairInput> out;
  auto minus = [](const RatMatrix& m) { return Rational(-1) * m; };
  auto add = [&](const std::string& type, const RatMatrix& sigma, const std::string& what) {
    const RootSystem rs = root_system(type);
    out.push_back(symmetric_pair_input(rs, sigma, type + " " + what));
  };
  add("A1", minus(RatMatrix::identity(1)), "sigma=-1");
  add("A1", RatMatrix::identity(1), "sigma=id");
  for (const std::string type : {"A2", "B2", "G2", "A3", "B3"}) {
    const RootSystem rs = root_system(type);
    const std::size_t r = rs.cartan.rows();
    add(type, minus(RatMatrix::identity(r)), "sigma=-1");
    add(type, minus(simple_reflection(rs, 0)), "sigma=-s1");
    add(type, minus(simple_reflection(rs, r - 1)), "sigma=-s" + std::to_string(r));
  }
  add("A1xA1", minus(RatMatrix::identity(2)), "sigma=-1");
  add("A1+A1", summand_swap(root_system("A1+A1")), "group case");
  add("A2+A2", summand_swap(root_system("A2+A2")), "group case");
  return out;
}

std::vector<TableRow> load_table1(const std::string& path) {
  std::string file = path;
  if (file.empty()) {
    const char* dir = std::getenv("WAVECOUNT_DATA_DIR");
    file = std::string(dir ? dir : WAVECOUNT_DATA_DIR) + "/table1.json";
  }
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot open " + file);
  std::vector<TableRow> rows;
  try {
    const nlohmann::json doc = nlohmann::json::parse(in);
    auto text = [](const nlohmann::json& v) { return v.is_null() ? std::string() : v.get<std::string>(); };
    for (const auto& r : doc.at("rows")) {
      TableRow t;
      t.row = r.at("row").get<int>();
      t.g = text(r.at("g"));
      t.h = text(r.at("h"));
      t.f = text(r.at("f"));
      t.condition = text(r.at("condition"));
      t.symmetric_overalgebra = r.at("symmetric_overalgebra").get<bool>();
      const auto& rr = r.at("real_rank_one");
      t.real_rank_one = rr.is_boolean() ? (rr.get<bool>() ? "yes" : "no") : rr.get<std::string>();
      rows.push_back(std::move(t));
    }
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("malformed table file " + file + ": " + e.what());
  }
  return rows;
}

double d_formula(unsigned l, double p, unsigned dim_aZ, unsigned dim_g) {
  if (!(p >= 1)) throw std::invalid_argument("p must be at least 1");
  if (dim_aZ == 0) throw std::invalid_argument("dim a_Z must be positive");
  if (dim_g == 0) throw std::invalid_argument("dim g must be positive");
  return (l * p + dim_aZ * (l + dim_g + 1.0)) / 4;
}

double r_pi(unsigned k, double delta, double pi_abs, double C) {
  if (!(delta > 0)) throw std::invalid_argument("delta must be positive");
  if (!(C > 0)) throw std::invalid_argument("C must be positive");
  if (!(pi_abs >= 0)) throw std::invalid_argument("|pi| must be nonnegative");
  return (k + 8.0) / (2 * delta) * std::log1p(pi_abs) + std::log(2 * C) / delta;
}

std::pair<double, double> sobinf_bounds(int k, double chi_abs) {
  if (k < 0 || k % 2 != 0) throw std::invalid_argument("k must be even and nonnegative");
  if (!(chi_abs >= 0)) throw std::invalid_argument("|chi| must be nonnegative");
  const double f = std::pow(1 + chi_abs, k / 2);
  return {f, f};
}

}  // namespace wavecount::spherical
