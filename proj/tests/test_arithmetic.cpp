#include "doctest.h"

#include "wavecount/arithmetic_lattice.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <vector>

using namespace wavecount;
using namespace wavecount::arithmetic;

namespace {

using Poly = std::vector<Rational>;  // ascending coefficients

const Poly kF = {-1, -2, 1, 1};  // x^3 + x^2 - 2x - 1

void trim(Poly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

Poly mul(const Poly& a, const Poly& b) {
  if (a.empty() || b.empty()) return {};
  Poly r(a.size() + b.size() - 1, Rational(0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  trim(r);
  return r;
}

Poly sub(Poly a, const Poly& b) {
  if (a.size() < b.size()) a.resize(b.size(), Rational(0));
  for (std::size_t i = 0; i < b.size(); ++i) a[i] -= b[i];
  trim(a);
  return a;
}

// long division a = q b + r
void divmod(Poly a, const Poly& b, Poly& q, Poly& r) {
  trim(a);
  q.assign(a.size() >= b.size() ? a.size() - b.size() + 1 : 1, Rational(0));
  while (a.size() >= b.size() && !a.empty()) {
    const std::size_t shift = a.size() - b.size();
    const Rational c = a.back() / b.back();
    q[shift] = c;
    for (std::size_t i = 0; i < b.size(); ++i) a[i + shift] -= c * b[i];
    trim(a);
  }
  trim(q);
  r = a;
}

Poly reduce(const Poly& a) {
  Poly q, r;
  divmod(a, kF, q, r);
  return r;
}

// inverse modulo f by the extended Euclidean algorithm
Poly inverse_mod_f(const Poly& a) {
  Poly r0 = kF, r1 = a, s0 = {}, s1 = {1};
  trim(r1);
  while (r1.size() > 1) {
    Poly q, r;
    divmod(r0, r1, q, r);
    Poly s = sub(s0, mul(q, s1));
    r0 = r1;
    r1 = r;
    s0 = s1;
    s1 = s;
  }
  REQUIRE(r1.size() == 1);
  for (auto& c : s1) c /= r1[0];
  return reduce(s1);
}

Poly as_poly(const CubicFieldElement& x) {
  Poly p = {x[0], x[1], x[2]};
  trim(p);
  return p;
}

CubicFieldElement from_poly(Poly p) {
  p.resize(3, Rational(0));
  return {p[0], p[1], p[2]};
}

CubicFieldElement random_element(std::mt19937_64& rng, int range = 6) {
  std::uniform_int_distribution<int> num(-range, range), den(1, 4);
  auto q = [&] { return ratio(num(rng), den(rng)); };
  return {q(), q(), q()};
}

// g^T S g == S and det g == 1 over the integers
bool integer_member(const std::array<long, 9>& g) {
  const long S[3] = {2, -3, -1};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      long v = 0;
      for (int k = 0; k < 3; ++k) v += g[3 * k + i] * S[k] * g[3 * k + j];
      if (v != (i == j ? S[i] : 0)) return false;
    }
  const long det = g[0] * (g[4] * g[8] - g[5] * g[7]) - g[1] * (g[3] * g[8] - g[5] * g[6]) +
                   g[2] * (g[3] * g[7] - g[4] * g[6]);
  return det == 1;
}

std::set<std::array<long, 9>> brute_gamma0(int h) {
  std::set<std::array<long, 9>> out;
  std::array<long, 9> g{};
  const long w = 2 * h + 1;
  long total = 1;
  for (int i = 0; i < 9; ++i) total *= w;
  for (long idx = 0; idx < total; ++idx) {
    long t = idx;
    for (int i = 0; i < 9; ++i) {
      g[static_cast<std::size_t>(i)] = t % w - h;
      t /= w;
    }
    if (integer_member(g)) out.insert(g);
  }
  return out;
}

std::array<long, 9> to_ints(const FormGroupElement& g) {
  std::array<long, 9> out{};
  for (int i = 0; i < 9; ++i) {
    const auto& e = g.entries()[static_cast<std::size_t>(i)];
    REQUIRE(e.is_rational());
    REQUIRE(e[0].get_den() == 1);
    out[static_cast<std::size_t>(i)] = e[0].get_num().get_si();
  }
  return out;
}

}  // namespace

TEST_SUITE("arithmetic") {

TEST_CASE("field arithmetic examples") {
  const auto t = CubicFieldElement::theta();
  CHECK(t * (t * t) == CubicFieldElement(1, 2, -1));
  CHECK(t.trace() == -1);
  CHECK(t.norm() == 1);
  const CubicFieldElement one_plus(1, 1, 0);
  CHECK(one_plus * one_plus.inverse() == CubicFieldElement(1));
  CHECK(one_plus.inverse() == from_poly(inverse_mod_f(as_poly(one_plus))));
  CHECK_THROWS_AS(CubicFieldElement().inverse(), std::domain_error);
  CHECK(defining_polynomial_discriminant() == 49);
}

TEST_CASE("field arithmetic against polynomial oracles") {
  std::mt19937_64 rng(17);
  for (int k = 0; k < 300; ++k) {
    const auto x = random_element(rng), y = random_element(rng), z = random_element(rng);
    CHECK(x * y == from_poly(reduce(mul(as_poly(x), as_poly(y)))));
    CHECK((x * y) * z == x * (y * z));
    CHECK(x * y == y * x);
    CHECK(x * (y + z) == x * y + x * z);
    if (!x.is_zero()) {
      CHECK(x.inverse() == from_poly(inverse_mod_f(as_poly(x))));
      CHECK(x * x.inverse() == CubicFieldElement(1));
    }
    // norm is the determinant of multiplication
    CHECK(x.norm() == determinant(x.multiplication_matrix()));
  }
}

TEST_CASE("Galois generator") {
  // (x^2 - 2) substituted into f, reduced modulo f by long division
  const Poly s = {-2, 0, 1};
  const Poly fs = sub(sub(mul(mul(s, s), s), Poly{1}), sub(mul(Poly{2}, s), mul(s, s)));
  CHECK(reduce(fs).empty());
  CHECK(verify_sigma_generator());
  CHECK(defining_polynomial_at(galois_sigma(CubicFieldElement::theta())).is_zero());

  const auto t = CubicFieldElement::theta();
  CHECK(galois_sigma(CubicFieldElement(Rational(7, 3))) == CubicFieldElement(Rational(7, 3)));
  CHECK(galois_sigma(galois_sigma(galois_sigma(t))) == t);
  CHECK(galois_sigma(t) != t);
  CHECK(t + galois_sigma(t) + galois_sigma(galois_sigma(t)) == CubicFieldElement(-1));
  CHECK(t * galois_sigma(t) * galois_sigma(galois_sigma(t)) == CubicFieldElement(1));
}

TEST_CASE("sigma is a ring homomorphism of order three") {
  std::mt19937_64 rng(99);
  for (int k = 0; k < 2000; ++k) {
    const auto x = random_element(rng), y = random_element(rng);
    CHECK(galois_sigma(x * y) == galois_sigma(x) * galois_sigma(y));
    CHECK(galois_sigma(x + y) == galois_sigma(x) + galois_sigma(y));
    CHECK(galois_sigma(galois_sigma(galois_sigma(x))) == x);
  }
}

TEST_CASE("real embeddings") {
  const unsigned bits = 128;
  PrecisionScope scope(bits);
  const auto ones = real_embeddings(CubicFieldElement(1), bits);
  for (const auto& v : ones) CHECK(v == 1);
  const auto roots = real_embeddings(CubicFieldElement::theta(), bits);
  const BigFloat tol = boost::multiprecision::ldexp(BigFloat(1), 8 - static_cast<int>(bits));
  CHECK(abs(roots[0] * roots[1] * roots[2] - 1) < tol);
  // roots are 2 cos(2 pi k / 7), k = 1, 2, 3, in descending order
  const BigFloat pi = boost::multiprecision::acos(BigFloat(-1));
  for (int k = 1; k <= 3; ++k) CHECK(abs(roots[static_cast<std::size_t>(k - 1)] - 2 * cos(2 * pi * k / 7)) < tol);
  CHECK(roots[0] > roots[1]);
  CHECK(roots[1] > roots[2]);
  // embeddings are ring homomorphisms
  std::mt19937_64 rng(4);
  for (int k = 0; k < 20; ++k) {
    const auto x = random_element(rng), y = random_element(rng);
    const auto ex = real_embeddings(x, bits), ey = real_embeddings(y, bits), exy = real_embeddings(x * y, bits);
    for (int j = 0; j < 3; ++j) CHECK(abs(ex[static_cast<std::size_t>(j)] * ey[static_cast<std::size_t>(j)] - exy[static_cast<std::size_t>(j)]) < tol * 1e4);
    // sigma permutes the embeddings cyclically
    const auto es = real_embeddings(galois_sigma(x), bits);
    std::vector<double> a, b;
    for (int j = 0; j < 3; ++j) {
      a.push_back(ex[static_cast<std::size_t>(j)].convert_to<double>());
      b.push_back(es[static_cast<std::size_t>(j)].convert_to<double>());
    }
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    for (int j = 0; j < 3; ++j) CHECK(a[static_cast<std::size_t>(j)] == doctest::Approx(b[static_cast<std::size_t>(j)]).epsilon(1e-12));
  }
}

TEST_CASE("is_in_group examples") {
  CHECK(is_in_group(FormGroupElement()));
  CHECK(is_in_group(FormGroupElement::from_integers({1, 0, 0, 0, -1, 0, 0, 0, -1})));
  CHECK_FALSE(is_in_group(FormGroupElement::from_integers({1, 0, 0, 0, 1, 0, 0, 0, -1})));
  CHECK_FALSE(is_in_group(FormGroupElement::from_integers({1, 1, 0, 0, 1, 0, 0, 0, 1})));
}

TEST_CASE("enumerate_gamma0 against brute force") {
  for (int h : {1, 2}) {
    std::set<std::array<long, 9>> lib;
    for (const auto& g : enumerate_gamma0(h)) {
      CHECK(is_in_group(g));
      lib.insert(to_ints(g));
    }
    CHECK(lib == brute_gamma0(h));
  }
  const auto h1 = enumerate_gamma0(1);
  std::set<std::array<long, 9>> s1;
  for (const auto& g : h1) s1.insert(to_ints(g));
  for (const auto& d : std::vector<std::array<long, 9>>{
           {1, 0, 0, 0, 1, 0, 0, 0, 1}, {1, 0, 0, 0, -1, 0, 0, 0, -1}, {-1, 0, 0, 0, 1, 0, 0, 0, -1}, {-1, 0, 0, 0, -1, 0, 0, 0, 1}})
    CHECK(s1.count(d) == 1);
  // the budget counts (2h+1)^3 = 343 column candidates
  CHECK_THROWS_AS(enumerate_gamma0(3, 100), BudgetExceeded);
}

TEST_CASE("height-3 group closure") {
  const auto all = enumerate_gamma0(3);
  const std::set<FormGroupElement> set(all.begin(), all.end());
  CHECK(std::is_sorted(all.begin(), all.end()));
  for (const auto& g : all) {
    const auto inv = g.group_inverse();
    CHECK(inv * g == FormGroupElement());
    bool inv_bounded = true;
    for (const auto& e : inv.entries()) inv_bounded = inv_bounded && abs(e[0]) <= 3;
    if (inv_bounded) CHECK(set.count(inv) == 1);
    for (const auto& h : all) {
      const auto gh = g * h;
      CHECK(is_in_group(gh));
      bool bounded = true;
      for (const auto& e : gh.entries()) bounded = bounded && abs(e[0]) <= 3;
      if (bounded) CHECK(set.count(gh) == 1);
    }
  }
}

TEST_CASE("triple embedding") {
  const auto id = triple_embed(FormGroupElement(), 128);
  for (int j = 0; j < 3; ++j) CHECK((id.component(j) - Eigen::Matrix3d::Identity()).norm() == 0);
  const auto g = FormGroupElement::from_integers({1, 0, 0, 0, -1, 0, 0, 0, -1});
  const auto tg = triple_embed(g, 128);
  CHECK(tg.component(0) == tg.component(1));
  CHECK(tg.component(1) == tg.component(2));
  CHECK(embedded_form_defect(tg) < 1e-9);
  for (const auto& x : find_irrational_elements(3)) {
    CHECK(is_in_group(x));
    CHECK_FALSE(x.is_rational());
    const auto p = triple_embed(x, 128);
    CHECK(embedded_form_defect(p) < 1e-9);
    CHECK((p.component(0) - p.component(1)).norm() > 1e-6);
    CHECK((p.component(1) - p.component(2)).norm() > 1e-6);
    CHECK((p.component(0) - p.component(2)).norm() > 1e-6);
    // component j is the first component of sigma^j(x)
    CHECK((triple_embed(x.apply_sigma(), 128).component(0) - p.component(1)).norm() < 1e-12);
  }
  CHECK_THROWS_AS(triple_embed(FormGroupElement::from_integers({1, 1, 0, 0, 1, 0, 0, 0, 1}), 128), InvariantViolation);
}

TEST_CASE("count_norm_ball") {
  const auto all = enumerate_gamma0(3);
  auto vol = [](double R) { return R * R; };
  const auto below = count_norm_ball(all, {1.7}, vol);
  CHECK(below.counts.front() == 0);
  const auto c = count_norm_ball(all, {2.0, 3.0, 5.0, 8.0}, vol);
  std::uint64_t oracle = 0;
  for (const auto& g : all) {
    long s = 0;
    for (auto v : to_ints(g)) s += v * v;
    if (s < 4) ++oracle;
  }
  CHECK(c.counts[0] == oracle);
  CHECK(std::is_sorted(c.counts.begin(), c.counts.end()));
  std::vector<TripleLatticePoint> pts;
  for (const auto& g : all) pts.push_back(triple_embed(g, 128));
  const auto t = count_norm_ball(pts, {2.0, 3.0, 5.0, 8.0}, vol);
  CHECK(t.counts == c.counts);  // rational points embed diagonally
}

TEST_CASE("anisotropy witness") {
  CHECK(anisotropic_up_to(50));
  bool none = true;
  for (long a = -12; a <= 12; ++a)
    for (long b = -12; b <= 12; ++b)
      for (long c = -12; c <= 12; ++c)
        if ((a || b || c) && 2 * a * a - 3 * b * b - c * c == 0) none = false;
  CHECK(none);
}

}  // TEST_SUITE
