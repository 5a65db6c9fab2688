#include "doctest.h"

#include "wavecount/polyhedral.hpp"
#include "wavecount/spherical_structure.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

using namespace wavecount;
using namespace wavecount::spherical;

namespace {

RootSystemData rank_one(std::vector<RatVec> a_H = {}) {
  RootSystemData r;
  r.dim_a = 1;
  r.roots = {{1}, {-1}};
  r.positive = {0};
  r.a_H = std::move(a_H);
  return r;
}

// independent N0-membership: search small nonnegative integer combinations
bool monoid_oracle(const std::vector<RatVec>& S, const RatVec& m, int bound = 12) {
  if (S.size() == 1) {
    for (int a = 0; a <= bound; ++a)
      if (Rational(a) * S[0] == m) return true;
    return false;
  }
  for (int a = 0; a <= bound; ++a)
    for (int b = 0; b <= bound; ++b)
      if (Rational(a) * S[0] + Rational(b) * S[1] == m) return true;
  return false;
}

std::set<RatVec> as_set(const std::vector<RatVec>& v) { return {v.begin(), v.end()}; }

}  // namespace

TEST_SUITE("spherical") {

TEST_CASE("compute_M") {
  auto roots = rank_one();
  TFlagData flags;
  flags.pairs.push_back({{1}, RatVec{1}});
  CHECK(compute_M(flags, roots) == std::vector<RatVec>{{2}});
  // duplicates collapse
  flags.pairs.push_back({{1}, RatVec{1}});
  CHECK(compute_M(flags, roots).size() == 1);
  const auto empty = compression_cone(roots, TFlagData{});
  CHECK(empty.M.empty());
  CHECK(empty.S.empty());
  CHECK(empty.generators().lineality.size() == 1);  // cone_minus = a_Z
}

TEST_CASE("symmetric pair on sl(2)") {
  const auto in = symmetric_pair_input(root_system("A1"), RatMatrix{{-1}}, "sl2");
  REQUIRE(in.flags.pairs.size() == 1);
  CHECK(in.flags.pairs[0].alpha == in.flags.pairs[0].beta.value());  // beta = -sigma alpha = alpha
  const auto cone = compression_cone(in.roots, in.flags);
  const RatVec two_alpha = Rational(2) * in.flags.pairs[0].alpha;
  CHECK(cone.M == std::vector<RatVec>{two_alpha});
  CHECK(cone.S == std::vector<RatVec>{two_alpha});
  CHECK(is_wavefront(in.roots, cone));
  CHECK_THROWS_AS(symmetric_pair_input(root_system("A2"), RatMatrix{{1, 1}, {0, 1}}, "bad"), std::invalid_argument);
}

TEST_CASE("flag validation") {
  auto roots = rank_one({{1}});
  TFlagData flags;
  flags.pairs.push_back({{1}, RatVec{1}});  // -alpha(Y) != beta(Y) on a_H
  CHECK_THROWS_AS(flags.validate(roots), std::invalid_argument);
  TFlagData outside;
  outside.pairs.push_back({{3}, std::nullopt});
  CHECK_THROWS_AS(outside.validate(rank_one()), std::invalid_argument);
}

TEST_CASE("spherical_roots examples") {
  CHECK(spherical_roots({{2}}) == std::vector<RatVec>{{2}});
  const std::vector<RatVec> M = {{2, 0}, {0, 2}, {1, 1}};
  const auto S = spherical_roots(M);
  CHECK(as_set(S) == as_set({{1, 0}, {0, 1}}));
  // exhaustive oracle over ray scalings k/4, k = 1..16: the admissible scalings are
  // exactly those dividing the returned ones
  std::vector<std::pair<Rational, Rational>> admissible;
  for (int a = 1; a <= 16; ++a)
    for (int b = 1; b <= 16; ++b) {
      const std::vector<RatVec> cand = {{ratio(a, 4), 0}, {0, ratio(b, 4)}};
      bool ok = true;
      for (const auto& m : M) ok = ok && monoid_oracle(cand, m, 16);
      if (ok) admissible.emplace_back(ratio(a, 4), ratio(b, 4));
    }
  CHECK(std::find(admissible.begin(), admissible.end(), std::make_pair(Rational(1), Rational(1))) != admissible.end());
  for (const auto& [a, b] : admissible) {
    CHECK(a <= 1);
    CHECK(b <= 1);
  }
  CHECK(as_set(spherical_roots({{1, 0}, {0, 1}, {1, 1}})) == as_set({{1, 0}, {0, 1}}));
  CHECK_THROWS_AS(spherical_roots({}), std::invalid_argument);
  CHECK_THROWS_AS(spherical_roots({{1, 0, 1}, {0, 1, 1}, {-1, 0, 1}, {0, -1, 1}}), std::domain_error);
}

TEST_CASE("spherical roots are permutation invariant and generate M") {
  std::vector<RatVec> M = {{2, -1}, {-1, 2}, {1, 1}, {3, 0}, {0, 3}};
  const auto S = canonical_rays(spherical_roots(M));
  std::mt19937_64 rng(8);
  for (int k = 0; k < 10; ++k) {
    std::shuffle(M.begin(), M.end(), rng);
    CHECK(canonical_rays(spherical_roots(M)) == S);
  }
  CHECK(rank(RatMatrix::from_rows(S, 2)) == S.size());
  CHECK(in_monoid(S, M));
  for (const auto& m : M) CHECK(monoid_oracle(S, m));
  // cone(S) = cone(M): every m has nonnegative coordinates and S lies in cone(M)
  for (const auto& m : M) {
    const auto c = coordinates_in(S, m);
    REQUIRE(c);
    for (const auto& x : *c) CHECK(x >= 0);
  }
}

TEST_CASE("compression cone shapes") {
  const auto half = compression_cone({{2}}, 1);
  CHECK(half.generators().rays == std::vector<RatVec>{{-1}});
  CHECK(half.generators().lineality.empty());
  const auto all = compression_cone({}, 2);
  CHECK(all.generators().lineality.size() == 2);
  const auto quad = compression_cone({{1, 0}, {0, 1}}, 2);
  CHECK(quad.facets() == 2);
  CHECK(as_set(quad.generators().rays) == as_set({{-1, 0}, {0, -1}}));
  const auto a2 = compression_cone({{2, -1}, {-1, 2}}, 2);
  CHECK(a2.facets() == 2);
  // double-description oracle: rays are where one inequality is tight and the other holds
  for (const auto& r : a2.generators().rays) {
    int tight = 0;
    for (const auto& s : a2.S) {
      CHECK(dot(s, r) <= 0);
      if (dot(s, r) == 0) ++tight;
    }
    CHECK(tight == 1);
  }
}

TEST_CASE("wavefront predicate") {
  // S empty, a_H = 0: cone_minus = a but a^- + a_H is a half-line
  const auto roots = rank_one();
  const auto cone = compression_cone(roots, TFlagData{});
  const auto rep = wavefront_report(roots, cone);
  CHECK_FALSE(rep.wavefront);
  CHECK(rep.cone_is_full);
  CHECK(rep.inclusion);
  // a_H = a: nothing left of a_Z
  const auto full = rank_one({{1}});
  CHECK(is_wavefront(full, compression_cone(full, TFlagData{})));
}

TEST_CASE("symmetric-pair family") {
  const auto family = symmetric_pair_family();
  CHECK(family.size() == 20);
  std::set<std::string> labels;
  for (const auto& in : family) {
    labels.insert(in.label);
    const auto cone = compression_cone(in.roots, in.flags);
    const auto rep = wavefront_report(in.roots, cone);
    CHECK_MESSAGE(rep.wavefront, in.label);
    CHECK_MESSAGE(rep.inclusion, in.label);
    // a full cone only happens when a_H already fills a
    if (rep.cone_is_full) CHECK(in.roots.a_H.size() == in.roots.dim_a);
    CHECK(in_monoid(cone.S, cone.M));
    CHECK(rank(RatMatrix::from_rows(cone.S, in.roots.dim_a)) == cone.S.size());
    // inclusion checked independently: every generator of a^- + a_H satisfies S <= 0
    const auto neg = negative_chamber_plus_a_H(in.roots);
    for (const auto& r : neg.rays) CHECK(satisfies(cone.S, r));
    for (const auto& l : neg.lineality) {
      CHECK(satisfies(cone.S, l));
      CHECK(satisfies(cone.S, Rational(-1) * l));
    }
  }
  CHECK(labels.size() == family.size());
}

TEST_CASE("face decomposition, rank one") {
  const auto fd = face_decomposition(compression_cone({{2}}, 1), Rational(1, 10));
  REQUIRE(fd.regions.size() == 1);
  CHECK(fd.regions[0].I == 0);
  for (int k = 1; k < 20; ++k) CHECK(fd.in_region(0, {ratio(-k, 3)}));
  CHECK_THROWS_AS(face_decomposition(compression_cone({}, 1)), std::domain_error);
}

TEST_CASE("face decomposition coverage, rank two") {
  std::mt19937_64 rng(12345);
  std::uniform_int_distribution<int> num(-400, 400);
  for (const auto& S : std::vector<std::vector<RatVec>>{{{1, 0}, {0, 1}}, {{2, -1}, {-1, 2}}}) {
    const auto fd = face_decomposition(compression_cone(S, 2), Rational(1, 10));
    CHECK(fd.regions.size() == 3);
    int covered = 0, tried = 0;
    while (tried < 20000) {
      const RatVec X = {ratio(num(rng), 97), ratio(num(rng), 89)};
      if (dot(S[0], X) > 0 || dot(S[1], X) > 0) continue;  // rejection sampling into the cone
      ++tried;
      if (!fd.regions_containing(X).empty()) ++covered;
    }
    CHECK(covered == tried);
  }
}

TEST_CASE("face regions: faces and compact witnesses") {
  const std::vector<RatVec> S = {{1, 0}, {0, 1}};
  const auto fd = face_decomposition(compression_cone(S, 2), Rational(1, 10));
  // on the face {tau_0 = 0} the projection is the identity
  CHECK(fd.in_region(0b01, {0, -3}));
  CHECK(fd.in_region(0b10, {Rational(-5, 2), 0}));
  // X_I for I = {tau_0} drops the first coordinate; it lies in R_{>=0} C_I
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> num(1, 500);
  for (int k = 0; k < 2000; ++k) {
    const RatVec X = {ratio(-num(rng), 37), ratio(-num(rng), 41)};
    for (auto I : fd.regions_containing(X)) {
      RatVec XI = X;
      for (std::size_t t = 0; t < 2; ++t)
        if (I >> t & 1U) XI[t] = 0;
      CHECK(fd.in_compact_cone(I, XI));
      const Rational n2 = dot(X, X), p2 = dot(XI, XI);
      CHECK(n2 <= Rational(121, 100) * p2);
    }
  }
  CHECK_THROWS_AS(fd.in_region(0b11, {-1, -1}), std::invalid_argument);
}

TEST_CASE("numeric calculators") {
  CHECK_THROWS(d_formula(0, 1, 0, 3));
  CHECK(d_formula(2, 2, 1, 3) == doctest::Approx(2.5));
  CHECK(d_formula(2, 4, 1, 3) == doctest::Approx(3.5));
  CHECK(r_pi(2, 0.4, 0, 0.5) == 0);
  CHECK(r_pi(0, 1, std::exp(1.0) - 1, 0.5) == doctest::Approx(4).epsilon(1e-14));
  double prev = -1;
  for (double p = 0; p < 100; p += 3.7) {
    const double v = r_pi(4, 0.3, p, 2);
    CHECK(v > prev);
    prev = v;
  }
  CHECK(sobinf_bounds(0, 17).first == 1);
  CHECK(sobinf_bounds(2, 3).first == doctest::Approx(4));
  CHECK(sobinf_bounds(4, 1).second == doctest::Approx(4));
  CHECK_THROWS(sobinf_bounds(3, 1));
}

TEST_CASE("table data file") {
  const auto rows = load_table1();
  CHECK(rows.size() == 22);
  for (std::size_t i = 0; i < rows.size(); ++i) CHECK(rows[i].row == static_cast<int>(i + 1));
  CHECK_THROWS_AS(load_table1("/nonexistent/table.json"), std::runtime_error);
}

}  // TEST_SUITE
