#pragma once

// Compression cones of real spherical spaces from root data and T-flags, in exact
// rational arithmetic. Vectors live in a = Q^dim_a; roots are covectors paired by dot.

#include "wavecount/polyhedral.hpp"
#include "wavecount/rational.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace wavecount::spherical {

struct RootSystemData {
  std::size_t dim_a = 0;
  std::vector<RatVec> roots;           ///< all of Sigma (both signs)
  std::vector<std::size_t> positive;   ///< indices of Sigma^+
  std::vector<std::size_t> sigma_u;    ///< indices of Sigma_u; empty means all of Sigma^+
  std::vector<RatVec> a_H;             ///< basis of a_H (vectors in a)
  RatMatrix gram;                      ///< inner product on a; empty means the identity

  /// Throws std::invalid_argument when roots are zero or of the wrong length, when the
  /// positive set is not cut out by a generic functional, or when a_H is dependent.
  void validate() const;
  RatMatrix inner_product() const;
  std::vector<RatVec> positive_roots() const;
  std::vector<RatVec> u_roots() const;
  /// Gram-orthogonal complement of a_H, a basis of a_Z.
  std::vector<RatVec> a_Z_basis() const;
};

struct TFlag {
  RatVec alpha;
  std::optional<RatVec> beta;  ///< nullopt stands for beta = 0
};

struct TFlagData {
  std::vector<TFlag> pairs;
  /// Throws std::invalid_argument unless alpha in Sigma_u, beta in {0} or Sigma_u, and
  /// -alpha(Y) = beta(Y) for every Y in a_H.
  void validate(const RootSystemData& roots) const;
};

struct CompressionCone {
  std::size_t dim_a = 0;
  std::vector<RatVec> a_H;
  RatMatrix gram;
  std::vector<RatVec> M;
  std::vector<RatVec> S;
  /// cone_minus = {Y : s(Y) <= 0 for s in S}.
  std::vector<RatVec> inequalities() const { return S; }
  ConeGenerators generators() const;
  /// Number of facets of cone_minus modulo its lineality.
  std::size_t facets() const;
  std::size_t dim_a_Z() const { return dim_a - a_H.size(); }
};

/// The deduplicated set {alpha + beta}, each element checked to vanish on a_H.
std::vector<RatVec> compute_M(const TFlagData& flags, const RootSystemData& roots);

/// Spherical roots of cone(M): one generator per extreme ray, scaled to the largest
/// multiple for which every element of M has nonnegative integer coordinates.
/// Throws std::invalid_argument on empty M and std::domain_error on a non-simplicial cone.
std::vector<RatVec> spherical_roots(const std::vector<RatVec>& M);

/// Coordinates of m in the basis S, or nullopt when m is outside span(S).
std::optional<RatVec> coordinates_in(const std::vector<RatVec>& S, const RatVec& m);

/// True iff every m lies in N_0[S], checked exactly.
bool in_monoid(const std::vector<RatVec>& S, const std::vector<RatVec>& M);

CompressionCone compression_cone(const std::vector<RatVec>& S, std::size_t dim_a,
                                 std::vector<RatVec> a_H = {}, RatMatrix gram = {});

/// compute_M, spherical_roots and compression_cone in sequence; empty flags give S = {}.
CompressionCone compression_cone(const RootSystemData& roots, const TFlagData& flags);

struct WavefrontReport {
  bool wavefront = false;
  bool inclusion = false;   ///< a^- + a_H lies in cone_minus
  bool cone_is_full = false;  ///< cone_minus = a, which the rank-one lemma rules out
};

WavefrontReport wavefront_report(const RootSystemData& roots, const CompressionCone& cone);
bool is_wavefront(const RootSystemData& roots, const CompressionCone& cone);

/// Closed negative Weyl chamber {Y : alpha(Y) <= 0 for alpha in Sigma^+} plus a_H.
ConeGenerators negative_chamber_plus_a_H(const RootSystemData& roots);

// Root systems in simple-root coordinates: a root sum n_i alpha_i is the vector (n_i).

struct RootSystem {
  std::string name;
  RatMatrix cartan;            ///< cartan(j, i) = <alpha_j, alpha_i^vee>
  std::vector<RatVec> roots;   ///< positive roots first, then negatives in the same order
  std::size_t positive_count = 0;
};

/// "A1", "A2", "A3", "B2", "B3", "G2", "A1xA1"; "<X>+<X>" gives the direct sum of two copies.
RootSystem root_system(const std::string& name);

/// Action of the simple reflection s_i on covectors.
RatMatrix simple_reflection(const RootSystem& rs, std::size_t i);

/// Matrix of the swap of the two summands of X+X.
RatMatrix summand_swap(const RootSystem& rs);

struct SymmetricPairInput {
  std::string label;
  RootSystemData roots;
  TFlagData flags;
};

/// Root data and T-flags of a symmetric pair whose involution acts on covectors by sigma.
/// a_H is the fixed space, Sigma^+ comes from a generic Y_Z + eps Y_H, Sigma_u is the set
/// of positive roots not vanishing on a_Z, and T_{alpha,beta} != 0 iff beta = -sigma alpha.
/// Throws std::invalid_argument unless sigma is an involution preserving the roots.
SymmetricPairInput symmetric_pair_input(const RootSystem& rs, const RatMatrix& sigma,
                                        std::string label);

/// A fixed family of symmetric pairs over A1, A2, B2, G2, A3, B3 and A1xA1.
std::vector<SymmetricPairInput> symmetric_pair_family();

// Face decomposition of a_Z^- along the faces a_I = {tau = 0 for tau in I}.

struct FaceRegion {
  std::uint32_t I = 0;        ///< bitmask over S
  Rational eta = 0;           ///< C_I = {y in a_I : sum_{tau not in I} -tau(y) = 1, -tau(y) >= eta}
  std::size_t witnesses = 0;  ///< certificate points that landed in D_I
};

class FaceDecomposition {
 public:
  Rational delta;
  std::vector<FaceRegion> regions;  ///< every proper subset I of S, ordered by decreasing |I|

  std::size_t rank() const { return S_.size(); }
  const std::vector<RatVec>& S() const { return S_; }
  /// H_tau in a_Z with sigma(H_tau) = delta_{sigma,tau}.
  const std::vector<RatVec>& dual_basis() const { return H_; }

  /// The point sum_tau x_tau H_tau.
  RatVec point(const RatVec& x) const;
  /// Coordinates tau(X).
  RatVec coordinates(const RatVec& X) const;
  /// ||X||^2 <= (1 + delta)^2 ||X_I||^2.
  bool in_ball(std::uint32_t I, const RatVec& X) const;
  /// Membership in D_I following the recursion; requires X in a_Z^-.
  bool in_region(std::uint32_t I, const RatVec& X) const;
  /// Bitmasks of every D_I containing X.
  std::vector<std::uint32_t> regions_containing(const RatVec& X) const;
  /// X_I lies in R_{>=0} C_I.
  bool in_compact_cone(std::uint32_t I, const RatVec& X) const;
  bool in_cone(const RatVec& X) const;

 private:
  friend FaceDecomposition face_decomposition(const CompressionCone&, const Rational&);
  std::vector<RatVec> S_;
  std::vector<RatVec> H_;
  RatMatrix gram_;
  Rational norm2(const RatVec& X) const;
  RatVec project(std::uint32_t I, const RatVec& X) const;
  std::vector<bool> memberships(const RatVec& X) const;
};

inline const Rational kDefaultFaceDelta{1, 10};

/// Throws std::domain_error when a_S != {0}, i.e. |S| != dim a_Z.
FaceDecomposition face_decomposition(const CompressionCone& cone,
                                     const Rational& delta = kDefaultFaceDelta);

// Numeric calculators.

double d_formula(unsigned l, double p, unsigned dim_aZ, unsigned dim_g);
double r_pi(unsigned k, double delta, double pi_abs, double C);
/// (C_1 (1+|chi|)^{k/2}, C_2 (1+|chi|)^{k/2}) with C_1 = C_2 = 1.
std::pair<double, double> sobinf_bounds(int k, double chi_abs);

struct TableRow {
  int row = 0;
  std::string g;
  std::string h;
  std::string f;
  std::string condition;
  bool symmetric_overalgebra = false;
  std::string real_rank_one;  ///< "yes", "no" or the condition under which it holds
};

/// Reads the shipped table of non-symmetric wavefront pairs. Throws std::runtime_error
/// when the data file is missing or malformed.
std::vector<TableRow> load_table1(const std::string& path = {});

}  // namespace wavecount::spherical
