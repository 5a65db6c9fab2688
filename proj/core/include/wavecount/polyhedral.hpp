#pragma once

// Homogeneous polyhedral cones in exact rational arithmetic.
//
// H-representation: {x : a.x <= 0 for every row a}.
// V-representation: cone(rays) + span(lineality).

#include "wavecount/rational.hpp"

#include <cstddef>
#include <vector>

namespace wavecount {

struct ConeGenerators {
  std::size_t dim = 0;
  std::vector<RatVec> rays;       ///< extreme rays, primitive integral
  std::vector<RatVec> lineality;  ///< basis of the lineality space
};

/// Double-description (Motzkin) conversion from inequalities to generators.
ConeGenerators h_to_v(const std::vector<RatVec>& inequalities, std::size_t dim);

/// Facet inequalities of cone(rays) + span(lineality); equalities appear as +/- pairs.
std::vector<RatVec> v_to_h(const ConeGenerators& gens);

bool satisfies(const std::vector<RatVec>& inequalities, const RatVec& x);

/// cone(gens) is contained in {x : ineqs}.
bool generators_inside(const ConeGenerators& gens, const std::vector<RatVec>& inequalities);

/// Sorted, deduplicated copy of primitive rays (for order-independent comparison).
std::vector<RatVec> canonical_rays(std::vector<RatVec> rays);

}  // namespace wavecount
