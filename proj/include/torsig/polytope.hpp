#pragma once

// Exact rational H-polytopes of small dimension: vertex enumeration and
// volume by recursive fan triangulation.

#include "torsig/scalar.hpp"

#include <vector>

namespace torsig {

struct RingSpec;

/// normal · x <= offset
struct HalfSpace {
  RatVec normal;
  Rational offset;
};

/// Vertices of {x : all constraints hold}, deduplicated and sorted
/// lexicographically. Brute force over d-subsets of the constraints.
std::vector<RatVec> enumerate_vertices(const std::vector<HalfSpace>& constraints,
                                       Eigen::Index dim);

/// Dimension of the affine hull; -1 for the empty set.
Eigen::Index affine_dimension(const std::vector<RatVec>& points);

bool is_bounded(const std::vector<HalfSpace>& constraints, Eigen::Index dim);

/// Exact Euclidean volume of a bounded full-dimensional polytope.
/// Throws std::logic_error if the constraints do not bound the region.
Rational polytope_volume(const std::vector<HalfSpace>& constraints, Eigen::Index dim);

/// {u : 0 <= facet_i(u) <= 1 for all i}
std::vector<HalfSpace> unit_facet_polytope(const RingSpec& spec);

bool lex_less(const RatVec& a, const RatVec& b);

}  // namespace torsig
