#pragma once

#include <Eigen/Dense>
#include <vector>

#include "crg/geometry/polytope.hpp"

namespace crg::geometry {

// Extreme points of conv(points): every input point outside the hull of the
// remaining ones, decided by a separating-hyperplane LP.  Deduplicates at
// kDedupTol and returns the survivors in canonical (lexicographic) order.
std::vector<Eigen::VectorXd> extreme_points(const std::vector<Eigen::VectorXd>& points);

// Minimal H-rep of conv(points) for ambient dimension ≤ 4.
//
// Full-dimensional clouds: facet candidates are enumerated over d-subsets of
// the extreme points (hyperplane through the subset, accepted when every
// point lies on one side), deduplicated, and emitted in canonical row order
// with the extreme points attached as the vertex cache.  Lower-dimensional
// clouds are detected by affine-rank analysis and handled recursively in
// local coordinates of the affine hull; the lift adds paired inequalities
// ±uᵀx ≤ uᵀc ± kFlatTol for every direction u normal to the affine hull.
//
// Throws std::runtime_error on empty input or ambient dimension > 4.
Polytope hull_hrep(const std::vector<Eigen::VectorXd>& points);

}  // namespace crg::geometry
