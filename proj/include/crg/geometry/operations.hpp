#pragma once

#include <Eigen/Dense>
#include <vector>

#include "crg/geometry/polytope.hpp"
#include "crg/geometry/set_expr.hpp"

namespace crg::geometry {

// All extreme points of a bounded polytope, ambient dimension ≤ 4.
//
// Returns the attached cache when present.  Otherwise prunes the H-rep to
// its irredundant rows and enumerates n-row active sets: each well-posed
// subsystem solve that lands inside the polytope (slack kDedupTol) is a
// vertex candidate; candidates are deduplicated and returned in canonical
// order.  Throws std::runtime_error when the set is empty or unbounded, or
// when the dimension cap is exceeded.
std::vector<Eigen::VectorXd> vertices(const Polytope& P);

// H-rep of the Minkowski sum P ⊕ Q (both bounded, dimension ≤ 4): vertex
// enumeration of both operands, pairwise sums, convex hull.
Polytope minkowski_sum(const Polytope& P, const Polytope& Q);

// H-rep of {M x : x ∈ P} (bounded P, image dimension ≤ 4): mapped vertices
// plus hull.  Rank-deficient M produces the paired-inequality flat encoding.
Polytope affine_image(const Eigen::MatrixXd& M, const Polytope& P);

// Pontryagin difference P ⊖ S = {x : x + s ∈ P ∀ s ∈ S}: every row offset is
// reduced by the support of S in the row direction.  The result may be empty
// (checked by the caller via is_empty when it matters).
Polytope pontryagin_diff(const Polytope& P, const SetExpr& S);

}  // namespace crg::geometry
