#pragma once

#include <Eigen/Dense>

#include "crg/geometry/polytope.hpp"
#include "crg/geometry/set_expr.hpp"
#include "crg/sets/segment_sum.hpp"

namespace crg::sets {

struct MrpiOptions {
  double eps_rpi = 1e-2;       // relative outer-approximation slack
  int s_max = 200;             // cap on the contraction horizon search
  int input_cap = 40;          // segment budget for the disturbance set
  int sketch_cap = 8;          // segment budget for half-space template directions
  int sweep_cap = 2000;        // offset fixed-point sweeps for the half-space form
  double flat_inflation = 5e-4;  // relative inflation for rank-deficient input
};

// Outer approximation of the minimal robust positively invariant set of
//   e⁺ = Phi e + w,   w ∈ W,
// returned in two forms with different jobs.
//
// The segment form F is the geometric-series construction: find the
// smallest horizon s with Phi^s W ⊆ alpha W for alpha ≤ eps_rpi/(1+eps_rpi)
// and take (1-alpha)⁻¹ ⊕_{j<s} Phi^j W.  It contains the true minimal
// invariant set, is within a (1+eps_rpi) scaling of it, is invariant by
// construction, and stays cheap to evaluate through support functions, so
// every downstream quantity (tightened offsets, upstream chaining) is
// computed from it.
//
// The half-space form F_hrep is a deliberately small invariant polytope
// containing F: an exact facet description of F would need one facet per
// generator pair and is useless to store or test against.  Instead a fixed
// template of directions (real-Schur frame, coordinate axes, and the facet
// normals of a coarse segment sketch of F) starts at the exact supports of
// F and the offsets are lifted monotonically by
//
//   g(d) ← max(g(d), h(Phi P, d) + h(W, d))
//
// until the map is at a fixed point, which is precisely per-facet
// invariance of P.  A disturbance box fixed point in the Schur frame bounds
// the lifted offsets whenever |T| (elementwise) is itself Schur, so the
// sweep terminates; the invariance certificate
//   h(Phi F_hrep ⊕ W, f) ≤ offset(f)  on every facet f
// and containment of the segment form are both verified before returning.
// For scalar and diagonal dynamics the template is exact and F_hrep
// coincides with F.
struct MrpiResult {
  SegmentSum F;                // sharp segment form, drives downstream algebra
  geometry::Polytope F_hrep;   // small invariant half-space outer bound of F
  int s = 0;                   // contraction horizon used
  double alpha = 0.0;          // contraction factor achieved
  int sweeps = 0;              // offset sweeps spent on the half-space form
};

// Core routine on the segment representation (exact for box-generated
// disturbance sets).  Throws if Phi is not Schur, if the origin is not in
// the interior of W (after flat-direction inflation), if no contraction
// horizon up to s_max achieves the required alpha, or if the half-space
// offsets fail to reach a fixed point within the sweep cap.
MrpiResult mrpi_outer_segments(const Eigen::MatrixXd& Phi, const SegmentSum& W,
                               const MrpiOptions& options = {});

// Public entry point on a lazy set expression.  The expression is replaced
// by its interval hull first (exact for axis-aligned boxes, outer
// otherwise), so the (1+eps_rpi) sharpness statement applies to that hull.
geometry::Polytope mrpi_outer(const Eigen::MatrixXd& Phi, const geometry::SetExpr& W,
                              double eps_rpi);

}  // namespace crg::sets
