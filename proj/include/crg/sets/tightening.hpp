#pragma once

#include <vector>

#include "crg/geometry/polytope.hpp"
#include "crg/geometry/set_expr.hpp"
#include "crg/model/controller.hpp"
#include "crg/sets/segment_sum.hpp"

namespace crg::sets {

// Everything the transient/steady tightening pipeline produces for one
// subsystem: the interlacing disturbance expression W_e, the tightened
// constraint sequence XU(0..k_max), the invariant error bound F_inf (as a
// compact invariant half-space set for storage and membership tests, and in
// sharp segment form for support arithmetic and chain certificates), and
// the steady-state tightened constraint set XU_inf (computed from the
// segment form).
struct TighteningSchedule {
  geometry::SetExpr w_e;
  std::vector<geometry::Polytope> xu;
  geometry::Polytope f_inf;
  SegmentSum f_inf_segments;
  geometry::Polytope xu_inf;
};

// Interlacing disturbance expressions, one per subsystem in chain order:
//
//   W_e^i = ⊕_{j upstream} Phi_ij W_e^j  ⊕  Omega_ii W^i
//
// resolved bottom-up (a subsystem with no inlets gets Omega_ii W^i alone).
// The recursion has no time dependence, so the expression is constant over
// the schedule index; at(i, k) returns the same set for every k.
struct WeSchedule {
  std::vector<geometry::SetExpr> per_subsystem;
  int k_max = 0;

  const geometry::SetExpr& at(int i, int k) const;
};
WeSchedule we_schedule(const model::ClosedLoopCascade& chain, int k_max);

// Transient tightened constraint sequence for one closed loop:
//
//   XU(0) = X × U,     XU(k+1) = XU(k) ⊖ H Phi^k W_e,
//
// returned as k_max+1 polytopes sharing one row matrix with monotonically
// nonincreasing offsets (so nesting holds by construction).  Throws with
// the offending index if any XU(k) becomes empty — the constraints are too
// tight for the disturbance level.
std::vector<geometry::Polytope> transient_tightened(const model::ClosedLoopSubsystem& cl,
                                                    const geometry::SetExpr& w_e, int k_max);

// Steady-state tightened constraint set XU_inf = (X × U) ⊖ H F_inf.
// Throws a diagnostic if the result is empty.
geometry::Polytope steady_tightened(const model::ClosedLoopSubsystem& cl,
                                    const geometry::Polytope& f_inf);

// Same, with the invariant bound in segment form: each offset drops by the
// segment support in the mapped row direction, which is exact and cheap no
// matter how many segments the bound carries.
geometry::Polytope steady_tightened(const model::ClosedLoopSubsystem& cl,
                                    const SegmentSum& f_inf);

}  // namespace crg::sets
