#pragma once

#include <map>
#include <vector>

#include "crg/geometry/polytope.hpp"
#include "crg/geometry/set_expr.hpp"
#include "crg/model/controller.hpp"

namespace crg::sets {

struct MoasOptions {
  double eps = 1e-3;         // steady-state constraint shrink, in constraint units
  int k_cap = 500;           // finite-determination cap
  double offset_tol = 1e-9;  // tightening-sequence convergence threshold
};

// Output admissible set for the frozen-reference evolution of one closed
// loop.  The combined state (z, r) follows
//
//   [z; r]⁺ = [Phi Gamma; 0 I] [z; r] + [I; 0] w_z,    c = [H 0] [z; r],
//
// with w_z ∈ W_z.  The returned set collects the constraints
//
//   [H 0] A^k (z, r) ∈ XU(k)   for k = 0, 1, ...
//   H (I - Phi)⁻¹ Gamma r ∈ XU_eps
//
// where XU(0) = xu_inf, XU(k+1) = XU(k) ⊖ H Phi^k W_z absorbs the
// accumulated disturbance, and XU_eps shrinks the converged tight set by
// eps in every unit facet direction so the limit point is strictly
// admissible.  Accumulation stops once a full step adds only redundant
// rows and the tightening offsets have converged; membership then
// guarantees constraint satisfaction and invariance for all later times
// under any admissible disturbance sequence.
struct MoasResult {
  geometry::Polytope O_eps;   // rows over (z, r)
  geometry::Polytope XU_eps;
  int iterations = 0;         // steps expanded before termination
  bool tightening_converged = false;
};

// Throws if (A, C) fails the observability rank test, if the tightened
// sequence empties out or fails to converge within the cap, if finite
// determination is not reached within the cap, or if the admissible set is
// empty — in the last case the message points at the disturbance bound,
// which can only shrink if the sets it is built from are enlarged upstream.
MoasResult moas(const model::ClosedLoopSubsystem& cl, const geometry::Polytope& xu_inf,
                const geometry::SetExpr& w_z, const MoasOptions& options = {});

// Per-subsystem products of the decentralized chain computation: the local
// admissible set O_eps, its state-block projection O_z = [I 0] O_eps, the
// interlacing bound W_z = ⊕_j Phi_ij O_z^j driving the next stages, and
// the shrunk steady set XU_eps.
struct MoasSuite {
  geometry::Polytope O_eps;
  geometry::Polytope O_z;
  geometry::Polytope W_z;
  geometry::Polytope XU_eps;
  int iterations = 0;
};

// Chain driver in cascade order: the head subsystem takes W_z = {0}; each
// later stage assembles W_z from the projections of its upstream stages,
// then computes its own admissible set against xu_inf[i].  An empty
// admissible set aborts with the stage index and the upstream-enlargement
// remedy spelled out.
//
// w_z_margin optionally enlarges selected stages' interlacing bounds:
// stage i uses W_z^i = (⊕_j Phi_ij O_z^j) ⊕ w_z_margin[i].  The true
// interlacing still lies inside the enlarged bound, so invariance and
// recursive feasibility are untouched; the cost is a smaller admissible
// set at stage i — which is exactly the remedy when the literal bound
// leaves a downstream stage with nothing, because a smaller O_z^i shrinks
// the bound every later stage must absorb.  The margin is never applied
// implicitly: the default empty map reproduces the literal chain and its
// failure diagnostic.
std::vector<MoasSuite> moas_decentralized(const model::ClosedLoopCascade& chain,
                                          const std::vector<geometry::Polytope>& xu_inf,
                                          const MoasOptions& options = {},
                                          const std::map<int, geometry::Polytope>& w_z_margin = {});

}  // namespace crg::sets
