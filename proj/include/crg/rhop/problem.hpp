#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "crg/geometry/polytope.hpp"
#include "crg/model/controller.hpp"
#include "crg/numerics/weighting.hpp"
#include "crg/rhop/qp.hpp"
#include "crg/sets/suite.hpp"

namespace crg::rhop {

// One subsystem's receding-horizon reference-correction problem over the
// correction increments d = (δα(0), …, δα(N−1)).  The cost is
//
//   ‖ε̂(N)‖²_P + ‖α̂(N−1)‖²_{P_α} + Σ_{l<N} ( ‖ε̂(l)‖²_Q + ‖δα(l)‖²_{R_α} )
//
// over the prediction recursions
//
//   α̂(l)   = α̂(l−1) + δα(l),                       α̂(−1) = α(k−1),
//   ε̂(l+1) = Φ ε̂(l) + Γ δα(l),                     ε̂(0)  = ε_d(k),
//   ẑ_u(l+1) = Φ ẑ_u(l) + Σ_j Φ_ij ẑ_c^j(l) + Γ (y_r + α̂(l−1)),
//                                                   ẑ_u(0) = z(k) − ε_d(k),
//   σ̂(l+1) = Φ σ̂(l) + Σ_j Φ_ij σ̂^j(l) + Γ Δα(l),   σ̂(0)  = 0,
//
// where Δα(l) = y_r(k) − y_r(k−1) + δα(l) − δα_prev(l+1) is the change of
// the planned correction at absolute time k+l relative to the previous
// step's plan (the previous plan is zero past its horizon), σ̂ is the
// resulting shift of the own commanded trajectory, and ẑ_c = ẑ_u + ε̂.
//
// Constraints: the own commanded trajectory satisfies the tightened
// schedule at depths 1..N−1; when an outlet stage is attached and previous
// plans exist, the outlet's previously planned trajectory shifted by the
// propagated σ̂ must satisfy its schedule one depth later, and the shifted
// terminal point must stay inside the outlet's interlacing budget W_z; the
// terminal pair (ẑ_c(N), y_r + α̂(N−1)) lies in the admissible set O_eps.

// Per-stage data that does not change between time steps.
struct RhopContext {
  int index = 0;  // stage position, diagnostics only
  int N = 0;      // horizon length, ≥ 1

  numerics::Weighting weights;

  // Own closed loop.
  Eigen::MatrixXd Phi, Gamma, H;
  std::vector<Eigen::MatrixXd> inlet_couplings;  // padded Φ_ij, chain order
  std::vector<int> inlet_indices;                // stage index per coupling
  std::vector<geometry::Polytope> xu;            // tightened schedule, depth 0..N−1
  geometry::Polytope O_eps;

  // Downstream stage whose previous plan this stage must not break.
  struct Outlet {
    int index = 0;
    Eigen::MatrixXd Phi, Gamma, H;
    Eigen::MatrixXd coupling;             // padded Φ_mi from this stage
    std::vector<geometry::Polytope> xu;   // outlet schedule, depth 0..N−1
    geometry::Polytope W_z;               // outlet interlacing budget
  };
  std::optional<Outlet> outlet;

  int n_z() const { return static_cast<int>(Phi.rows()); }
  int n_y() const { return static_cast<int>(Gamma.cols()); }
};

// Everything that changes between time steps.
struct RhopInput {
  Eigen::VectorXd eps_d;       // tracking-error state ε_d(k)
  Eigen::VectorXd z;           // commanded-model state z_c(k) (ẑ_u seed is z − ε_d)
  Eigen::VectorXd alpha_prev;  // accumulated correction α(k−1)
  Eigen::VectorXd y_r, y_r_prev;

  // Inlet stages solved earlier this step: commanded trajectories
  // ẑ_c^j(k+l|k) and plan shifts σ̂^j(k+l|k), l = 0..N−1, chain order.
  std::vector<std::vector<Eigen::VectorXd>> inlet_z_c;
  std::vector<std::vector<Eigen::VectorXd>> inlet_sigma;

  // Own previous plan δα(·|k−1) (length N), empty on the first step.
  std::vector<Eigen::VectorXd> delta_prev;
  // Own previous commanded trajectory value ẑ_c(k+N−1|k−1), used by the
  // outlet interlacing-budget row.
  Eigen::VectorXd own_z_c_prev_terminal;

  // Outlet stage data: its previously planned trajectory ẑ_c^m(k+l|k−1)
  // for l = 0..N−1 and its reference now/previous (the outlet's own
  // replanning is frozen at zero increment while this stage solves).
  std::vector<Eigen::VectorXd> outlet_z_c_prev;
  Eigen::VectorXd outlet_y_r, outlet_y_r_prev;

  bool first_step = false;  // no stored plans: skip the outlet constraints
};

// Predicted trajectories for a given increment sequence, stored with
// storage index t: alpha[t] ↔ α̂(k+t−1|k) for t = 0..N, the others
// value[t] ↔ (k+t|k) for t = 0..N (sigma_outlet only to N−1).
struct RhopTrajectories {
  std::vector<Eigen::VectorXd> alpha;
  std::vector<Eigen::VectorXd> eps;
  std::vector<Eigen::VectorXd> z_u;
  std::vector<Eigen::VectorXd> z_c;
  std::vector<Eigen::VectorXd> sigma;         // own plan shift
  std::vector<Eigen::VectorXd> sigma_outlet;  // propagated to the outlet
};

struct RhopSolution {
  std::vector<Eigen::VectorXd> delta;  // δα(k..k+N−1|k)
  RhopTrajectories traj;
  double cost = 0.0;
  bool fallback = false;  // QP infeasible, shifted previous plan used
  int qp_iterations = 0;
  int active_rows = 0;
  double stationarity = 0.0;
  double primal_feasibility = 0.0;
  double complementarity = 0.0;
};

// One-step left shift of an increment plan with a zero tail — the
// receding-horizon candidate that stays feasible when nothing disturbed
// the prediction.  Size and entry dimensions are preserved.
std::vector<Eigen::VectorXd> shifted_plan(const std::vector<Eigen::VectorXd>& delta_prev);

// Change of the planned correction sequence between consecutive steps:
// result[l] = y_r + delta_now[l] − y_r_prev − delta_prev[l+1], where the
// previous plan beyond its horizon is zero.  delta_now may be shorter than
// N (missing tail treated as zero).
std::vector<Eigen::VectorXd> delta_alpha_shift(
    const std::vector<Eigen::VectorXd>& delta_now,
    const std::vector<Eigen::VectorXd>& delta_prev, const Eigen::VectorXd& y_r,
    const Eigen::VectorXd& y_r_prev, int N);

// Runs the prediction recursions for one increment sequence.  Exact linear
// recursions — these trajectories are the definition the QP is condensed
// against, and the solution's trajectories are re-derived through this
// same routine.
RhopTrajectories predict_trajectories(const RhopContext& ctx, const RhopInput& input,
                                      const std::vector<Eigen::VectorXd>& delta);

// Evaluates the cost at a given increment sequence via its trajectories.
double rhop_cost(const RhopContext& ctx, const RhopTrajectories& traj,
                 const std::vector<Eigen::VectorXd>& delta);

// Condenses cost and constraints onto the stacked increment vector.
// Row order: own schedule rows depth by depth, outlet schedule rows,
// outlet budget rows (offsets relaxed by tol_flat so exact flat membership
// is representable), terminal admissible rows.
QpProblem build_rhop(const RhopContext& ctx, const RhopInput& input);

// Builds the QP, solves it, and expands the solution.  When the QP is
// infeasible and a previous plan exists, the shifted previous plan (tail
// zero) is used instead and the solution is marked as a fallback; without
// a previous plan infeasibility is an error.
RhopSolution solve_rhop(const RhopContext& ctx, const RhopInput& input,
                        const QpOptions& qp_options = {});

// Assembles the per-stage context from the synthesized closed loop and set
// suite: stage matrices and couplings, the tightened schedule truncated to
// the horizon, the admissible set, and the outlet block when a downstream
// stage exists.
RhopContext make_rhop_context(const model::ClosedLoopCascade& chain,
                              const sets::SetSynthesis& synthesis,
                              const numerics::Weighting& weights, int index, int N);

}  // namespace crg::rhop
