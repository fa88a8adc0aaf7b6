#pragma once

#include <Eigen/Dense>
#include <map>
#include <vector>

#include "crg/geometry/polytope.hpp"
#include "crg/model/augment.hpp"
#include "crg/model/cascade.hpp"

namespace crg::model {

// One subsystem under its stabilizing integral-action state feedback
// u = -K z.  The evolution driven by a reference r on the integrator rows is
//
//   z⁺ = Phi z + Σ_j Phi_in[j] x^j + Gamma r + Omega w,
//
// with Phi = Phi_bar - Gamma_bar K Schur and Gamma = [0; I] injecting r into
// the integrator channels (x_a⁺ = x_a + r - y).  This realization makes the
// steady-state gains exact: Upsilon (I - Phi)⁻¹ Gamma = I and
// Upsilon (I - Phi)⁻¹ Phi_in[j] = 0, because the output block-row of
// (I - Phi) v = Gamma r reads C v_x = r directly.
//
// H maps the augmented state to the constrained variables [x; u] = H z with
// u = -K z, so H = [I 0; -K] and feasibility of z against XU = X × U is the
// original state/input constraint.
struct ClosedLoopSubsystem {
  Eigen::MatrixXd Phi;
  Eigen::MatrixXd Gamma;
  Eigen::MatrixXd Upsilon;
  Eigen::MatrixXd Omega;
  Eigen::MatrixXd H;
  Eigen::MatrixXd K;
  std::map<int, Eigen::MatrixXd> Phi_in;
  geometry::Polytope XU;
  int n_x = 0;
  int n_y = 0;
  int n_u = 0;

  int n_z() const { return n_x + n_y; }
};

// LQR gain K for the augmented pair (Phi_bar, Gamma) with stage weights
// Q_lqr (on z) and R_lqr (on u), solved through the discrete-time algebraic
// Riccati equation.  Throws if the pair is not stabilizable with these
// weights (the Riccati iteration fails or the closed loop is not Schur).
Eigen::MatrixXd synthesize_controller(const AugmentedSubsystem& aug,
                                      const Eigen::MatrixXd& Q_lqr,
                                      const Eigen::MatrixXd& R_lqr);

// Assembles the closed loop for a given gain: Phi = Phi_bar - Gamma K,
// reference channel [0; I], H = [I 0; -K], couplings and disturbance map
// carried over, and XU = X × U attached.
ClosedLoopSubsystem close_loop(const AugmentedSubsystem& aug,
                               const Eigen::MatrixXd& K,
                               const geometry::Polytope& X,
                               const geometry::Polytope& U);

// Whole-cascade synthesis product: the validated open-loop model, its
// integrator augmentations, and the closed loops, index-aligned.
struct ClosedLoopCascade {
  CascadeModel model;
  std::vector<AugmentedSubsystem> augmented;
  std::vector<ClosedLoopSubsystem> loops;

  int count() const { return static_cast<int>(loops.size()); }
};

// Runs augment → synthesize → close for every subsystem with per-subsystem
// LQR weights (Q_lqr[i] on z^i, R_lqr[i] on u^i).  Validates the topology
// first and throws on any violation.
ClosedLoopCascade synthesize_cascade(const CascadeModel& model,
                                     const std::vector<Eigen::MatrixXd>& Q_lqr,
                                     const std::vector<Eigen::MatrixXd>& R_lqr);

// Identity-weight convenience overload: Q_lqr = I on each augmented state,
// R_lqr = I on each input.
ClosedLoopCascade synthesize_cascade(const CascadeModel& model);

}  // namespace crg::model
