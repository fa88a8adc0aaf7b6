#pragma once

#include <Eigen/Dense>

namespace crg::numerics {

// Cost weights for one subsystem's reference-correction optimization.
//
//   Q        — stage weight on the tracking error state,
//   R_alpha  — stage weight on the correction increment,
//   P        — terminal weight, solution of Φᵀ P Φ − P = −Q,
//   P_alpha  — terminal weight on the accumulated correction, required to
//              dominate Γᵀ P Γ + R_alpha strictly.
//
// strictness_margin records λ_min(P_alpha − Γᵀ P Γ − R_alpha); it is positive
// for every valid weighting and is re-verified at construction rather than
// trusted from the default P_alpha = 2(Γᵀ P Γ + R_alpha).
struct Weighting {
  Eigen::MatrixXd Q;
  Eigen::MatrixXd R_alpha;
  Eigen::MatrixXd P;
  Eigen::MatrixXd P_alpha;
  double strictness_margin = 0.0;
};

// Builds a Weighting for the closed-loop pair (Φ, Γ): solves the Lyapunov
// equation for P and takes P_alpha = 2(Γᵀ P Γ + R_alpha) unless an override
// is supplied.  Validates symmetry of all four matrices to 1e-10 and strict
// positive definiteness of P_alpha − (Γᵀ P Γ + R_alpha); throws
// std::runtime_error otherwise.
Weighting make_weighting(const Eigen::MatrixXd& Phi, const Eigen::MatrixXd& Gamma,
                         const Eigen::MatrixXd& Q, const Eigen::MatrixXd& R_alpha);
Weighting make_weighting(const Eigen::MatrixXd& Phi, const Eigen::MatrixXd& Gamma,
                         const Eigen::MatrixXd& Q, const Eigen::MatrixXd& R_alpha,
                         const Eigen::MatrixXd& P_alpha_override);

}  // namespace crg::numerics
