#pragma once

#include <Eigen/Dense>

namespace crg::numerics {

struct DareResult {
  Eigen::MatrixXd P;  // stabilizing solution of the Riccati equation
  Eigen::MatrixXd K;  // state-feedback gain, u = −K x stabilizes A − B K
  int iterations = 0;
};

// Solves the discrete algebraic Riccati equation
//   P = Q + Aᵀ P A − Aᵀ P B (R + Bᵀ P B)⁻¹ Bᵀ P A
// by fixed-point iteration from P₀ = Q, stopping when the relative change
// drops below 1e-12 (cap 10,000 iterations).  Returns P together with the
// LQR gain K = (R + Bᵀ P B)⁻¹ Bᵀ P A.
//
// Throws std::runtime_error on non-convergence, on malformed inputs, or when
// the derived gain fails to make A − B K Schur (non-stabilizable pair).
DareResult solve_dare(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                      const Eigen::MatrixXd& Q, const Eigen::MatrixXd& R);

}  // namespace crg::numerics
