#pragma once

#include <Eigen/Dense>

namespace crg::numerics {

// Kronecker product A ⊗ B.
Eigen::MatrixXd kron(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B);

// Solves the discrete Lyapunov (Stein) equation  Φᵀ P Φ − P = −Q  by
// vectorization:  (I − Φᵀ ⊗ Φᵀ) vec(P) = vec(Q)  with a dense linear solve.
// No stability or symmetry checks are performed here; this is the raw
// computational kernel behind solve_dlyap, exposed separately for testing.
Eigen::MatrixXd kron_solve_vectorized(const Eigen::MatrixXd& Phi,
                                      const Eigen::MatrixXd& Q);

// Solves  Φᵀ P Φ − P = −Q  for symmetric positive definite Q and Schur Φ.
//
// Throws std::runtime_error when Φ has spectral radius ≥ 1 (the equation has
// no positive definite solution) or when the inputs are malformed.  The
// result is symmetrized and satisfies the equation with residual ≤ 1e-10 in
// max norm at the problem sizes used here.
Eigen::MatrixXd solve_dlyap(const Eigen::MatrixXd& Phi, const Eigen::MatrixXd& Q);

}  // namespace crg::numerics
