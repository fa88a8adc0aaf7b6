#pragma once

#include <Eigen/Dense>

namespace crg::numerics {

// Upper bound on the accepted condition-number estimate for solve_linear.
inline constexpr double kConditionLimit = 1e12;

// Solves the dense square system A x = b by partially pivoted LU factorization
// followed by one step of iterative refinement.
//
// Throws std::runtime_error when A is singular to working precision or when
// the condition-number estimate exceeds kConditionLimit.  On return the
// residual satisfies ‖A x − b‖∞ ≤ 1e-9 · (1 + ‖b‖∞).
Eigen::VectorXd solve_linear(const Eigen::MatrixXd& A, const Eigen::VectorXd& b);

// Multi-right-hand-side variant: solves A X = B column by column with the
// same factorization, refinement, and conditioning checks.
Eigen::MatrixXd solve_linear_multi(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B);

}  // namespace crg::numerics
