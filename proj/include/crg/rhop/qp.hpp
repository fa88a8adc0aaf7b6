#pragma once

#include <vector>

#include <Eigen/Dense>

namespace crg::rhop {

// Strictly convex inequality-constrained quadratic program
//
//   min ½ xᵀ Hess x + gradᵀ x   subject to   A x ≤ b.
//
// Hess must be symmetric positive definite; A may be empty.
struct QpProblem {
  Eigen::MatrixXd Hess;
  Eigen::VectorXd grad;
  Eigen::MatrixXd A;
  Eigen::VectorXd b;
};

enum class QpStatus { kOptimal, kInfeasible };

struct QpResult {
  QpStatus status = QpStatus::kInfeasible;
  Eigen::VectorXd x;
  // Lagrange multipliers per constraint row (zero off the active set),
  // reported for the problem with unit-normalized rows.
  Eigen::VectorXd lambda;
  std::vector<int> active_set;   // row indices active at the solution
  int iterations = 0;
  // Worst-case KKT residuals at the returned point: stationarity
  // ‖Hess x + grad + Aᵀλ‖_inf, primal feasibility max(A x − b), and
  // complementary slackness max |λ_r (A x − b)_r|.
  double stationarity = 0.0;
  double primal_feasibility = 0.0;
  double complementarity = 0.0;
  // Infeasibility certificate: the smallest uniform relaxation s such that
  // A x ≤ b + s·1 admits a solution (positive iff infeasible).
  double infeasibility_gap = 0.0;
};

struct QpOptions {
  double feas_tol = 1e-9;        // row satisfaction threshold (unit-norm rows)
  double multiplier_tol = 1e-10; // negativity threshold for leaving rows
  int max_iterations = 0;        // 0: 50·(rows+1) default
};

// Primal active-set method.  The Hessian is factored once (Cholesky) and
// reused for every equality-constrained subproblem; the working-set system
// is maintained incrementally as rows enter and leave.  Blocking rows are
// chosen by the ratio test with lowest-index tie-breaking and leaving rows
// by the most negative multiplier (lowest index on ties), so runs are
// deterministic.  A feasible start is found by a uniform-relaxation LP when
// `start` is absent or infeasible; if even the LP needs a positive
// relaxation the problem is reported infeasible with that gap as the
// certificate.
//
// Throws std::runtime_error on malformed input, a non-positive-definite
// Hessian, degenerate dependent active sets, or iteration-cap exhaustion.
QpResult solve_qp(const QpProblem& qp, const QpOptions& options = {},
                  const Eigen::VectorXd* start = nullptr);

}  // namespace crg::rhop
