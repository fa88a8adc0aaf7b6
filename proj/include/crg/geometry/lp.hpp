#pragma once

#include <Eigen/Dense>

namespace crg::geometry {

enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

struct LpSolution {
  LpStatus status = LpStatus::kInfeasible;
  double value = 0.0;    // max cᵀx when optimal
  Eigen::VectorXd x;     // an argmax vertex when optimal
};

// Maximizes cᵀx over {x : F x ≤ g} with a dense simplex method.
//
// The solver works on the vertex form of the inequality system: a basis is a
// set of n active rows, and pivoting follows the dual simplex with Bland's
// rule (lowest violated row enters, lowest-index tie-break on the ratio
// test), which makes every run deterministic and cycle-free.  Artificial
// ±x_i ≤ kBigBox rows supply the initial dual-feasible corner; a positive
// multiplier on one of them at termination flags a genuinely unbounded
// objective direction.
//
// Rows are normalized to unit Euclidean norm internally, so the feasibility
// guarantee on the returned point is ‖row‖-relative: every returned argmax
// satisfies each row to kLpFeasTol after normalization.  Intended for small
// dense instances (n ≤ ~10 variables, up to a few thousand rows).
//
// Throws std::runtime_error only on malformed input or pivot-cap exhaustion;
// infeasible/unbounded outcomes are reported through `status`.
LpSolution solve_lp_raw(const Eigen::VectorXd& c, const Eigen::MatrixXd& F,
                        const Eigen::VectorXd& g);

}  // namespace crg::geometry
