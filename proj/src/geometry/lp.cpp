#include "crg/geometry/lp.hpp"

#include <limits>
#include <stdexcept>
#include <vector>

#include "crg/geometry/tolerances.hpp"

namespace crg::geometry {
namespace {

constexpr int kPivotCap = 50000;
constexpr double kPivotTol = 1e-11;

}  // namespace

LpSolution solve_lp_raw(const Eigen::VectorXd& c, const Eigen::MatrixXd& F,
                        const Eigen::VectorXd& g) {
  const Eigen::Index n = c.size();
  const Eigen::Index m = F.rows();
  if (n == 0 || F.cols() != n || g.size() != m) {
    throw std::runtime_error("solve_lp_raw(): dimension mismatch");
  }

  // Working system: normalized problem rows followed by 2n artificial box
  // rows ±x_i ≤ kBigBox.  Zero rows are resolved immediately (vacuous or
  // plainly infeasible) and excluded from pivoting.
  const Eigen::Index total = m + 2 * n;
  Eigen::MatrixXd A(total, n);
  Eigen::VectorXd b(total);
  std::vector<bool> skip(static_cast<size_t>(total), false);
  for (Eigen::Index i = 0; i < m; ++i) {
    const double norm = F.row(i).norm();
    if (norm < 1e-14) {
      if (g(i) < -kLpFeasTol) {
        return {LpStatus::kInfeasible, 0.0, {}};  // 0ᵀx ≤ negative
      }
      A.row(i).setZero();
      b(i) = 1.0;
      skip[static_cast<size_t>(i)] = true;
      continue;
    }
    A.row(i) = F.row(i) / norm;
    b(i) = g(i) / norm;
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    A.row(m + 2 * i).setZero();
    A(m + 2 * i, i) = 1.0;
    b(m + 2 * i) = kBigBox;
    A.row(m + 2 * i + 1).setZero();
    A(m + 2 * i + 1, i) = -1.0;
    b(m + 2 * i + 1) = kBigBox;
  }

  // Initial dual-feasible basis: for each coordinate pick the box row whose
  // outward normal has positive alignment with c, so c = Σ λ_j a_j, λ ≥ 0.
  std::vector<Eigen::Index> basis(static_cast<size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    basis[static_cast<size_t>(i)] = (c(i) >= 0.0) ? (m + 2 * i) : (m + 2 * i + 1);
  }

  Eigen::MatrixXd Ab(n, n);
  Eigen::VectorXd bb(n);
  Eigen::VectorXd x(n);
  Eigen::VectorXd lambda(n);

  const auto refresh = [&](void) {
    for (Eigen::Index j = 0; j < n; ++j) {
      Ab.row(j) = A.row(basis[static_cast<size_t>(j)]);
      bb(j) = b(basis[static_cast<size_t>(j)]);
    }
    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(Ab);
    x = lu.solve(bb);
    lambda = Ab.transpose().partialPivLu().solve(c);
  };
  refresh();

  for (int pivot = 0; pivot < kPivotCap; ++pivot) {
    // The violation threshold tracks the iterate's magnitude: dot products at
    // the artificial kBigBox corner carry round-off proportional to ‖x‖, and
    // a fixed 1e-9 cutoff there would chase phantom violations.
    const double feas_tol = kLpFeasTol + 1e-14 * x.cwiseAbs().maxCoeff();

    // Bland entering rule: the lowest-index violated row.
    Eigen::Index entering = -1;
    for (Eigen::Index i = 0; i < total; ++i) {
      if (skip[static_cast<size_t>(i)]) continue;
      bool in_basis = false;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (basis[static_cast<size_t>(j)] == i) {
          in_basis = true;
          break;
        }
      }
      if (in_basis) continue;
      if (A.row(i).dot(x) - b(i) > feas_tol) {
        entering = i;
        break;
      }
    }

    if (entering < 0) {
      // Primal and dual feasible: optimal for the boxed problem.  An active
      // artificial row carrying a meaningful multiplier means the original
      // objective is unbounded.
      const double lambda_tol = 1e-9 * (1.0 + c.cwiseAbs().sum());
      for (Eigen::Index j = 0; j < n; ++j) {
        if (basis[static_cast<size_t>(j)] >= m && lambda(j) > lambda_tol) {
          return {LpStatus::kUnbounded, 0.0, {}};
        }
      }
      return {LpStatus::kOptimal, c.dot(x), x};
    }

    // Ratio test in the dual: increasing the entering row's multiplier by t
    // changes basis multipliers by −t·y with y = A_B⁻ᵀ a_entering.
    const Eigen::VectorXd y =
        Ab.transpose().partialPivLu().solve(A.row(entering).transpose());
    double best_ratio = std::numeric_limits<double>::infinity();
    Eigen::Index leaving_pos = -1;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (y(j) > kPivotTol) {
        const double ratio = std::max(lambda(j), 0.0) / y(j);
        // Bland leaving rule: minimum ratio, lowest basis row index on ties.
        if (ratio < best_ratio ||
            (ratio == best_ratio && leaving_pos >= 0 &&
             basis[static_cast<size_t>(j)] < basis[static_cast<size_t>(leaving_pos)])) {
          best_ratio = ratio;
          leaving_pos = j;
        }
      }
    }
    if (leaving_pos < 0) {
      // The violated row's normal lies outside the cone of the basis normals:
      // its multiplier can grow forever, so the dual is unbounded and the
      // primal system has no feasible point.
      return {LpStatus::kInfeasible, 0.0, {}};
    }

    basis[static_cast<size_t>(leaving_pos)] = entering;
    refresh();
  }
  throw std::runtime_error("solve_lp_raw(): pivot cap exhausted");
}

}  // namespace crg::geometry
