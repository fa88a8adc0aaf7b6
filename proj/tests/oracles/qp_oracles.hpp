#pragma once

// Independent reference solvers for small convex QPs, used to cross-check
// the production active-set solver.  Both are deliberately brute-force and
// share no code with the implementation under test.

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

namespace crg_test {

inline double qp_objective(const Eigen::MatrixXd& H, const Eigen::VectorXd& g,
                           const Eigen::VectorXd& x) {
  return 0.5 * x.dot(H * x) + g.dot(x);
}

// Multilevel grid refinement for min ½xᵀHx + gᵀx over the box [lo, hi].
// Each level scans 9 points per axis, then re-centers a window of ±1.5 grid
// spacings (clamped to the box) around the best point.  For a convex
// objective the true minimizer over the box lies within one spacing of the
// best grid point in every coordinate, so the shrinking window never loses
// it; refinement stops once the spacing drops below `tol`.
inline Eigen::VectorXd grid_qp_minimum(const Eigen::MatrixXd& H, const Eigen::VectorXd& g,
                                       Eigen::VectorXd lo, Eigen::VectorXd hi,
                                       double tol = 1e-5) {
  const int n = static_cast<int>(lo.size());
  const int points = 9;
  const Eigen::VectorXd box_lo = lo, box_hi = hi;
  Eigen::VectorXd best = lo;
  for (int level = 0; level < 64; ++level) {
    double spacing = 0.0;
    std::vector<int> idx(static_cast<std::size_t>(n), 0);
    double best_val = std::numeric_limits<double>::infinity();
    Eigen::VectorXd best_here = lo;
    while (true) {
      Eigen::VectorXd x(n);
      for (int d = 0; d < n; ++d) {
        const double step = (hi(d) - lo(d)) / (points - 1);
        x(d) = lo(d) + step * idx[static_cast<std::size_t>(d)];
        spacing = std::max(spacing, step);
      }
      const double val = qp_objective(H, g, x);
      if (val < best_val) {
        best_val = val;
        best_here = x;
      }
      int d = 0;
      for (; d < n; ++d) {
        if (++idx[static_cast<std::size_t>(d)] < points) break;
        idx[static_cast<std::size_t>(d)] = 0;
      }
      if (d == n) break;
    }
    best = best_here;
    if (spacing < tol) break;
    for (int d = 0; d < n; ++d) {
      const double step = (hi(d) - lo(d)) / (points - 1);
      lo(d) = std::max(box_lo(d), best(d) - 1.5 * step);
      hi(d) = std::min(box_hi(d), best(d) + 1.5 * step);
    }
  }
  return best;
}

// Exact reference for min ½xᵀHx + gᵀx s.t. Ax ≤ b by enumerating candidate
// active sets: every subset of at most n rows is solved as an equality
// system, and the best KKT-consistent candidate (primal feasible, multipliers
// nonnegative) wins.  Exponential, so only for small row counts; returns
// nothing when no candidate passes (infeasible or degenerate beyond the
// enumeration's reach).
inline std::optional<Eigen::VectorXd> enumerate_qp_minimum(const Eigen::MatrixXd& H,
                                                           const Eigen::VectorXd& g,
                                                           const Eigen::MatrixXd& A,
                                                           const Eigen::VectorXd& b) {
  const int n = static_cast<int>(H.rows());
  const int m = static_cast<int>(A.rows());
  std::optional<Eigen::VectorXd> best;
  double best_val = std::numeric_limits<double>::infinity();
  for (unsigned mask = 0; mask < (1u << m); ++mask) {
    std::vector<int> rows;
    for (int r = 0; r < m; ++r)
      if (mask & (1u << r)) rows.push_back(r);
    if (static_cast<int>(rows.size()) > n) continue;
    const int k = static_cast<int>(rows.size());
    Eigen::MatrixXd KKT(n + k, n + k);
    KKT.setZero();
    KKT.topLeftCorner(n, n) = H;
    Eigen::VectorXd rhs(n + k);
    rhs.head(n) = -g;
    for (int r = 0; r < k; ++r) {
      KKT.block(n + r, 0, 1, n) = A.row(rows[static_cast<std::size_t>(r)]);
      KKT.block(0, n + r, n, 1) = A.row(rows[static_cast<std::size_t>(r)]).transpose();
      rhs(n + r) = b(rows[static_cast<std::size_t>(r)]);
    }
    const Eigen::FullPivLU<Eigen::MatrixXd> lu(KKT);
    if (!lu.isInvertible()) continue;
    const Eigen::VectorXd sol = lu.solve(rhs);
    const Eigen::VectorXd x = sol.head(n);
    if (((A * x - b).array() > 1e-9).any()) continue;
    if (k > 0 && (sol.tail(k).array() < -1e-9).any()) continue;
    const double val = qp_objective(H, g, x);
    if (val < best_val) {
      best_val = val;
      best = x;
    }
  }
  return best;
}

}  // namespace crg_test
