#include "crg/rhop/qp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "crg/geometry/lp.hpp"

namespace crg::rhop {

namespace {

// Working-set bookkeeping around the cached Hessian factor.  For the
// equality-constrained subproblem  min ½xᵀHx + qᵀx  s.t.  A_W x = b_W  the
// solution is
//
//   μ = −S⁻¹ (b_W + A_W H⁻¹ q),   x = −H⁻¹ (q + A_Wᵀ μ),
//
// with S = A_W H⁻¹ A_Wᵀ.  Y = H⁻¹ A_Wᵀ and S grow and shrink with the
// working set; S is refactored from the maintained blocks (sizes here are a
// handful of rows, the cached H factor does the heavy lifting).
struct WorkingSet {
  const Eigen::LLT<Eigen::MatrixXd>& hess_llt;
  std::vector<int> rows;
  Eigen::MatrixXd Y;  // n × m
  Eigen::MatrixXd S;  // m × m

  explicit WorkingSet(const Eigen::LLT<Eigen::MatrixXd>& llt, Eigen::Index n)
      : hess_llt(llt), Y(n, 0), S(0, 0) {}

  int size() const { return static_cast<int>(rows.size()); }

  void add(int row, const Eigen::VectorXd& a) {
    const Eigen::VectorXd y = hess_llt.solve(a);
    const int m = size();
    Y.conservativeResize(Eigen::NoChange, m + 1);
    Y.col(m) = y;
    Eigen::MatrixXd S_next(m + 1, m + 1);
    S_next.topLeftCorner(m, m) = S;
    for (int r = 0; r < m; ++r) {
      const double v = Y.col(r).dot(a);
      S_next(r, m) = v;
      S_next(m, r) = v;
    }
    S_next(m, m) = y.dot(a);
    S = std::move(S_next);
    rows.push_back(row);
  }

  void remove(int position) {
    const int m = size();
    for (int r = position; r + 1 < m; ++r) {
      Y.col(r) = Y.col(r + 1);
      rows[static_cast<std::size_t>(r)] = rows[static_cast<std::size_t>(r + 1)];
    }
    Y.conservativeResize(Eigen::NoChange, m - 1);
    rows.pop_back();
    Eigen::MatrixXd S_next(m - 1, m - 1);
    for (int r = 0, rr = 0; r < m; ++r) {
      if (r == position) continue;
      for (int c = 0, cc = 0; c < m; ++c) {
        if (c == position) continue;
        S_next(rr, cc) = S(r, c);
        ++cc;
      }
      ++rr;
    }
    S = std::move(S_next);
  }
};

}  // namespace

QpResult solve_qp(const QpProblem& qp, const QpOptions& options,
                  const Eigen::VectorXd* start) {
  const Eigen::Index n = qp.Hess.rows();
  if (qp.Hess.cols() != n || qp.grad.size() != n)
    throw std::runtime_error("solve_qp(): Hessian/gradient dimensions disagree");
  if ((qp.Hess - qp.Hess.transpose()).cwiseAbs().maxCoeff() >
      1e-10 * (1.0 + qp.Hess.cwiseAbs().maxCoeff()))
    throw std::runtime_error("solve_qp(): Hessian is not symmetric");
  const Eigen::Index m_rows = qp.A.rows();
  if (m_rows > 0 && qp.A.cols() != n)
    throw std::runtime_error("solve_qp(): constraint matrix has wrong width");
  if (qp.b.size() != m_rows)
    throw std::runtime_error("solve_qp(): constraint offsets have wrong length");

  Eigen::LLT<Eigen::MatrixXd> hess_llt(qp.Hess);
  if (hess_llt.info() != Eigen::Success)
    throw std::runtime_error("solve_qp(): Hessian is not positive definite");

  // Unit-normalize the rows so every tolerance below is scale-free.
  Eigen::MatrixXd A(m_rows, n);
  Eigen::VectorXd b(m_rows);
  for (Eigen::Index r = 0; r < m_rows; ++r) {
    const double norm = qp.A.row(r).norm();
    if (norm <= 1e-14)
      throw std::runtime_error("solve_qp(): zero constraint row");
    A.row(r) = qp.A.row(r) / norm;
    b(r) = qp.b(r) / norm;
  }

  QpResult result;
  result.lambda = Eigen::VectorXd::Zero(m_rows);

  // Feasible start: the caller's point when it satisfies every row, else a
  // uniform-relaxation LP  max −s  s.t.  A x − s·1 ≤ b.  A positive optimal
  // s is the infeasibility certificate.
  Eigen::VectorXd x;
  bool have_start = false;
  if (start != nullptr) {
    if (start->size() != n)
      throw std::runtime_error("solve_qp(): warm start has wrong dimension");
    if (m_rows == 0 || (A * *start - b).maxCoeff() <= options.feas_tol) {
      x = *start;
      have_start = true;
    }
  }
  if (!have_start) {
    if (m_rows == 0) {
      x = Eigen::VectorXd::Zero(n);
    } else {
      // Relaxation LP: minimize the uniform slack s with s >= 0 (the floor
      // keeps the LP bounded when the rows leave open directions).
      Eigen::MatrixXd F(m_rows + 1, n + 1);
      F.setZero();
      F.topLeftCorner(m_rows, n) = A;
      F.col(n).head(m_rows).setConstant(-1.0);
      F(m_rows, n) = -1.0;
      Eigen::VectorXd rhs(m_rows + 1);
      rhs.head(m_rows) = b;
      rhs(m_rows) = 0.0;
      Eigen::VectorXd c = Eigen::VectorXd::Zero(n + 1);
      c(n) = -1.0;
      const geometry::LpSolution lp = geometry::solve_lp_raw(c, F, rhs);
      if (lp.status != geometry::LpStatus::kOptimal)
        throw std::runtime_error("solve_qp(): phase-1 relaxation LP failed");
      const double gap = lp.x(n);
      if (gap > options.feas_tol) {
        result.status = QpStatus::kInfeasible;
        result.infeasibility_gap = gap;
        return result;
      }
      x = lp.x.head(n);
    }
  }

  WorkingSet ws(hess_llt, n);
  const int iter_cap = options.max_iterations > 0
                           ? options.max_iterations
                           : 50 * static_cast<int>(m_rows + 1);
  const Eigen::VectorXd h_inv_q = hess_llt.solve(qp.grad);

  for (int iter = 0;; ++iter) {
    if (iter >= iter_cap)
      throw std::runtime_error("solve_qp(): active-set iteration cap exhausted");
    result.iterations = iter + 1;

    // Equality-constrained minimizer over the current working set.
    Eigen::VectorXd mu(ws.size());
    Eigen::VectorXd x_eq;
    if (ws.size() == 0) {
      x_eq = -h_inv_q;
    } else {
      Eigen::VectorXd rhs(ws.size());
      for (int r = 0; r < ws.size(); ++r)
        rhs(r) = b(ws.rows[static_cast<std::size_t>(r)]) + A.row(ws.rows[static_cast<std::size_t>(r)]).dot(h_inv_q);
      Eigen::LLT<Eigen::MatrixXd> s_llt(ws.S);
      if (s_llt.info() != Eigen::Success)
        throw std::runtime_error("solve_qp(): dependent rows in the working set");
      mu = -s_llt.solve(rhs);
      x_eq = -h_inv_q - ws.Y * mu;
    }

    // Step toward the subproblem minimizer, stopping at the first blocking
    // row (lowest index on ties within a relative sliver).
    const Eigen::VectorXd step = x_eq - x;
    if (step.norm() > 1e-13 * (1.0 + x.norm())) {
      double alpha = 1.0;
      int blocking = -1;
      for (Eigen::Index r = 0; r < m_rows; ++r) {
        if (std::find(ws.rows.begin(), ws.rows.end(), static_cast<int>(r)) != ws.rows.end())
          continue;
        const double along = A.row(r).dot(step);
        if (along <= options.feas_tol) continue;  // moving away or parallel
        const double room = b(r) - A.row(r).dot(x);
        const double ratio = std::max(0.0, room) / along;
        if (ratio < alpha - 1e-14) {
          alpha = ratio;
          blocking = static_cast<int>(r);
        }
      }
      x += alpha * step;
      if (blocking >= 0) {
        ws.add(blocking, A.row(blocking).transpose());
        continue;
      }
    }

    // Full step taken: check multipliers, drop the most negative one.
    int leave = -1;
    double most_negative = -options.multiplier_tol;
    for (int r = 0; r < ws.size(); ++r) {
      if (mu(r) < most_negative) {
        most_negative = mu(r);
        leave = r;
      }
    }
    if (leave < 0) {
      x = x_eq;
      for (int r = 0; r < ws.size(); ++r)
        result.lambda(ws.rows[static_cast<std::size_t>(r)]) = std::max(0.0, mu(r));
      result.active_set = ws.rows;
      std::sort(result.active_set.begin(), result.active_set.end());
      break;
    }
    x = x_eq;
    ws.remove(leave);
  }

  result.status = QpStatus::kOptimal;
  result.x = x;
  const Eigen::VectorXd stat = qp.Hess * x + qp.grad + A.transpose() * result.lambda;
  result.stationarity = stat.size() ? stat.cwiseAbs().maxCoeff() : 0.0;
  if (m_rows > 0) {
    const Eigen::VectorXd slack = A * x - b;
    result.primal_feasibility = std::max(0.0, slack.maxCoeff());
    result.complementarity =
        (result.lambda.array() * slack.array()).abs().maxCoeff();
  }
  return result;
}

}  // namespace crg::rhop
