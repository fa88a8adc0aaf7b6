#include "crg/geometry/polytope.hpp"

#include <stdexcept>
#include <string>

#include "crg/geometry/lp.hpp"
#include "crg/geometry/tolerances.hpp"

namespace crg::geometry {

Polytope make_polytope(const Eigen::MatrixXd& F, const Eigen::VectorXd& g) {
  if (F.rows() != g.size() || F.cols() == 0 || F.rows() == 0) {
    throw std::runtime_error("make_polytope(): malformed H-rep");
  }
  for (Eigen::Index i = 0; i < F.rows(); ++i) {
    if (F.row(i).norm() < 1e-14) {
      throw std::runtime_error("make_polytope(): all-zero row " + std::to_string(i));
    }
  }
  return Polytope{F, g, nullptr};
}

Polytope make_polytope(const Eigen::MatrixXd& F, const Eigen::VectorXd& g,
                       std::vector<Eigen::VectorXd> vertices) {
  Polytope P = make_polytope(F, g);
  P.vertex_cache =
      std::make_shared<const std::vector<Eigen::VectorXd>>(std::move(vertices));
  return P;
}

Polytope box(const Eigen::VectorXd& lo, const Eigen::VectorXd& hi) {
  const Eigen::Index n = lo.size();
  if (hi.size() != n || ((hi - lo).array() < 0.0).any()) {
    throw std::runtime_error("box(): requires lo ≤ hi componentwise");
  }
  Eigen::MatrixXd F(2 * n, n);
  Eigen::VectorXd g(2 * n);
  F.setZero();
  for (Eigen::Index i = 0; i < n; ++i) {
    F(2 * i, i) = 1.0;
    g(2 * i) = hi(i);
    F(2 * i + 1, i) = -1.0;
    g(2 * i + 1) = -lo(i);
  }
  return Polytope{F, g, nullptr};
}

Polytope symmetric_box(const Eigen::VectorXd& radii) {
  return box(-radii, radii);
}

Polytope singleton(const Eigen::VectorXd& c) {
  const Eigen::Index n = c.size();
  Eigen::MatrixXd F(2 * n, n);
  Eigen::VectorXd g(2 * n);
  F.setZero();
  for (Eigen::Index i = 0; i < n; ++i) {
    F(2 * i, i) = 1.0;
    g(2 * i) = c(i) + kFlatTol;
    F(2 * i + 1, i) = -1.0;
    g(2 * i + 1) = -c(i) + kFlatTol;
  }
  return Polytope{F, g, nullptr};
}

Polytope normalize_rows(const Polytope& P) {
  Eigen::MatrixXd F = P.F;
  Eigen::VectorXd g = P.g;
  for (Eigen::Index i = 0; i < F.rows(); ++i) {
    const double norm = F.row(i).norm();
    if (norm < 1e-14) {
      throw std::runtime_error("normalize_rows(): all-zero row");
    }
    F.row(i) /= norm;
    g(i) /= norm;
  }
  return Polytope{F, g, P.vertex_cache};
}

bool contains(const Polytope& P, const Eigen::VectorXd& x, double tol) {
  if (x.size() != P.F.cols()) {
    throw std::runtime_error("contains(): dimension mismatch");
  }
  return ((P.F * x - P.g).array() <= tol).all();
}

bool is_empty(const Polytope& P) {
  const LpSolution sol =
      solve_lp_raw(Eigen::VectorXd::Zero(P.F.cols()), P.F, P.g);
  return sol.status == LpStatus::kInfeasible;
}

bool is_redundant(const Polytope& P, const Eigen::VectorXd& f, double offset) {
  const LpSolution sol = solve_lp_raw(f, P.F, P.g);
  switch (sol.status) {
    case LpStatus::kInfeasible:
      return true;  // empty set: any constraint is vacuous
    case LpStatus::kUnbounded:
      return false;
    case LpStatus::kOptimal:
      return sol.value <= offset + kRedundancyTol;
  }
  return false;
}

Polytope remove_redundant(const Polytope& P) {
  if (is_empty(P)) {
    throw std::runtime_error("remove_redundant(): set is empty");
  }
  std::vector<Eigen::Index> kept;
  for (Eigen::Index i = 0; i < P.F.rows(); ++i) {
    kept.push_back(i);
  }
  // Test rows first-to-last against all other currently kept rows.
  for (size_t pos = 0; pos < kept.size();) {
    const Eigen::Index row = kept[pos];
    Eigen::MatrixXd Frest(kept.size() - 1, P.F.cols());
    Eigen::VectorXd grest(kept.size() - 1);
    Eigen::Index out = 0;
    for (const Eigen::Index r : kept) {
      if (r == row) continue;
      Frest.row(out) = P.F.row(r);
      grest(out) = P.g(r);
      ++out;
    }
    if (out > 0 && is_redundant(Polytope{Frest, grest, nullptr},
                                P.F.row(row).transpose(), P.g(row))) {
      kept.erase(kept.begin() + static_cast<std::ptrdiff_t>(pos));
    } else {
      ++pos;
    }
  }
  Eigen::MatrixXd F(kept.size(), P.F.cols());
  Eigen::VectorXd g(kept.size());
  for (size_t i = 0; i < kept.size(); ++i) {
    F.row(static_cast<Eigen::Index>(i)) = P.F.row(kept[i]);
    g(static_cast<Eigen::Index>(i)) = P.g(kept[i]);
  }
  return Polytope{F, g, nullptr};
}

Polytope cartesian_product(const Polytope& P, const Polytope& Q) {
  const Eigen::Index np = P.F.cols();
  const Eigen::Index nq = Q.F.cols();
  Eigen::MatrixXd F = Eigen::MatrixXd::Zero(P.F.rows() + Q.F.rows(), np + nq);
  Eigen::VectorXd g(P.g.size() + Q.g.size());
  F.topLeftCorner(P.F.rows(), np) = P.F;
  F.bottomRightCorner(Q.F.rows(), nq) = Q.F;
  g << P.g, Q.g;
  return Polytope{F, g, nullptr};
}

Polytope intersection(const Polytope& P, const Polytope& Q) {
  if (P.F.cols() != Q.F.cols()) {
    throw std::runtime_error("intersection(): dimension mismatch");
  }
  Eigen::MatrixXd F(P.F.rows() + Q.F.rows(), P.F.cols());
  Eigen::VectorXd g(P.g.size() + Q.g.size());
  F << P.F, Q.F;
  g << P.g, Q.g;
  return Polytope{F, g, nullptr};
}

SupportResult solve_lp(const Eigen::VectorXd& c, const Polytope& P) {
  const LpSolution sol = solve_lp_raw(c, P.F, P.g);
  if (sol.status == LpStatus::kInfeasible) {
    throw std::runtime_error("solve_lp(): region is empty");
  }
  if (sol.status == LpStatus::kUnbounded) {
    throw std::runtime_error("solve_lp(): objective direction is unbounded");
  }
  return SupportResult{sol.value, sol.x};
}

}  // namespace crg::geometry
