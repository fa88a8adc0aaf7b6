#include "crg/geometry/operations.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "crg/geometry/hull.hpp"
#include "crg/geometry/lp.hpp"
#include "crg/geometry/tolerances.hpp"

namespace crg::geometry {
namespace {

bool lex_less(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a(i) < b(i)) return true;
    if (a(i) > b(i)) return false;
  }
  return false;
}

}  // namespace

std::vector<Eigen::VectorXd> vertices(const Polytope& P) {
  if (P.vertex_cache) {
    return *P.vertex_cache;
  }
  const Eigen::Index n = P.F.cols();
  if (n > 4) {
    throw std::runtime_error("vertices(): ambient dimension capped at 4");
  }

  // Boundedness probe along every axis; doubles as an emptiness check.
  for (Eigen::Index i = 0; i < n; ++i) {
    for (const double sign : {1.0, -1.0}) {
      Eigen::VectorXd c = Eigen::VectorXd::Zero(n);
      c(i) = sign;
      const LpSolution probe = solve_lp_raw(c, P.F, P.g);
      if (probe.status == LpStatus::kInfeasible) {
        throw std::runtime_error("vertices(): set is empty");
      }
      if (probe.status == LpStatus::kUnbounded) {
        throw std::runtime_error("vertices(): set is unbounded");
      }
    }
  }

  const Polytope M = remove_redundant(normalize_rows(P));
  const Eigen::Index m = M.F.rows();
  std::vector<Eigen::VectorXd> found;

  // Every vertex is the solution of n active irredundant facets.
  std::vector<int> subset(static_cast<size_t>(n));
  const auto try_subset = [&]() {
    Eigen::MatrixXd A(n, n);
    Eigen::VectorXd b(n);
    for (Eigen::Index r = 0; r < n; ++r) {
      A.row(r) = M.F.row(subset[static_cast<size_t>(r)]);
      b(r) = M.g(subset[static_cast<size_t>(r)]);
    }
    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
    const double rc = lu.rcond();
    if (!(rc > 1e-10)) return;  // near-singular active set
    const Eigen::VectorXd x = lu.solve(b);
    if (!contains(M, x, kDedupTol)) return;
    for (const auto& v : found) {
      if ((v - x).cwiseAbs().maxCoeff() <= kDedupTol) return;
    }
    found.push_back(x);
  };
  const auto enumerate = [&](auto&& self, Eigen::Index start, Eigen::Index depth) -> void {
    if (depth == n) {
      try_subset();
      return;
    }
    for (Eigen::Index i = start; i < m; ++i) {
      subset[static_cast<size_t>(depth)] = static_cast<int>(i);
      self(self, i + 1, depth + 1);
    }
  };
  enumerate(enumerate, 0, 0);

  if (found.empty()) {
    throw std::runtime_error("vertices(): no vertex found (degenerate H-rep)");
  }

  // Flat-direction snap: a paired-inequality (band) encoding makes the active
  // sets resolve to the band's corner points, ±kFlatTol off the true affine
  // hull.  Detect directions in which the vertex cloud is thinner than the
  // band scale and project the vertices back onto the hull, so flat sets
  // round-trip exactly through V-rep computations.
  if (found.size() > 1) {
    const Eigen::Index N = static_cast<Eigen::Index>(found.size());
    Eigen::VectorXd center = Eigen::VectorXd::Zero(n);
    for (const auto& v : found) center += v;
    center /= static_cast<double>(N);
    Eigen::MatrixXd D(n, N);
    for (Eigen::Index j = 0; j < N; ++j) D.col(j) = found[static_cast<size_t>(j)] - center;
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(D, Eigen::ComputeFullU);
    const double snap_tol =
        10.0 * kFlatTol * std::sqrt(static_cast<double>(N));
    Eigen::Index rank = 0;
    while (rank < svd.singularValues().size() && svd.singularValues()(rank) > snap_tol) {
      ++rank;
    }
    if (rank < n) {
      const Eigen::MatrixXd T = svd.matrixU().leftCols(rank);
      std::vector<Eigen::VectorXd> snapped;
      for (const auto& v : found) {
        const Eigen::VectorXd s = center + T * (T.transpose() * (v - center));
        bool seen = false;
        for (const auto& q : snapped) {
          if ((s - q).cwiseAbs().maxCoeff() <= 10.0 * kFlatTol) {
            seen = true;
            break;
          }
        }
        if (!seen) snapped.push_back(s);
      }
      found = std::move(snapped);
    }
  }

  std::sort(found.begin(), found.end(), lex_less);
  return found;
}

Polytope minkowski_sum(const Polytope& P, const Polytope& Q) {
  if (P.dim() != Q.dim()) {
    throw std::runtime_error("minkowski_sum(): dimension mismatch");
  }
  if (P.dim() > 4) {
    throw std::runtime_error("minkowski_sum(): ambient dimension capped at 4");
  }
  const std::vector<Eigen::VectorXd> vp = vertices(P);
  const std::vector<Eigen::VectorXd> vq = vertices(Q);
  std::vector<Eigen::VectorXd> sums;
  sums.reserve(vp.size() * vq.size());
  for (const auto& p : vp) {
    for (const auto& q : vq) {
      sums.push_back(p + q);
    }
  }
  return hull_hrep(sums);
}

Polytope affine_image(const Eigen::MatrixXd& M, const Polytope& P) {
  if (M.cols() != P.dim()) {
    throw std::runtime_error("affine_image(): dimension mismatch");
  }
  if (M.rows() > 4) {
    throw std::runtime_error("affine_image(): image dimension capped at 4");
  }
  const std::vector<Eigen::VectorXd> vp = vertices(P);
  std::vector<Eigen::VectorXd> mapped;
  mapped.reserve(vp.size());
  for (const auto& v : vp) {
    mapped.push_back(M * v);
  }
  return hull_hrep(mapped);
}

Polytope pontryagin_diff(const Polytope& P, const SetExpr& S) {
  if (S.dim() != P.dim()) {
    throw std::runtime_error("pontryagin_diff(): dimension mismatch");
  }
  Eigen::VectorXd g = P.g;
  for (Eigen::Index i = 0; i < P.F.rows(); ++i) {
    g(i) -= S.support(P.F.row(i).transpose());
  }
  return Polytope{P.F, g, nullptr};
}

}  // namespace crg::geometry
