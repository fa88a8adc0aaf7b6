#include "crg/geometry/hull.hpp"

#include <algorithm>
#include <stdexcept>

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

std::vector<Eigen::VectorXd> dedup_points(std::vector<Eigen::VectorXd> pts) {
  std::vector<Eigen::VectorXd> out;
  for (const auto& p : pts) {
    bool seen = false;
    for (const auto& q : out) {
      if ((p - q).cwiseAbs().maxCoeff() <= kDedupTol) {
        seen = true;
        break;
      }
    }
    if (!seen) out.push_back(p);
  }
  return out;
}

double cloud_scale(const std::vector<Eigen::VectorXd>& pts) {
  double s = 1.0;
  for (const auto& p : pts) s = std::max(s, p.cwiseAbs().maxCoeff());
  return s;
}

// True iff p lies outside conv(others), by maximizing aᵀp − t subject to
// aᵀq ≤ t for every other point and |a_i| ≤ 1: a positive optimum is a
// separating hyperplane.
bool separable(const Eigen::VectorXd& p, const std::vector<Eigen::VectorXd>& others,
               double tol) {
  const Eigen::Index d = p.size();
  const Eigen::Index m = static_cast<Eigen::Index>(others.size());
  Eigen::MatrixXd F(m + 2 * d, d + 1);
  Eigen::VectorXd g(m + 2 * d);
  F.setZero();
  for (Eigen::Index j = 0; j < m; ++j) {
    F.row(j).head(d) = others[static_cast<size_t>(j)].transpose();
    F(j, d) = -1.0;
    g(j) = 0.0;
  }
  for (Eigen::Index i = 0; i < d; ++i) {
    F(m + 2 * i, i) = 1.0;
    g(m + 2 * i) = 1.0;
    F(m + 2 * i + 1, i) = -1.0;
    g(m + 2 * i + 1) = 1.0;
  }
  Eigen::VectorXd c(d + 1);
  c.head(d) = p;
  c(d) = -1.0;
  const LpSolution sol = solve_lp_raw(c, F, g);
  if (sol.status != LpStatus::kOptimal) {
    throw std::runtime_error("extreme_points(): separation LP failed");
  }
  return sol.value > tol;
}

// Unit normal of the hyperplane through a d-subset of points; empty vector
// when the subset is degenerate (affinely dependent).
Eigen::VectorXd facet_normal(const std::vector<Eigen::VectorXd>& pts,
                             const std::vector<int>& subset, double scale) {
  const Eigen::Index d = pts[0].size();
  Eigen::MatrixXd D(d - 1, d);
  for (Eigen::Index r = 0; r + 1 < d; ++r) {
    D.row(r) = (pts[static_cast<size_t>(subset[static_cast<size_t>(r) + 1])] -
                pts[static_cast<size_t>(subset[0])])
                   .transpose();
  }
  Eigen::VectorXd n;
  double degenerate_tol = 0.0;
  if (d == 2) {
    n = Eigen::VectorXd(2);
    n << -D(0, 1), D(0, 0);
    degenerate_tol = 1e-10 * scale;
  } else if (d == 3) {
    const Eigen::Vector3d u = D.row(0).transpose();
    const Eigen::Vector3d v = D.row(1).transpose();
    n = u.cross(v);
    degenerate_tol = 1e-10 * scale * scale;
  } else {  // d == 4: 1-dimensional kernel of the difference matrix
    Eigen::FullPivLU<Eigen::MatrixXd> lu(D);
    lu.setThreshold(1e-10);
    if (lu.dimensionOfKernel() != 1) return {};
    n = lu.kernel().col(0);
    degenerate_tol = 1e-300;  // kernel-dimension check already decided
  }
  const double norm = n.norm();
  if (norm < degenerate_tol) return {};
  return n / norm;
}

// Facet enumeration for a full-dimensional extreme-point cloud.
Polytope hull_full_dim(const std::vector<Eigen::VectorXd>& ext) {
  const Eigen::Index d = ext[0].size();
  const int nv = static_cast<int>(ext.size());
  const double scale = cloud_scale(ext);
  const double side_tol = 1e-9 * scale;

  std::vector<Eigen::VectorXd> normals;
  std::vector<double> offsets;
  const auto consider = [&](Eigen::VectorXd n, const Eigen::VectorXd& anchor) {
    // Supporting-side test: all points on one side of the subset hyperplane.
    double smin = 0.0, smax = 0.0;
    const double base = n.dot(anchor);
    for (const auto& v : ext) {
      const double s = n.dot(v) - base;
      smin = std::min(smin, s);
      smax = std::max(smax, s);
    }
    if (smax > side_tol && smin < -side_tol) return;  // cuts the cloud
    if (smax > side_tol) n = -n;                      // flip outward
    double hi = n.dot(ext[0]);
    for (const auto& v : ext) hi = std::max(hi, n.dot(v));
    for (size_t k = 0; k < normals.size(); ++k) {
      if ((normals[k] - n).cwiseAbs().maxCoeff() <= kDedupTol) return;
    }
    normals.push_back(n);
    offsets.push_back(hi);
  };

  std::vector<int> subset(static_cast<size_t>(d));
  const auto enumerate = [&](auto&& self, int start, int depth) -> void {
    if (depth == d) {
      Eigen::VectorXd n = facet_normal(ext, subset, scale);
      if (n.size() > 0) {
        consider(std::move(n), ext[static_cast<size_t>(subset[0])]);
      }
      return;
    }
    for (int i = start; i < nv; ++i) {
      subset[static_cast<size_t>(depth)] = i;
      self(self, i + 1, depth + 1);
    }
  };
  enumerate(enumerate, 0, 0);

  if (static_cast<Eigen::Index>(normals.size()) < d + 1) {
    throw std::runtime_error("hull_hrep(): facet enumeration degenerate");
  }

  // Canonical row order: lexicographic on (normal, offset).
  std::vector<size_t> order(normals.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    if (lex_less(normals[a], normals[b])) return true;
    if (lex_less(normals[b], normals[a])) return false;
    return offsets[a] < offsets[b];
  });

  Eigen::MatrixXd F(normals.size(), d);
  Eigen::VectorXd g(normals.size());
  for (size_t i = 0; i < order.size(); ++i) {
    F.row(static_cast<Eigen::Index>(i)) = normals[order[i]].transpose();
    g(static_cast<Eigen::Index>(i)) = offsets[order[i]];
  }
  return make_polytope(F, g, ext);
}

struct AffineHull {
  Eigen::VectorXd center;
  Eigen::MatrixXd tangent;  // d × r orthonormal basis of the hull directions
  Eigen::MatrixXd normal;   // d × (d−r) orthonormal basis of the normal space
};

AffineHull affine_hull(const std::vector<Eigen::VectorXd>& pts) {
  const Eigen::Index d = pts[0].size();
  const Eigen::Index N = static_cast<Eigen::Index>(pts.size());
  Eigen::VectorXd center = Eigen::VectorXd::Zero(d);
  for (const auto& p : pts) center += p;
  center /= static_cast<double>(N);

  Eigen::MatrixXd D(d, N);
  for (Eigen::Index j = 0; j < N; ++j) D.col(j) = pts[static_cast<size_t>(j)] - center;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(D, Eigen::ComputeFullU);
  const auto& sv = svd.singularValues();
  const double rank_tol = 1e-9 * (1.0 + (sv.size() > 0 ? sv(0) : 0.0));
  Eigen::Index r = 0;
  while (r < sv.size() && sv(r) > rank_tol) ++r;

  AffineHull h;
  h.center = center;
  h.tangent = svd.matrixU().leftCols(r);
  h.normal = svd.matrixU().rightCols(d - r);
  return h;
}

}  // namespace

std::vector<Eigen::VectorXd> extreme_points(const std::vector<Eigen::VectorXd>& points) {
  if (points.empty()) {
    throw std::runtime_error("extreme_points(): empty input");
  }
  std::vector<Eigen::VectorXd> pts = dedup_points(points);
  const double tol = 1e-9 * cloud_scale(pts);
  std::vector<Eigen::VectorXd> ext;
  if (pts.size() == 1) {
    ext = pts;
  } else {
    for (size_t i = 0; i < pts.size(); ++i) {
      std::vector<Eigen::VectorXd> others;
      others.reserve(pts.size() - 1);
      for (size_t j = 0; j < pts.size(); ++j) {
        if (j != i) others.push_back(pts[j]);
      }
      if (separable(pts[i], others, tol)) ext.push_back(pts[i]);
    }
    if (ext.empty()) ext.push_back(pts.front());  // fully degenerate cloud
  }
  std::sort(ext.begin(), ext.end(), lex_less);
  return ext;
}

Polytope hull_hrep(const std::vector<Eigen::VectorXd>& points) {
  if (points.empty()) {
    throw std::runtime_error("hull_hrep(): empty input");
  }
  const Eigen::Index d = points[0].size();
  if (d < 1 || d > 4) {
    throw std::runtime_error("hull_hrep(): ambient dimension must be 1..4");
  }

  const std::vector<Eigen::VectorXd> ext = extreme_points(points);
  const AffineHull hull = affine_hull(ext);
  const Eigen::Index r = hull.tangent.cols();

  if (r == d) {
    if (d == 1) {
      double lo = ext.front()(0), hi = ext.front()(0);
      for (const auto& p : ext) {
        lo = std::min(lo, p(0));
        hi = std::max(hi, p(0));
      }
      Eigen::MatrixXd F(2, 1);
      F << 1.0, -1.0;
      Eigen::VectorXd g(2);
      g << hi, -lo;
      return make_polytope(F, g, ext);
    }
    return hull_full_dim(ext);
  }

  // Flat set: recurse in local coordinates of the affine hull, then lift the
  // side facets and add the paired band rows for each normal direction.
  const Eigen::Index rows_band = 2 * (d - r);
  Eigen::MatrixXd F;
  Eigen::VectorXd g;
  if (r == 0) {
    F.resize(rows_band, d);
    g.resize(rows_band);
  } else {
    std::vector<Eigen::VectorXd> local;
    local.reserve(ext.size());
    for (const auto& p : ext) {
      local.push_back(hull.tangent.transpose() * (p - hull.center));
    }
    const Polytope inner = hull_hrep(local);
    F.resize(inner.F.rows() + rows_band, d);
    g.resize(inner.F.rows() + rows_band);
    for (Eigen::Index i = 0; i < inner.F.rows(); ++i) {
      const Eigen::VectorXd lifted = hull.tangent * inner.F.row(i).transpose();
      F.row(i) = lifted.transpose();
      g(i) = inner.g(i) + lifted.dot(hull.center);
    }
  }
  for (Eigen::Index j = 0; j < d - r; ++j) {
    const Eigen::VectorXd u = hull.normal.col(j);
    const Eigen::Index base = F.rows() - rows_band + 2 * j;
    F.row(base) = u.transpose();
    g(base) = u.dot(hull.center) + kFlatTol;
    F.row(base + 1) = -u.transpose();
    g(base + 1) = -u.dot(hull.center) + kFlatTol;
  }
  return make_polytope(F, g, ext);
}

}  // namespace crg::geometry
