#include "crg/sets/segment_sum.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "crg/geometry/tolerances.hpp"

namespace crg::sets {

namespace {

// Appends `candidate` (unit length) to `normals` unless a parallel or
// antiparallel entry is already present.
void push_unique_direction(std::vector<Eigen::VectorXd>& normals,
                           const Eigen::VectorXd& candidate) {
  for (const Eigen::VectorXd& n : normals) {
    if (std::abs(n.dot(candidate)) > 1.0 - geometry::kDedupTol) return;
  }
  normals.push_back(candidate);
}

}  // namespace

SegmentSum segment_point(const Eigen::VectorXd& c) {
  SegmentSum S;
  S.center = c;
  S.generators = Eigen::MatrixXd::Zero(c.size(), 0);
  return S;
}

SegmentSum segment_from_polytope(const geometry::Polytope& P) {
  const int d = P.dim();

  // Axis-aligned box detection: every row bounds a single coordinate.
  bool is_box = true;
  Eigen::VectorXd lo = Eigen::VectorXd::Constant(d, -std::numeric_limits<double>::infinity());
  Eigen::VectorXd hi = Eigen::VectorXd::Constant(d, std::numeric_limits<double>::infinity());
  for (Eigen::Index r = 0; r < P.F.rows() && is_box; ++r) {
    int nonzero = -1;
    for (int c = 0; c < d; ++c) {
      if (P.F(r, c) != 0.0) {
        if (nonzero >= 0) {
          is_box = false;
          break;
        }
        nonzero = c;
      }
    }
    if (!is_box || nonzero < 0) {
      is_box = false;
      break;
    }
    const double bound = P.g(r) / P.F(r, nonzero);
    if (P.F(r, nonzero) > 0.0) {
      hi(nonzero) = std::min(hi(nonzero), bound);
    } else {
      lo(nonzero) = std::max(lo(nonzero), bound);
    }
  }
  if (is_box) {
    for (int c = 0; c < d; ++c) {
      if (!std::isfinite(lo(c)) || !std::isfinite(hi(c)) || lo(c) > hi(c)) {
        is_box = false;
        break;
      }
    }
  }
  if (is_box) {
    SegmentSum S;
    S.center = 0.5 * (lo + hi);
    std::vector<int> active;
    for (int c = 0; c < d; ++c)
      if (hi(c) - lo(c) > 0.0) active.push_back(c);
    S.generators = Eigen::MatrixXd::Zero(d, static_cast<int>(active.size()));
    for (std::size_t k = 0; k < active.size(); ++k)
      S.generators(active[k], static_cast<int>(k)) = 0.5 * (hi(active[k]) - lo(active[k]));
    return S;
  }

  return segment_interval_hull(geometry::SetExpr::polytope(P));
}

SegmentSum segment_interval_hull(const geometry::SetExpr& S) {
  const int d = S.dim();
  Eigen::VectorXd lo(d), hi(d);
  for (int c = 0; c < d; ++c) {
    Eigen::VectorXd dir = Eigen::VectorXd::Zero(d);
    dir(c) = 1.0;
    hi(c) = S.support(dir);
    dir(c) = -1.0;
    lo(c) = -S.support(dir);
    if (lo(c) > hi(c))
      throw std::runtime_error("segment_interval_hull(): expression has empty axis extent");
  }
  SegmentSum result;
  result.center = 0.5 * (lo + hi);
  std::vector<int> active;
  for (int c = 0; c < d; ++c)
    if (hi(c) - lo(c) > 0.0) active.push_back(c);
  result.generators = Eigen::MatrixXd::Zero(d, static_cast<int>(active.size()));
  for (std::size_t k = 0; k < active.size(); ++k)
    result.generators(active[k], static_cast<int>(k)) = 0.5 * (hi(active[k]) - lo(active[k]));
  return result;
}

SegmentSum segment_map(const Eigen::MatrixXd& M, const SegmentSum& S) {
  if (M.cols() != S.dim())
    throw std::runtime_error("segment_map(): matrix width does not match the set dimension");
  SegmentSum out;
  out.center = M * S.center;
  out.generators = M * S.generators;
  return out;
}

SegmentSum segment_concat(const std::vector<SegmentSum>& terms) {
  if (terms.empty()) throw std::runtime_error("segment_concat(): need at least one term");
  const int d = terms[0].dim();
  int total = 0;
  for (const SegmentSum& t : terms) {
    if (t.dim() != d) throw std::runtime_error("segment_concat(): dimension mismatch");
    total += t.count();
  }
  SegmentSum out;
  out.center = Eigen::VectorXd::Zero(d);
  out.generators = Eigen::MatrixXd::Zero(d, total);
  int at = 0;
  for (const SegmentSum& t : terms) {
    out.center += t.center;
    out.generators.middleCols(at, t.count()) = t.generators;
    at += t.count();
  }
  return out;
}

SegmentSum segment_scale(double t, const SegmentSum& S) {
  if (t < 0.0) throw std::runtime_error("segment_scale(): negative scale");
  SegmentSum out;
  out.center = t * S.center;
  out.generators = t * S.generators;
  return out;
}

SegmentSum segment_inflate(const SegmentSum& S, double delta) {
  if (delta < 0.0) throw std::runtime_error("segment_inflate(): negative inflation");
  const int d = S.dim();
  SegmentSum out;
  out.center = S.center;
  out.generators = Eigen::MatrixXd::Zero(d, S.count() + d);
  out.generators.leftCols(S.count()) = S.generators;
  out.generators.rightCols(d) = delta * Eigen::MatrixXd::Identity(d, d);
  return out;
}

double segment_support(const SegmentSum& S, const Eigen::VectorXd& direction) {
  return S.center.dot(direction) + (S.generators.transpose() * direction).cwiseAbs().sum();
}

SegmentSum segment_merge_parallel(const SegmentSum& S, double tol) {
  std::vector<Eigen::VectorXd> merged;     // unit directions
  std::vector<double> lengths;
  for (int k = 0; k < S.count(); ++k) {
    const Eigen::VectorXd g = S.generators.col(k);
    const double norm = g.norm();
    if (norm <= 0.0) continue;
    const Eigen::VectorXd unit = g / norm;
    bool absorbed = false;
    for (std::size_t j = 0; j < merged.size(); ++j) {
      if (std::abs(merged[j].dot(unit)) > 1.0 - tol) {
        lengths[j] += norm;  // segments are symmetric, so sign is immaterial
        absorbed = true;
        break;
      }
    }
    if (!absorbed) {
      merged.push_back(unit);
      lengths.push_back(norm);
    }
  }
  SegmentSum out;
  out.center = S.center;
  out.generators = Eigen::MatrixXd::Zero(S.dim(), static_cast<int>(merged.size()));
  for (std::size_t j = 0; j < merged.size(); ++j)
    out.generators.col(static_cast<Eigen::Index>(j)) = lengths[j] * merged[j];
  return out;
}

SegmentSum segment_reduce(const SegmentSum& S, int cap) {
  const int d = S.dim();
  if (cap < d) throw std::runtime_error("segment_reduce(): cap below the ambient dimension");
  SegmentSum merged = segment_merge_parallel(S);
  if (merged.count() <= cap) return merged;

  // Keep the longest cap - d segments; box the rest (outer).
  std::vector<int> order(merged.count());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&merged](int a, int b) {
    return merged.generators.col(a).norm() > merged.generators.col(b).norm();
  });
  const int keep = cap - d;
  SegmentSum out;
  out.center = merged.center;
  out.generators = Eigen::MatrixXd::Zero(d, cap);
  for (int k = 0; k < keep; ++k) out.generators.col(k) = merged.generators.col(order[k]);
  Eigen::VectorXd radii = Eigen::VectorXd::Zero(d);
  for (int k = keep; k < merged.count(); ++k)
    radii += merged.generators.col(order[k]).cwiseAbs();
  for (int c = 0; c < d; ++c) out.generators(c, keep + c) = radii(c);
  return out;
}

int segment_rank(const SegmentSum& S, double tol) {
  if (S.count() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(S.generators);
  const Eigen::VectorXd sigma = svd.singularValues();
  if (sigma.size() == 0) return 0;
  const double cutoff = tol * (1.0 + sigma(0));
  int rank = 0;
  for (Eigen::Index k = 0; k < sigma.size(); ++k)
    if (sigma(k) > cutoff) ++rank;
  return rank;
}

geometry::Polytope facet_polytope(const SegmentSum& S) {
  const int d = S.dim();
  if (d < 1) throw std::runtime_error("facet_polytope(): dimension must be at least one");
  const SegmentSum Z = segment_merge_parallel(S);
  const int m = Z.count();

  if (d == 1) {
    const double radius = Z.generators.cwiseAbs().sum();
    if (radius <= 0.0) return geometry::singleton(Z.center);
    Eigen::MatrixXd F(2, 1);
    F << 1.0, -1.0;
    Eigen::VectorXd g(2);
    g << Z.center(0) + radius, -Z.center(0) + radius;
    return geometry::make_polytope(F, g);
  }

  if (segment_rank(Z) < d)
    throw std::runtime_error(
        "facet_polytope(): segment span is not full-dimensional; inflate the set first");

  std::vector<Eigen::VectorXd> normals;
  if (d == 2) {
    for (int k = 0; k < m; ++k) {
      const Eigen::VectorXd g = Z.generators.col(k);
      Eigen::VectorXd n(2);
      n << -g(1), g(0);
      const double norm = n.norm();
      if (norm > 1e-14) push_unique_direction(normals, n / norm);
    }
  } else if (d == 3) {
    for (int a = 0; a < m; ++a) {
      const Eigen::Vector3d ga = Z.generators.col(a);
      for (int b = a + 1; b < m; ++b) {
        const Eigen::Vector3d n = ga.cross(Eigen::Vector3d(Z.generators.col(b)));
        const double norm = n.norm();
        const double scale = ga.norm() * Z.generators.col(b).norm();
        if (norm > 1e-12 * (1.0 + scale)) push_unique_direction(normals, n / norm);
      }
    }
  } else {
    // General dimension: normals orthogonal to (d-1)-subsets of segments.
    std::vector<int> subset(d - 1);
    std::function<void(int, int)> recurse = [&](int start, int depth) {
      if (depth == d - 1) {
        Eigen::MatrixXd block(d - 1, d);
        for (int r = 0; r < d - 1; ++r) block.row(r) = Z.generators.col(subset[r]).transpose();
        Eigen::FullPivLU<Eigen::MatrixXd> lu(block);
        lu.setThreshold(1e-10);
        if (lu.dimensionOfKernel() != 1) return;
        Eigen::VectorXd n = lu.kernel().col(0);
        const double norm = n.norm();
        if (norm > 1e-14) push_unique_direction(normals, n / norm);
        return;
      }
      for (int k = start; k < m; ++k) {
        subset[depth] = k;
        recurse(k + 1, depth + 1);
      }
    };
    recurse(0, 0);
  }

  if (normals.empty())
    throw std::runtime_error("facet_polytope(): no facet normals found");

  Eigen::MatrixXd F(2 * static_cast<Eigen::Index>(normals.size()), d);
  Eigen::VectorXd g(F.rows());
  for (std::size_t k = 0; k < normals.size(); ++k) {
    const Eigen::VectorXd& n = normals[k];
    F.row(2 * static_cast<Eigen::Index>(k)) = n.transpose();
    g(2 * static_cast<Eigen::Index>(k)) = segment_support(Z, n);
    F.row(2 * static_cast<Eigen::Index>(k) + 1) = -n.transpose();
    g(2 * static_cast<Eigen::Index>(k) + 1) = segment_support(Z, -n);
  }
  return geometry::make_polytope(F, g);
}

}  // namespace crg::sets
