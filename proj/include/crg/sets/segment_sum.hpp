#pragma once

#include <Eigen/Dense>
#include <vector>

#include "crg/geometry/polytope.hpp"
#include "crg/geometry/set_expr.hpp"

namespace crg::sets {

// Internal support machinery for this module: a centrally symmetric set
// described as a center plus a sum of segments (a zonotope),
//
//   S = { c + Σ_k t_k g_k  :  |t_k| ≤ 1 },
//
// with the generators g_k as matrix columns.  Affine images and Minkowski
// sums are closed-form on this representation, which keeps the long
// disturbance-propagation sums (mRPI partial sums, interlacing schedules)
// exact and cheap where H-representation arithmetic would blow up.  All
// conversions back to half-space form go through facet_polytope below.
struct SegmentSum {
  Eigen::VectorXd center;
  Eigen::MatrixXd generators;  // d x m, one segment per column

  int dim() const { return static_cast<int>(center.size()); }
  int count() const { return static_cast<int>(generators.cols()); }
};

// {c} with no segments.
SegmentSum segment_point(const Eigen::VectorXd& c);

// Exact conversion for axis-aligned boxes; any other bounded polytope is
// replaced by its interval hull (outer, via one support solve per axis
// direction).  Throws on empty or unbounded input.
SegmentSum segment_from_polytope(const geometry::Polytope& P);

// Interval hull of an arbitrary bounded set expression (outer; exact when
// the expression is an axis-aligned box).
SegmentSum segment_interval_hull(const geometry::SetExpr& S);

// M S (affine image without offset).
SegmentSum segment_map(const Eigen::MatrixXd& M, const SegmentSum& S);

// Minkowski sum: centers add, segment lists concatenate.
SegmentSum segment_concat(const std::vector<SegmentSum>& terms);

// t S for t >= 0.
SegmentSum segment_scale(double t, const SegmentSum& S);

// S ⊕ delta·[-1,1]^d: appends one axis segment per coordinate.  Used to
// give flat sets full-dimensional interiors before facet enumeration or
// contraction arguments; always an outer operation.
SegmentSum segment_inflate(const SegmentSum& S, double delta);

// h_S(d) = c·d + Σ_k |g_k·d|.
double segment_support(const SegmentSum& S, const Eigen::VectorXd& direction);

// Combines parallel segments (same or opposite direction) into one of the
// summed length — exact — and drops zero segments.
SegmentSum segment_merge_parallel(const SegmentSum& S, double tol = 1e-9);

// Order reduction to at most `cap` segments: the shortest segments are
// replaced by their axis-aligned interval hull (outer).  cap must be at
// least the dimension.
SegmentSum segment_reduce(const SegmentSum& S, int cap);

// Rank of the segment span (the set is full-dimensional iff this equals
// the ambient dimension).
int segment_rank(const SegmentSum& S, double tol = 1e-9);

// Exact half-space representation.  Every facet normal of a segment sum is
// orthogonal to some (d-1)-subset of generators, so candidate normals are
// enumerated from those subsets (a perpendicular in 2D, a cross product in
// 3D, a kernel vector in higher dimension), each taken at its support
// offset in both orientations.  Requires a full-dimensional span — inflate
// first if the set may be flat.  Throws otherwise.
geometry::Polytope facet_polytope(const SegmentSum& S);

}  // namespace crg::sets
