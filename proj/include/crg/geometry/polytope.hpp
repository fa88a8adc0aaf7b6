#pragma once

#include <Eigen/Dense>
#include <memory>
#include <vector>

namespace crg::geometry {

// Convex polytope in half-space representation {x : F x ≤ g}.
//
// Immutable after construction.  A vertex list may be attached when the
// construction route already produced one (hulls, Minkowski sums); it is a
// cache only — every operation recomputes from the H-rep when absent.  Flat
// (lower-dimensional) sets are representable through paired inequalities
// ±nᵀx ≤ nᵀc ± kFlatTol; nothing in the type itself distinguishes them.
struct Polytope {
  Eigen::MatrixXd F;
  Eigen::VectorXd g;
  std::shared_ptr<const std::vector<Eigen::VectorXd>> vertex_cache;

  int dim() const { return static_cast<int>(F.cols()); }
  Eigen::Index num_rows() const { return F.rows(); }
};

// Builds a polytope from an H-rep; validates shapes and rejects all-zero
// rows (throws std::runtime_error).
Polytope make_polytope(const Eigen::MatrixXd& F, const Eigen::VectorXd& g);

// Same, attaching a precomputed vertex list as cache.
Polytope make_polytope(const Eigen::MatrixXd& F, const Eigen::VectorXd& g,
                       std::vector<Eigen::VectorXd> vertices);

// Axis-aligned box {x : lo ≤ x ≤ hi}.
Polytope box(const Eigen::VectorXd& lo, const Eigen::VectorXd& hi);

// Symmetric box {x : |x_i| ≤ r_i}.
Polytope symmetric_box(const Eigen::VectorXd& radii);

// Degenerate singleton {c}, encoded with paired inequalities per axis.
Polytope singleton(const Eigen::VectorXd& c);

// Rescales every row to unit Euclidean norm (offsets adjusted accordingly);
// the represented set is unchanged.
Polytope normalize_rows(const Polytope& P);

// Membership: F x ≤ g + tol componentwise.
bool contains(const Polytope& P, const Eigen::VectorXd& x, double tol);

// Emptiness via an LP feasibility probe.
bool is_empty(const Polytope& P);

// True iff max fᵀx over P is ≤ offset + kRedundancyTol, i.e. appending the
// half-space {fᵀx ≤ offset} to P would change nothing.  An empty P makes any
// row vacuously redundant.
bool is_redundant(const Polytope& P, const Eigen::VectorXd& f, double offset);

// Minimal H-rep: drops every row redundant with respect to the others
// (first-to-last, deterministic).  Requires a nonempty set.
Polytope remove_redundant(const Polytope& P);

// {(x, y) : x ∈ P, y ∈ Q} via block-diagonal stacking.
Polytope cartesian_product(const Polytope& P, const Polytope& Q);

// {x : x ∈ P and x ∈ Q} via row stacking.
Polytope intersection(const Polytope& P, const Polytope& Q);

// Maximizes cᵀx over P.  Throws std::runtime_error on an empty region or an
// unbounded objective direction.
struct SupportResult {
  double value = 0.0;
  Eigen::VectorXd argmax;
};
SupportResult solve_lp(const Eigen::VectorXd& c, const Polytope& P);

}  // namespace crg::geometry
