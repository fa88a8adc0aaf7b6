#pragma once

#include <Eigen/Dense>
#include <memory>
#include <variant>
#include <vector>

#include "crg/geometry/polytope.hpp"

namespace crg::geometry {

// Lazy bounded convex set: a tree of polytopes, Euclidean balls, affine
// images, and Minkowski sums.  Only support-function evaluation is ever
// needed on these trees (Pontryagin subtrahends, tightening schedules), so
// no explicit H-rep is materialized.
class SetExpr {
 public:
  static SetExpr polytope(Polytope P);
  static SetExpr ball(double radius, int dim);
  static SetExpr affine_image(Eigen::MatrixXd M, SetExpr inner);
  static SetExpr minkowski_sum(std::vector<SetExpr> terms);

  int dim() const;

  // h_S(d) = max_{x ∈ S} dᵀx.  Additive over Minkowski nodes; an affine
  // image evaluates the child at Mᵀd; a ball contributes radius·‖d‖₂.
  // Throws std::runtime_error on empty or unbounded polytope leaves.
  double support(const Eigen::VectorXd& direction) const;

 private:
  struct BallNode {
    double radius;
    int dim;
  };
  struct ImageNode;
  struct SumNode;
  using Node = std::variant<Polytope, BallNode, std::shared_ptr<const ImageNode>,
                            std::shared_ptr<const SumNode>>;

  explicit SetExpr(Node node) : node_(std::move(node)) {}
  Node node_;
};

inline double support(const SetExpr& S, const Eigen::VectorXd& direction) {
  return S.support(direction);
}

}  // namespace crg::geometry
