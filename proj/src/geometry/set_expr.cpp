#include "crg/geometry/set_expr.hpp"

#include <stdexcept>

namespace crg::geometry {

struct SetExpr::ImageNode {
  Eigen::MatrixXd M;
  SetExpr inner;
};

struct SetExpr::SumNode {
  std::vector<SetExpr> terms;
};

SetExpr SetExpr::polytope(Polytope P) { return SetExpr(Node(std::move(P))); }

SetExpr SetExpr::ball(double radius, int dim) {
  if (radius < 0.0 || dim <= 0) {
    throw std::runtime_error("SetExpr::ball(): invalid radius or dimension");
  }
  return SetExpr(Node(BallNode{radius, dim}));
}

SetExpr SetExpr::affine_image(Eigen::MatrixXd M, SetExpr inner) {
  if (M.cols() != inner.dim()) {
    throw std::runtime_error("SetExpr::affine_image(): dimension mismatch");
  }
  return SetExpr(Node(
      std::make_shared<const ImageNode>(ImageNode{std::move(M), std::move(inner)})));
}

SetExpr SetExpr::minkowski_sum(std::vector<SetExpr> terms) {
  if (terms.empty()) {
    throw std::runtime_error("SetExpr::minkowski_sum(): no terms");
  }
  for (const auto& t : terms) {
    if (t.dim() != terms.front().dim()) {
      throw std::runtime_error("SetExpr::minkowski_sum(): dimension mismatch");
    }
  }
  return SetExpr(Node(std::make_shared<const SumNode>(SumNode{std::move(terms)})));
}

int SetExpr::dim() const {
  if (const auto* P = std::get_if<Polytope>(&node_)) return P->dim();
  if (const auto* B = std::get_if<BallNode>(&node_)) return B->dim;
  if (const auto* I = std::get_if<std::shared_ptr<const ImageNode>>(&node_)) {
    return static_cast<int>((*I)->M.rows());
  }
  return std::get<std::shared_ptr<const SumNode>>(node_).get()->terms.front().dim();
}

double SetExpr::support(const Eigen::VectorXd& direction) const {
  if (direction.size() != dim()) {
    throw std::runtime_error("SetExpr::support(): dimension mismatch");
  }
  if (const auto* P = std::get_if<Polytope>(&node_)) {
    if (direction.norm() < 1e-300) return 0.0;
    return solve_lp(direction, *P).value;
  }
  if (const auto* B = std::get_if<BallNode>(&node_)) {
    return B->radius * direction.norm();
  }
  if (const auto* I = std::get_if<std::shared_ptr<const ImageNode>>(&node_)) {
    return (*I)->inner.support((*I)->M.transpose() * direction);
  }
  const auto& sum = *std::get<std::shared_ptr<const SumNode>>(node_);
  double h = 0.0;
  for (const auto& t : sum.terms) h += t.support(direction);
  return h;
}

}  // namespace crg::geometry
