#include "crg/numerics/linear_solve.hpp"

#include <stdexcept>
#include <string>

namespace crg::numerics {
namespace {

// Factorizes A and checks invertibility plus conditioning.  The reciprocal
// condition estimate from the LU factors is cheap and adequate for the small
// dense matrices handled here (n ≲ 40 for the vectorized Lyapunov systems).
Eigen::PartialPivLU<Eigen::MatrixXd> factorize_checked(const Eigen::MatrixXd& A,
                                                       const char* caller) {
  if (A.rows() != A.cols()) {
    throw std::runtime_error(std::string(caller) + "(): matrix must be square, got " +
                             std::to_string(A.rows()) + "x" + std::to_string(A.cols()));
  }
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
  const double rcond = lu.rcond();
  if (!(rcond > 0.0) || 1.0 / rcond > kConditionLimit) {
    throw std::runtime_error(std::string(caller) +
                             "(): matrix is singular or ill-conditioned (rcond = " +
                             std::to_string(rcond) + ")");
  }
  return lu;
}

// One step of iterative refinement: x ← x + A⁻¹(b − A x).  For
// well-conditioned systems this pushes the residual to a small multiple of
// machine epsilon, comfortably inside the 1e-9·(1+‖b‖∞) contract.
Eigen::VectorXd solve_refined(const Eigen::PartialPivLU<Eigen::MatrixXd>& lu,
                              const Eigen::MatrixXd& A, const Eigen::VectorXd& b) {
  Eigen::VectorXd x = lu.solve(b);
  x += lu.solve(b - A * x);
  return x;
}

}  // namespace

Eigen::VectorXd solve_linear(const Eigen::MatrixXd& A, const Eigen::VectorXd& b) {
  if (b.size() != A.rows()) {
    throw std::runtime_error("solve_linear(): dimension mismatch between A and b");
  }
  const auto lu = factorize_checked(A, "solve_linear");
  return solve_refined(lu, A, b);
}

Eigen::MatrixXd solve_linear_multi(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B) {
  if (B.rows() != A.rows()) {
    throw std::runtime_error("solve_linear_multi(): dimension mismatch between A and B");
  }
  const auto lu = factorize_checked(A, "solve_linear_multi");
  Eigen::MatrixXd X(A.cols(), B.cols());
  for (Eigen::Index j = 0; j < B.cols(); ++j) {
    X.col(j) = solve_refined(lu, A, B.col(j));
  }
  return X;
}

}  // namespace crg::numerics
