#include "crg/numerics/lyapunov.hpp"

#include <stdexcept>

#include "crg/numerics/linear_solve.hpp"
#include "crg/numerics/spectral.hpp"

namespace crg::numerics {

Eigen::MatrixXd kron(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B) {
  Eigen::MatrixXd K(A.rows() * B.rows(), A.cols() * B.cols());
  for (Eigen::Index i = 0; i < A.rows(); ++i) {
    for (Eigen::Index j = 0; j < A.cols(); ++j) {
      K.block(i * B.rows(), j * B.cols(), B.rows(), B.cols()) = A(i, j) * B;
    }
  }
  return K;
}

Eigen::MatrixXd kron_solve_vectorized(const Eigen::MatrixXd& Phi,
                                      const Eigen::MatrixXd& Q) {
  const Eigen::Index n = Phi.rows();
  if (Phi.cols() != n || Q.rows() != n || Q.cols() != n) {
    throw std::runtime_error("kron_solve_vectorized(): dimension mismatch");
  }
  // vec(Φᵀ P Φ) = (Φᵀ ⊗ Φᵀ) vec(P) under column-major stacking, so the Stein
  // equation becomes (I − Φᵀ ⊗ Φᵀ) vec(P) = vec(Q).
  const Eigen::MatrixXd PhiT = Phi.transpose();
  Eigen::MatrixXd M = Eigen::MatrixXd::Identity(n * n, n * n) - kron(PhiT, PhiT);
  const Eigen::VectorXd q = Eigen::Map<const Eigen::VectorXd>(Q.data(), n * n);
  const Eigen::VectorXd p = solve_linear(M, q);
  return Eigen::Map<const Eigen::MatrixXd>(p.data(), n, n);
}

Eigen::MatrixXd solve_dlyap(const Eigen::MatrixXd& Phi, const Eigen::MatrixXd& Q) {
  const Eigen::Index n = Phi.rows();
  if (Phi.cols() != n || Q.rows() != n || Q.cols() != n) {
    throw std::runtime_error("solve_dlyap(): dimension mismatch");
  }
  if ((Q - Q.transpose()).cwiseAbs().maxCoeff() > 1e-10 * (1.0 + Q.cwiseAbs().maxCoeff())) {
    throw std::runtime_error("solve_dlyap(): Q must be symmetric");
  }
  if (!is_schur(Phi)) {
    throw std::runtime_error(
        "solve_dlyap(): dynamics matrix has spectral radius >= 1");
  }
  Eigen::MatrixXd P = kron_solve_vectorized(Phi, Q);
  // The exact solution is symmetric; symmetrize to remove round-off skew.
  P = 0.5 * (P + P.transpose()).eval();
  const double residual =
      (Phi.transpose() * P * Phi - P + Q).cwiseAbs().maxCoeff();
  if (residual > 1e-10 * (1.0 + P.cwiseAbs().maxCoeff())) {
    throw std::runtime_error("solve_dlyap(): residual check failed");
  }
  return P;
}

}  // namespace crg::numerics
