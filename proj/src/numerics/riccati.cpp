#include "crg/numerics/riccati.hpp"

#include <stdexcept>

#include "crg/numerics/linear_solve.hpp"
#include "crg/numerics/spectral.hpp"

namespace crg::numerics {

DareResult solve_dare(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                      const Eigen::MatrixXd& Q, const Eigen::MatrixXd& R) {
  const Eigen::Index n = A.rows();
  const Eigen::Index m = B.cols();
  if (A.cols() != n || B.rows() != n || Q.rows() != n || Q.cols() != n ||
      R.rows() != m || R.cols() != m) {
    throw std::runtime_error("solve_dare(): dimension mismatch");
  }

  constexpr double kRelTol = 1e-13;
  constexpr int kMaxIterations = 200;

  // Structure-preserving doubling: with G = B R⁻¹ Bᵀ, iterate
  //   A_{k+1} = A_k (I + G_k H_k)⁻¹ A_k
  //   G_{k+1} = G_k + A_k (I + G_k H_k)⁻¹ G_k A_kᵀ
  //   H_{k+1} = H_k + A_kᵀ H_k (I + G_k H_k)⁻¹ A_k
  // which squares the error each step, so ill-conditioned weightings (for
  // instance a near-unit closed-loop pole under a very expensive input)
  // still converge in a few dozen iterations.  H_k increases monotonically
  // to the stabilizing solution P.
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd Ak = A;
  Eigen::MatrixXd Gk = B * solve_linear_multi(R, Eigen::MatrixXd(B.transpose()));
  Gk = 0.5 * (Gk + Gk.transpose()).eval();
  Eigen::MatrixXd Hk = Q;

  int iterations = 0;
  bool converged = false;
  for (; iterations < kMaxIterations; ++iterations) {
    const Eigen::MatrixXd W = I + Gk * Hk;
    const Eigen::MatrixXd WinvA = solve_linear_multi(W, Ak);
    const Eigen::MatrixXd WinvG = solve_linear_multi(W, Gk);

    const Eigen::MatrixXd An = Ak * WinvA;
    Eigen::MatrixXd Gn = Gk + Ak * WinvG * Ak.transpose();
    Gn = 0.5 * (Gn + Gn.transpose()).eval();
    Eigen::MatrixXd Hn = Hk + WinvA.transpose() * Hk * Ak;
    Hn = 0.5 * (Hn + Hn.transpose()).eval();

    const double change = (Hn - Hk).cwiseAbs().maxCoeff();
    const double scale = 1.0 + Hn.cwiseAbs().maxCoeff();
    Ak = An;
    Gk = Gn;
    Hk = Hn;
    if (change <= kRelTol * scale) {
      converged = true;
      ++iterations;
      break;
    }
  }
  if (!converged) {
    throw std::runtime_error("solve_dare(): doubling iteration did not converge");
  }

  DareResult result;
  result.P = Hk;
  const Eigen::MatrixXd BtP = B.transpose() * Hk;
  result.K = solve_linear_multi(R + BtP * B, BtP * A);
  result.iterations = iterations;

  // The fixed-point residual certifies the solution independently of the
  // iteration path.
  const Eigen::MatrixXd residual =
      A.transpose() * Hk * A - Hk - A.transpose() * Hk * B * result.K + Q;
  const double res_scale = 1.0 + Hk.cwiseAbs().maxCoeff();
  if (residual.cwiseAbs().maxCoeff() > 1e-8 * res_scale) {
    throw std::runtime_error("solve_dare(): converged iterate fails the fixed-point residual");
  }
  if (!is_schur(A - B * result.K)) {
    throw std::runtime_error(
        "solve_dare(): derived gain does not stabilize the pair (A, B)");
  }
  return result;
}

}  // namespace crg::numerics
