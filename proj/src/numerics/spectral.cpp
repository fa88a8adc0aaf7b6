#include "crg/numerics/spectral.hpp"

#include <stdexcept>

namespace crg::numerics {

double spectral_radius(const Eigen::MatrixXd& A) {
  if (A.rows() != A.cols()) {
    throw std::runtime_error("spectral_radius(): matrix must be square");
  }
  if (A.rows() == 0) {
    return 0.0;
  }
  Eigen::EigenSolver<Eigen::MatrixXd> es(A, /*computeEigenvectors=*/false);
  if (es.info() != Eigen::Success) {
    throw std::runtime_error(
        "spectral_radius(): eigenvalue iteration did not converge");
  }
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

bool is_schur(const Eigen::MatrixXd& A, double margin) {
  try {
    return spectral_radius(A) < 1.0 - margin;
  } catch (const std::runtime_error&) {
    // Fallback: a matrix is Schur iff its powers decay geometrically.  Track
    // ‖A^k‖∞ until it either drops below 1e-12 (decay established) or exceeds
    // 1e12 / fails to shrink within the iteration cap (treated as unstable).
    Eigen::MatrixXd power = A;
    for (int k = 1; k <= 4096; ++k) {
      const double norm = power.cwiseAbs().rowwise().sum().maxCoeff();
      if (norm < 1e-12) {
        return true;
      }
      if (norm > 1e12) {
        return false;
      }
      power = power * A;
    }
    return false;
  }
}

}  // namespace crg::numerics
