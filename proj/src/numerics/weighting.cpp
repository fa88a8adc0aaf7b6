#include "crg/numerics/weighting.hpp"

#include <stdexcept>
#include <string>

#include "crg/numerics/lyapunov.hpp"

namespace crg::numerics {
namespace {

constexpr double kSymmetryTol = 1e-10;

void require_symmetric(const Eigen::MatrixXd& M, const char* name) {
  if (M.rows() != M.cols()) {
    throw std::runtime_error(std::string("make_weighting(): ") + name +
                             " must be square");
  }
  const double skew = (M - M.transpose()).cwiseAbs().maxCoeff();
  if (skew > kSymmetryTol * (1.0 + M.cwiseAbs().maxCoeff())) {
    throw std::runtime_error(std::string("make_weighting(): ") + name +
                             " is not symmetric (skew " + std::to_string(skew) + ")");
  }
}

double min_eigenvalue(const Eigen::MatrixXd& S) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S);
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("make_weighting(): eigenvalue computation failed");
  }
  return es.eigenvalues().minCoeff();
}

Weighting build(const Eigen::MatrixXd& Phi, const Eigen::MatrixXd& Gamma,
                const Eigen::MatrixXd& Q, const Eigen::MatrixXd& R_alpha,
                const Eigen::MatrixXd* P_alpha_override) {
  require_symmetric(Q, "Q");
  require_symmetric(R_alpha, "R_alpha");
  if (min_eigenvalue(Q) <= 0.0) {
    throw std::runtime_error("make_weighting(): Q must be positive definite");
  }
  if (min_eigenvalue(R_alpha) <= 0.0) {
    throw std::runtime_error("make_weighting(): R_alpha must be positive definite");
  }

  Weighting w;
  w.Q = Q;
  w.R_alpha = R_alpha;
  w.P = solve_dlyap(Phi, Q);
  require_symmetric(w.P, "P");

  const Eigen::MatrixXd bound = Gamma.transpose() * w.P * Gamma + R_alpha;
  w.P_alpha = P_alpha_override ? *P_alpha_override : Eigen::MatrixXd(2.0 * bound);
  require_symmetric(w.P_alpha, "P_alpha");

  // The terminal correction weight must strictly dominate ΓᵀPΓ + R_alpha;
  // verified numerically even for the default construction.
  w.strictness_margin = min_eigenvalue(w.P_alpha - bound);
  if (w.strictness_margin <= 0.0) {
    throw std::runtime_error(
        "make_weighting(): P_alpha does not strictly dominate Gamma'*P*Gamma + R_alpha");
  }
  return w;
}

}  // namespace

Weighting make_weighting(const Eigen::MatrixXd& Phi, const Eigen::MatrixXd& Gamma,
                         const Eigen::MatrixXd& Q, const Eigen::MatrixXd& R_alpha) {
  return build(Phi, Gamma, Q, R_alpha, nullptr);
}

Weighting make_weighting(const Eigen::MatrixXd& Phi, const Eigen::MatrixXd& Gamma,
                         const Eigen::MatrixXd& Q, const Eigen::MatrixXd& R_alpha,
                         const Eigen::MatrixXd& P_alpha_override) {
  return build(Phi, Gamma, Q, R_alpha, &P_alpha_override);
}

}  // namespace crg::numerics
