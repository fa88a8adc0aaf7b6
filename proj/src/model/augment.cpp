#include "crg/model/augment.hpp"

#include <stdexcept>

namespace crg::model {

AugmentedSubsystem augment_with_integrator(const OpenLoopSubsystem& sub) {
  const int n_x = sub.n_x();
  const int n_y = sub.n_y();
  const int n_u = sub.n_u();
  const int n_w = sub.n_w();
  const int n_z = n_x + n_y;

  if (sub.A.rows() != sub.A.cols())
    throw std::runtime_error("augment_with_integrator(): A must be square");
  if (sub.B.rows() != n_x || sub.C.cols() != n_x || sub.E.rows() != n_x)
    throw std::runtime_error("augment_with_integrator(): B, C, E must match the state dimension");

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(sub.C);
  const double rank_tol = 1e-10 * (1.0 + (svd.singularValues().size() > 0
                                              ? svd.singularValues()(0)
                                              : 0.0));
  if (svd.rank() < n_y || (svd.singularValues().size() > 0 &&
                           svd.singularValues()(svd.singularValues().size() - 1) <= rank_tol))
    throw std::runtime_error(
        "augment_with_integrator(): C must have full row rank; a rank-deficient output map "
        "leaves an integrator channel uncontrollable");

  AugmentedSubsystem aug;
  aug.n_x = n_x;
  aug.n_y = n_y;
  aug.n_u = n_u;

  aug.Phi_bar = Eigen::MatrixXd::Zero(n_z, n_z);
  aug.Phi_bar.topLeftCorner(n_x, n_x) = sub.A;
  aug.Phi_bar.bottomLeftCorner(n_y, n_x) = -sub.C;
  aug.Phi_bar.bottomRightCorner(n_y, n_y) = Eigen::MatrixXd::Identity(n_y, n_y);

  aug.Gamma = Eigen::MatrixXd::Zero(n_z, n_u);
  aug.Gamma.topRows(n_x) = sub.B;

  aug.Upsilon = Eigen::MatrixXd::Zero(n_y, n_z);
  aug.Upsilon.leftCols(n_x) = sub.C;

  aug.Omega = Eigen::MatrixXd::Zero(n_z, n_w);
  aug.Omega.topRows(n_x) = sub.E;

  for (const auto& [j, A_ij] : sub.A_in) {
    Eigen::MatrixXd block = Eigen::MatrixXd::Zero(n_z, A_ij.cols());
    block.topRows(n_x) = A_ij;
    aug.Phi_in.emplace(j, std::move(block));
  }

  return aug;
}

Eigen::MatrixXd pad_coupling_columns(const Eigen::MatrixXd& coupling_on_x, int n_z_neighbor) {
  if (n_z_neighbor < coupling_on_x.cols())
    throw std::runtime_error(
        "pad_coupling_columns(): neighbor augmented dimension smaller than the coupling width");
  Eigen::MatrixXd padded = Eigen::MatrixXd::Zero(coupling_on_x.rows(), n_z_neighbor);
  padded.leftCols(coupling_on_x.cols()) = coupling_on_x;
  return padded;
}

}  // namespace crg::model
