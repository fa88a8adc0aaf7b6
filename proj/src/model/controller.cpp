#include "crg/model/controller.hpp"

#include <sstream>
#include <stdexcept>

#include "crg/numerics/riccati.hpp"

namespace crg::model {

Eigen::MatrixXd synthesize_controller(const AugmentedSubsystem& aug,
                                      const Eigen::MatrixXd& Q_lqr,
                                      const Eigen::MatrixXd& R_lqr) {
  const int n_z = aug.n_z();
  if (Q_lqr.rows() != n_z || Q_lqr.cols() != n_z)
    throw std::runtime_error("synthesize_controller(): Q_lqr must match the augmented dimension");
  if (R_lqr.rows() != aug.n_u || R_lqr.cols() != aug.n_u)
    throw std::runtime_error("synthesize_controller(): R_lqr must match the input dimension");
  return numerics::solve_dare(aug.Phi_bar, aug.Gamma, Q_lqr, R_lqr).K;
}

ClosedLoopSubsystem close_loop(const AugmentedSubsystem& aug,
                               const Eigen::MatrixXd& K,
                               const geometry::Polytope& X,
                               const geometry::Polytope& U) {
  const int n_z = aug.n_z();
  if (K.rows() != aug.n_u || K.cols() != n_z)
    throw std::runtime_error("close_loop(): K must be n_u x n_z");
  if (X.dim() != aug.n_x || U.dim() != aug.n_u)
    throw std::runtime_error("close_loop(): constraint sets do not match the subsystem dimensions");

  ClosedLoopSubsystem cl;
  cl.n_x = aug.n_x;
  cl.n_y = aug.n_y;
  cl.n_u = aug.n_u;
  cl.K = K;
  cl.Phi = aug.Phi_bar - aug.Gamma * K;
  cl.Upsilon = aug.Upsilon;
  cl.Omega = aug.Omega;
  cl.Phi_in = aug.Phi_in;

  cl.Gamma = Eigen::MatrixXd::Zero(n_z, aug.n_y);
  cl.Gamma.bottomRows(aug.n_y) = Eigen::MatrixXd::Identity(aug.n_y, aug.n_y);

  cl.H = Eigen::MatrixXd::Zero(aug.n_x + aug.n_u, n_z);
  cl.H.topLeftCorner(aug.n_x, aug.n_x) = Eigen::MatrixXd::Identity(aug.n_x, aug.n_x);
  cl.H.bottomRows(aug.n_u) = -K;

  cl.XU = geometry::cartesian_product(X, U);
  return cl;
}

ClosedLoopCascade synthesize_cascade(const CascadeModel& model,
                                     const std::vector<Eigen::MatrixXd>& Q_lqr,
                                     const std::vector<Eigen::MatrixXd>& R_lqr) {
  const TopologyReport report = validate_topology(model);
  if (!report.ok) {
    std::ostringstream os;
    os << "synthesize_cascade(): invalid cascade model:";
    for (const auto& violation : report.violations) os << "\n  - " << violation;
    throw std::runtime_error(os.str());
  }
  const int count = model.count();
  if (static_cast<int>(Q_lqr.size()) != count || static_cast<int>(R_lqr.size()) != count)
    throw std::runtime_error("synthesize_cascade(): need one weight pair per subsystem");

  ClosedLoopCascade cascade;
  cascade.model = model;
  cascade.augmented.reserve(count);
  cascade.loops.reserve(count);
  for (int i = 0; i < count; ++i) {
    const OpenLoopSubsystem& sub = model.subsystems[i];
    AugmentedSubsystem aug = augment_with_integrator(sub);
    const Eigen::MatrixXd K = synthesize_controller(aug, Q_lqr[i], R_lqr[i]);
    cascade.loops.push_back(close_loop(aug, K, sub.X, sub.U));
    cascade.augmented.push_back(std::move(aug));
  }
  return cascade;
}

ClosedLoopCascade synthesize_cascade(const CascadeModel& model) {
  std::vector<Eigen::MatrixXd> Q_lqr;
  std::vector<Eigen::MatrixXd> R_lqr;
  Q_lqr.reserve(model.count());
  R_lqr.reserve(model.count());
  for (const OpenLoopSubsystem& sub : model.subsystems) {
    const int n_z = sub.n_x() + sub.n_y();
    Q_lqr.push_back(Eigen::MatrixXd::Identity(n_z, n_z));
    R_lqr.push_back(Eigen::MatrixXd::Identity(sub.n_u(), sub.n_u()));
  }
  return synthesize_cascade(model, Q_lqr, R_lqr);
}

}  // namespace crg::model
