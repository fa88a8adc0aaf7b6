#include "crg/model/checks.hpp"

#include <Eigen/Dense>
#include <sstream>

#include "crg/numerics/linear_solve.hpp"
#include "crg/numerics/spectral.hpp"

namespace crg::model {

StructuralCheckReport check_structural_properties(const ClosedLoopSubsystem& cl, double tol) {
  StructuralCheckReport report;
  auto push = [&report](std::string name, bool pass, double residual) {
    report.all_pass = report.all_pass && pass;
    report.items.push_back({std::move(name), pass, residual});
  };

  const int n_z = cl.n_z();
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n_z, n_z);

  const double rho = numerics::spectral_radius(cl.Phi);
  push("schur", rho < 1.0, rho);
  if (rho >= 1.0) {
    // (I - Phi) may be singular; the steady-state gains are undefined.
    push("dc_gain_identity", false, std::numeric_limits<double>::infinity());
    for (const auto& [j, block] : cl.Phi_in) {
      static_cast<void>(block);
      std::ostringstream os;
      os << "coupling_rejection[" << j << "]";
      push(os.str(), false, std::numeric_limits<double>::infinity());
    }
    return report;
  }

  const Eigen::MatrixXd resolvent_gain =
      numerics::solve_linear_multi(I - cl.Phi, cl.Gamma);
  const double dc_residual =
      (cl.Upsilon * resolvent_gain - Eigen::MatrixXd::Identity(cl.n_y, cl.n_y))
          .cwiseAbs()
          .maxCoeff();
  push("dc_gain_identity", dc_residual <= tol, dc_residual);

  for (const auto& [j, block] : cl.Phi_in) {
    const Eigen::MatrixXd through = numerics::solve_linear_multi(I - cl.Phi, block);
    const double residual = block.size() == 0
                                ? 0.0
                                : (cl.Upsilon * through).cwiseAbs().maxCoeff();
    std::ostringstream os;
    os << "coupling_rejection[" << j << "]";
    push(os.str(), residual <= tol, residual);
  }

  return report;
}

}  // namespace crg::model
