#pragma once

#include <Eigen/Dense>
#include <map>

#include "crg/model/cascade.hpp"

namespace crg::model {

// Subsystem augmented with output integrators.  The augmented state is
// z = [x; x_a] where x_a accumulates the tracking error: x_a⁺ = x_a + r − y
// for a reference r injected on the integrator rows.  Block structure:
//
//   Phi_bar = [ A   0 ]     Gamma = [ B ]     Upsilon = [ C  0 ]
//             [ -C  I ]             [ 0 ]
//
//   Phi_in[j] = [ A_in[j] ]   (acts on the plant-state part x^j of the
//               [    0    ]    neighbor's augmented state)
//
//   Omega = [ E ]              (disturbances enter the plant rows)
//           [ 0 ]
struct AugmentedSubsystem {
  Eigen::MatrixXd Phi_bar;
  Eigen::MatrixXd Gamma;
  Eigen::MatrixXd Upsilon;
  Eigen::MatrixXd Omega;
  std::map<int, Eigen::MatrixXd> Phi_in;
  int n_x = 0;
  int n_y = 0;
  int n_u = 0;

  int n_z() const { return n_x + n_y; }
};

// Builds the integrator augmentation above.  Requires C to have full row
// rank, otherwise some integrator channel is redundant and the augmented
// pair cannot be stabilized; throws in that case.
AugmentedSubsystem augment_with_integrator(const OpenLoopSubsystem& sub);

// Extends a coupling block that acts on the neighbor's plant state x^j to
// one acting on the neighbor's full augmented state z^j = [x^j; x_a^j] by
// appending zero columns for the integrator part.
Eigen::MatrixXd pad_coupling_columns(const Eigen::MatrixXd& coupling_on_x, int n_z_neighbor);

}  // namespace crg::model
