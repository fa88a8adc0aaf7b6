#pragma once

#include <Eigen/Dense>
#include <map>
#include <string>
#include <vector>

#include "crg/geometry/polytope.hpp"

namespace crg::model {

// One open-loop subsystem of a cascade:
//   x⁺ = A x + Σ_j A_in[j] x^j + B u + E w,   y = C x,
// with polytopic constraint sets X (state), U (input) and disturbance bound
// W.  Couplings are keyed by the 0-based index of the upstream neighbor.
struct OpenLoopSubsystem {
  Eigen::MatrixXd A;
  Eigen::MatrixXd B;
  Eigen::MatrixXd C;
  Eigen::MatrixXd E;
  std::map<int, Eigen::MatrixXd> A_in;
  geometry::Polytope X;
  geometry::Polytope U;
  geometry::Polytope W;

  int n_x() const { return static_cast<int>(A.rows()); }
  int n_u() const { return static_cast<int>(B.cols()); }
  int n_y() const { return static_cast<int>(C.rows()); }
  int n_w() const { return static_cast<int>(E.cols()); }
};

// Directed interconnection structure: inlets[i] lists the upstream neighbors
// feeding subsystem i, outlets[i] the downstream neighbors fed by i.  A valid
// cascade is strictly lower-block-triangular: j ∈ inlets[i] ⇒ j < i, and the
// two listings are duals of each other.
struct CascadeTopology {
  int count = 0;
  std::vector<std::vector<int>> inlets;
  std::vector<std::vector<int>> outlets;
};

struct CascadeModel {
  std::vector<OpenLoopSubsystem> subsystems;
  CascadeTopology topology;

  int count() const { return static_cast<int>(subsystems.size()); }
};

// Derives the topology from the coupling keys (sorted inlets, dual outlets).
CascadeTopology derive_topology(const std::vector<OpenLoopSubsystem>& subsystems);

// Bundles subsystems with their derived topology.
CascadeModel make_cascade_model(std::vector<OpenLoopSubsystem> subsystems);

// Structural validation report: lower-block-triangular coupling, topology
// duality, matrix dimension consistency, and the constraint-set basics
// (origin membership of X, U, W).  Violations are reported as messages, not
// exceptions, so configuration errors surface all at once.
struct TopologyReport {
  bool ok = true;
  std::vector<std::string> violations;
};
TopologyReport validate_topology(const CascadeModel& model);

}  // namespace crg::model
