#include "crg/model/cascade.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace crg::model {

namespace {

std::string subsystem_tag(int i) {
  std::ostringstream os;
  os << "subsystem " << i;
  return os.str();
}

}  // namespace

CascadeTopology derive_topology(const std::vector<OpenLoopSubsystem>& subsystems) {
  CascadeTopology topo;
  topo.count = static_cast<int>(subsystems.size());
  topo.inlets.assign(topo.count, {});
  topo.outlets.assign(topo.count, {});
  for (int i = 0; i < topo.count; ++i) {
    for (const auto& [j, A_ij] : subsystems[i].A_in) {
      static_cast<void>(A_ij);
      topo.inlets[i].push_back(j);
      if (j >= 0 && j < topo.count) topo.outlets[j].push_back(i);
    }
    std::sort(topo.inlets[i].begin(), topo.inlets[i].end());
  }
  for (auto& out : topo.outlets) std::sort(out.begin(), out.end());
  return topo;
}

CascadeModel make_cascade_model(std::vector<OpenLoopSubsystem> subsystems) {
  CascadeModel model;
  model.topology = derive_topology(subsystems);
  model.subsystems = std::move(subsystems);
  return model;
}

TopologyReport validate_topology(const CascadeModel& model) {
  TopologyReport report;
  auto fail = [&report](const std::string& message) {
    report.ok = false;
    report.violations.push_back(message);
  };

  const int count = model.count();
  if (static_cast<int>(model.topology.inlets.size()) != count ||
      static_cast<int>(model.topology.outlets.size()) != count ||
      model.topology.count != count) {
    fail("topology listings do not cover every subsystem");
    return report;
  }

  for (int i = 0; i < count; ++i) {
    const OpenLoopSubsystem& sub = model.subsystems[i];
    const std::string tag = subsystem_tag(i);

    if (sub.A.rows() != sub.A.cols())
      fail(tag + ": A must be square");
    if (sub.B.rows() != sub.A.rows())
      fail(tag + ": B row count must match the state dimension");
    if (sub.C.cols() != sub.A.rows())
      fail(tag + ": C column count must match the state dimension");
    if (sub.E.rows() != sub.A.rows())
      fail(tag + ": E row count must match the state dimension");
    if (sub.C.rows() == 0)
      fail(tag + ": C must have at least one output row");

    if (sub.X.dim() != sub.n_x())
      fail(tag + ": X lives in the wrong dimension");
    if (sub.U.dim() != sub.n_u())
      fail(tag + ": U lives in the wrong dimension");
    if (sub.W.dim() != sub.n_w())
      fail(tag + ": W lives in the wrong dimension");

    const Eigen::VectorXd x0 = Eigen::VectorXd::Zero(sub.X.dim());
    const Eigen::VectorXd u0 = Eigen::VectorXd::Zero(sub.U.dim());
    const Eigen::VectorXd w0 = Eigen::VectorXd::Zero(sub.W.dim());
    if (sub.X.dim() == sub.n_x() && !geometry::contains(sub.X, x0, 1e-12))
      fail(tag + ": X does not contain the origin");
    if (sub.U.dim() == sub.n_u() && !geometry::contains(sub.U, u0, 1e-12))
      fail(tag + ": U does not contain the origin");
    if (sub.W.dim() == sub.n_w() && !geometry::contains(sub.W, w0, 1e-12))
      fail(tag + ": W does not contain the origin");

    for (const auto& [j, A_ij] : sub.A_in) {
      std::ostringstream os;
      os << tag << ": coupling from " << j;
      const std::string edge = os.str();
      if (j < 0 || j >= count) {
        fail(edge + " references a subsystem that does not exist");
        continue;
      }
      if (j >= i)
        fail(edge + " breaks the strictly lower-triangular ordering (need j < i)");
      if (A_ij.rows() != sub.A.rows())
        fail(edge + ": coupling row count must match the receiving state dimension");
      if (A_ij.cols() != model.subsystems[j].A.rows())
        fail(edge + ": coupling column count must match the sending state dimension");
    }
  }

  // Topology duality: outlets must mirror inlets exactly.
  const CascadeTopology derived = derive_topology(model.subsystems);
  for (int i = 0; i < count; ++i) {
    if (model.topology.inlets[i] != derived.inlets[i])
      fail(subsystem_tag(i) + ": inlet listing does not match the coupling matrices");
    if (model.topology.outlets[i] != derived.outlets[i])
      fail(subsystem_tag(i) + ": outlet listing does not match the coupling matrices");
  }

  return report;
}

}  // namespace crg::model
