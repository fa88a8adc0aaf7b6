#include "crg/sets/tightening.hpp"

#include <sstream>
#include <stdexcept>

#include "crg/geometry/operations.hpp"
#include "crg/model/augment.hpp"

namespace crg::sets {

const geometry::SetExpr& WeSchedule::at(int i, int k) const {
  if (i < 0 || i >= static_cast<int>(per_subsystem.size()))
    throw std::runtime_error("WeSchedule::at(): subsystem index out of range");
  if (k < 0 || k > k_max)
    throw std::runtime_error("WeSchedule::at(): schedule index out of range");
  return per_subsystem[i];
}

WeSchedule we_schedule(const model::ClosedLoopCascade& chain, int k_max) {
  if (k_max < 0) throw std::runtime_error("we_schedule(): k_max must be nonnegative");
  WeSchedule schedule;
  schedule.k_max = k_max;
  schedule.per_subsystem.reserve(chain.count());
  for (int i = 0; i < chain.count(); ++i) {
    const model::ClosedLoopSubsystem& cl = chain.loops[i];
    std::vector<geometry::SetExpr> terms;
    for (const auto& [j, coupling] : cl.Phi_in) {
      if (j < 0 || j >= i)
        throw std::runtime_error("we_schedule(): chain is not in lower-triangular order");
      const Eigen::MatrixXd padded =
          model::pad_coupling_columns(coupling, chain.loops[j].n_z());
      terms.push_back(geometry::SetExpr::affine_image(padded, schedule.per_subsystem[j]));
    }
    terms.push_back(geometry::SetExpr::affine_image(
        cl.Omega, geometry::SetExpr::polytope(chain.model.subsystems[i].W)));
    schedule.per_subsystem.push_back(
        terms.size() == 1 ? terms.front() : geometry::SetExpr::minkowski_sum(terms));
  }
  return schedule;
}

std::vector<geometry::Polytope> transient_tightened(const model::ClosedLoopSubsystem& cl,
                                                    const geometry::SetExpr& w_e, int k_max) {
  if (k_max < 0) throw std::runtime_error("transient_tightened(): k_max must be nonnegative");
  if (w_e.dim() != cl.n_z())
    throw std::runtime_error("transient_tightened(): disturbance expression has wrong dimension");

  std::vector<geometry::Polytope> xu;
  xu.reserve(k_max + 1);
  xu.push_back(cl.XU);
  Eigen::MatrixXd Phi_pow = Eigen::MatrixXd::Identity(cl.n_z(), cl.n_z());
  for (int k = 0; k < k_max; ++k) {
    const geometry::SetExpr subtrahend =
        geometry::SetExpr::affine_image(cl.H * Phi_pow, w_e);
    geometry::Polytope next = geometry::pontryagin_diff(xu.back(), subtrahend);
    if (geometry::is_empty(next)) {
      std::ostringstream os;
      os << "transient_tightened(): tightened set is empty at step " << (k + 1)
         << "; the constraints cannot absorb this disturbance level";
      throw std::runtime_error(os.str());
    }
    xu.push_back(std::move(next));
    Phi_pow = Phi_pow * cl.Phi;
  }
  return xu;
}

namespace {

void require_nonempty_steady(const geometry::Polytope& xu_inf) {
  if (geometry::is_empty(xu_inf))
    throw std::runtime_error(
        "steady_tightened(): steady tightened set is empty; the invariant error bound "
        "consumes the whole constraint set");
}

}  // namespace

geometry::Polytope steady_tightened(const model::ClosedLoopSubsystem& cl,
                                    const geometry::Polytope& f_inf) {
  if (f_inf.dim() != cl.n_z())
    throw std::runtime_error("steady_tightened(): invariant set has wrong dimension");
  geometry::Polytope xu_inf = geometry::pontryagin_diff(
      cl.XU, geometry::SetExpr::affine_image(cl.H, geometry::SetExpr::polytope(f_inf)));
  require_nonempty_steady(xu_inf);
  return xu_inf;
}

geometry::Polytope steady_tightened(const model::ClosedLoopSubsystem& cl,
                                    const SegmentSum& f_inf) {
  if (f_inf.dim() != cl.n_z())
    throw std::runtime_error("steady_tightened(): invariant set has wrong dimension");
  Eigen::VectorXd g = cl.XU.g;
  for (Eigen::Index r = 0; r < g.size(); ++r)
    g(r) -= segment_support(f_inf, cl.H.transpose() * cl.XU.F.row(r).transpose());
  geometry::Polytope xu_inf = geometry::make_polytope(cl.XU.F, g);
  require_nonempty_steady(xu_inf);
  return xu_inf;
}

}  // namespace crg::sets
