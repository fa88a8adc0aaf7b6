#include "crg/rhop/problem.hpp"

#include <sstream>
#include <stdexcept>

#include "crg/model/augment.hpp"

namespace crg::rhop {

namespace {

// Flat membership rows (opposite normals with zero combined slack) are
// relaxed by this much so exact flat membership stays representable in
// floating point.
constexpr double kFlatTol = 1e-7;

void require(bool condition, const char* message) {
  if (!condition) throw std::runtime_error(std::string("rhop: ") + message);
}

Eigen::VectorXd stack_delta(const std::vector<Eigen::VectorXd>& delta, int N, int n_y) {
  Eigen::VectorXd d = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(N) * n_y);
  for (int l = 0; l < N && l < static_cast<int>(delta.size()); ++l)
    d.segment(static_cast<Eigen::Index>(l) * n_y, n_y) = delta[static_cast<std::size_t>(l)];
  return d;
}

std::vector<Eigen::VectorXd> unstack_delta(const Eigen::VectorXd& d, int N, int n_y) {
  std::vector<Eigen::VectorXd> delta(static_cast<std::size_t>(N));
  for (int l = 0; l < N; ++l)
    delta[static_cast<std::size_t>(l)] = d.segment(static_cast<Eigen::Index>(l) * n_y, n_y);
  return delta;
}

// Affine dependence of every constrained trajectory value on the stacked
// increment vector, obtained by differencing unit-increment predictions
// against the zero-increment base.  The recursions are linear, so the
// columns are exact; base and sensitivity then feed both the condensed
// rows and the cost.
struct AffineTrajectories {
  RhopTrajectories base;
  // sens[t] columns follow the stacked decision vector.
  std::vector<Eigen::MatrixXd> alpha, eps, z_u, z_c, sigma, sigma_outlet;
};

AffineTrajectories linearize(const RhopContext& ctx, const RhopInput& input) {
  const int N = ctx.N;
  const int n_y = ctx.n_y();
  const int n_z = ctx.n_z();
  const Eigen::Index nd = static_cast<Eigen::Index>(N) * n_y;

  AffineTrajectories out;
  out.base = predict_trajectories(ctx, input, unstack_delta(Eigen::VectorXd::Zero(nd), N, n_y));

  auto alloc = [&](std::vector<Eigen::MatrixXd>& sens, int rows, int count) {
    sens.assign(static_cast<std::size_t>(count), Eigen::MatrixXd::Zero(rows, nd));
  };
  alloc(out.alpha, n_y, N + 1);
  alloc(out.eps, n_z, N + 1);
  alloc(out.z_u, n_z, N + 1);
  alloc(out.z_c, n_z, N + 1);
  alloc(out.sigma, n_z, N + 1);
  alloc(out.sigma_outlet, out.base.sigma_outlet.empty()
                              ? 0
                              : static_cast<int>(out.base.sigma_outlet.front().size()),
        static_cast<int>(out.base.sigma_outlet.size()));

  for (Eigen::Index col = 0; col < nd; ++col) {
    Eigen::VectorXd unit = Eigen::VectorXd::Zero(nd);
    unit(col) = 1.0;
    const RhopTrajectories probe =
        predict_trajectories(ctx, input, unstack_delta(unit, N, n_y));
    for (int t = 0; t <= N; ++t) {
      const auto s = static_cast<std::size_t>(t);
      out.alpha[s].col(col) = probe.alpha[s] - out.base.alpha[s];
      out.eps[s].col(col) = probe.eps[s] - out.base.eps[s];
      out.z_u[s].col(col) = probe.z_u[s] - out.base.z_u[s];
      out.z_c[s].col(col) = probe.z_c[s] - out.base.z_c[s];
      out.sigma[s].col(col) = probe.sigma[s] - out.base.sigma[s];
    }
    for (std::size_t s = 0; s < out.base.sigma_outlet.size(); ++s)
      out.sigma_outlet[s].col(col) = probe.sigma_outlet[s] - out.base.sigma_outlet[s];
  }
  return out;
}

void validate_input(const RhopContext& ctx, const RhopInput& input) {
  const int n_z = ctx.n_z();
  const int n_y = ctx.n_y();
  require(ctx.N >= 1, "horizon must be at least 1");
  require(input.eps_d.size() == n_z, "tracking-error state has wrong dimension");
  require(input.z.size() == n_z, "commanded state has wrong dimension");
  require(input.alpha_prev.size() == n_y, "previous correction has wrong dimension");
  require(input.y_r.size() == n_y && input.y_r_prev.size() == n_y,
          "reference has wrong dimension");
  require(input.inlet_z_c.size() == ctx.inlet_couplings.size(),
          "need one commanded trajectory per inlet");
  require(input.inlet_sigma.size() == ctx.inlet_couplings.size(),
          "need one plan-shift trajectory per inlet");
  for (std::size_t j = 0; j < input.inlet_z_c.size(); ++j) {
    require(static_cast<int>(input.inlet_z_c[j].size()) >= ctx.N,
            "inlet commanded trajectory shorter than the horizon");
    require(static_cast<int>(input.inlet_sigma[j].size()) >= ctx.N,
            "inlet plan-shift trajectory shorter than the horizon");
  }
  if (!input.first_step) {
    require(static_cast<int>(input.delta_prev.size()) == ctx.N,
            "previous plan must cover the horizon");
    if (ctx.outlet) {
      require(input.own_z_c_prev_terminal.size() == n_z,
              "previous own terminal state has wrong dimension");
      require(static_cast<int>(input.outlet_z_c_prev.size()) >= ctx.N - 1,
              "outlet previous trajectory shorter than needed");
      require(input.outlet_y_r.size() == ctx.outlet->Gamma.cols() &&
                  input.outlet_y_r_prev.size() == ctx.outlet->Gamma.cols(),
              "outlet reference has wrong dimension");
    }
  }
  require(static_cast<int>(ctx.xu.size()) >= ctx.N, "tightened schedule shorter than horizon");
  if (ctx.outlet)
    require(static_cast<int>(ctx.outlet->xu.size()) >= ctx.N,
            "outlet schedule shorter than horizon");
}

}  // namespace

std::vector<Eigen::VectorXd> delta_alpha_shift(
    const std::vector<Eigen::VectorXd>& delta_now,
    const std::vector<Eigen::VectorXd>& delta_prev, const Eigen::VectorXd& y_r,
    const Eigen::VectorXd& y_r_prev, int N) {
  std::vector<Eigen::VectorXd> shift(static_cast<std::size_t>(N));
  for (int l = 0; l < N; ++l) {
    Eigen::VectorXd value = y_r - y_r_prev;
    if (l < static_cast<int>(delta_now.size())) value += delta_now[static_cast<std::size_t>(l)];
    // The previous plan's entry for absolute time k+l sits one index later
    // (it was indexed from k−1); beyond its horizon the plan is zero.
    if (l + 1 < static_cast<int>(delta_prev.size()))
      value -= delta_prev[static_cast<std::size_t>(l + 1)];
    shift[static_cast<std::size_t>(l)] = value;
  }
  return shift;
}

RhopTrajectories predict_trajectories(const RhopContext& ctx, const RhopInput& input,
                                      const std::vector<Eigen::VectorXd>& delta) {
  const int N = ctx.N;
  const int n_z = ctx.n_z();
  const int n_y = ctx.n_y();
  require(static_cast<int>(delta.size()) == N, "increment sequence must cover the horizon");

  require(input.inlet_z_c.size() == ctx.inlet_couplings.size() &&
              input.inlet_sigma.size() == ctx.inlet_couplings.size(),
          "need one commanded and one plan-shift trajectory per inlet");
  for (std::size_t j = 0; j < input.inlet_z_c.size(); ++j)
    require(static_cast<int>(input.inlet_z_c[j].size()) >= N &&
                static_cast<int>(input.inlet_sigma[j].size()) >= N,
            "inlet trajectory shorter than the horizon");

  RhopTrajectories traj;
  traj.alpha.resize(static_cast<std::size_t>(N) + 1);
  traj.eps.resize(static_cast<std::size_t>(N) + 1);
  traj.z_u.resize(static_cast<std::size_t>(N) + 1);
  traj.z_c.resize(static_cast<std::size_t>(N) + 1);
  traj.sigma.resize(static_cast<std::size_t>(N) + 1);

  const std::vector<Eigen::VectorXd> shift =
      delta_alpha_shift(delta, input.first_step ? std::vector<Eigen::VectorXd>{}
                                                : input.delta_prev,
                        input.y_r, input.y_r_prev, N);

  traj.alpha[0] = input.alpha_prev;
  traj.eps[0] = input.eps_d;
  traj.z_u[0] = input.z - input.eps_d;
  traj.z_c[0] = input.z;
  traj.sigma[0] = Eigen::VectorXd::Zero(n_z);

  for (int l = 0; l < N; ++l) {
    const auto s = static_cast<std::size_t>(l);
    traj.alpha[s + 1] = traj.alpha[s] + delta[s];

    traj.eps[s + 1] = ctx.Phi * traj.eps[s] + ctx.Gamma * delta[s];

    Eigen::VectorXd z_next = ctx.Phi * traj.z_u[s] +
                             ctx.Gamma * (input.y_r + traj.alpha[s]);
    Eigen::VectorXd sigma_next = ctx.Phi * traj.sigma[s] + ctx.Gamma * shift[s];
    for (std::size_t j = 0; j < ctx.inlet_couplings.size(); ++j) {
      z_next += ctx.inlet_couplings[j] * input.inlet_z_c[j][s];
      sigma_next += ctx.inlet_couplings[j] * input.inlet_sigma[j][s];
    }
    traj.z_u[s + 1] = z_next;
    traj.sigma[s + 1] = sigma_next;
    traj.z_c[s + 1] = traj.z_u[s + 1] + traj.eps[s + 1];
  }

  // Propagated shift of the outlet's previous plan: its own replanning is
  // frozen at zero increment, so only the reference change and the shift
  // arriving through the coupling drive it.
  if (ctx.outlet && !input.first_step) {
    const auto& out = *ctx.outlet;
    const Eigen::VectorXd ref_change = input.outlet_y_r - input.outlet_y_r_prev;
    traj.sigma_outlet.resize(static_cast<std::size_t>(N));
    traj.sigma_outlet[0] = Eigen::VectorXd::Zero(out.Phi.rows());
    for (int l = 0; l + 1 < N; ++l) {
      const auto s = static_cast<std::size_t>(l);
      traj.sigma_outlet[s + 1] = out.Phi * traj.sigma_outlet[s] +
                                 out.coupling * traj.sigma[s] + out.Gamma * ref_change;
    }
  }
  (void)n_y;
  return traj;
}

double rhop_cost(const RhopContext& ctx, const RhopTrajectories& traj,
                 const std::vector<Eigen::VectorXd>& delta) {
  const auto& w = ctx.weights;
  const int N = ctx.N;
  double cost = traj.eps[static_cast<std::size_t>(N)].dot(
                    w.P * traj.eps[static_cast<std::size_t>(N)]) +
                traj.alpha[static_cast<std::size_t>(N)].dot(
                    w.P_alpha * traj.alpha[static_cast<std::size_t>(N)]);
  for (int l = 0; l < N; ++l) {
    const auto s = static_cast<std::size_t>(l);
    cost += traj.eps[s].dot(w.Q * traj.eps[s]);
    cost += delta[s].dot(w.R_alpha * delta[s]);
  }
  return cost;
}

QpProblem build_rhop(const RhopContext& ctx, const RhopInput& input) {
  validate_input(ctx, input);
  const int N = ctx.N;
  const int n_y = ctx.n_y();
  const Eigen::Index nd = static_cast<Eigen::Index>(N) * n_y;
  const AffineTrajectories aff = linearize(ctx, input);

  QpProblem qp;
  qp.Hess = Eigen::MatrixXd::Zero(nd, nd);
  qp.grad = Eigen::VectorXd::Zero(nd);

  // Quadratic terms: each weighted value v = v0 + M d contributes
  // 2 MᵀSM to the Hessian and 2 MᵀS v0 to the gradient (the QP minimizes
  // ½ dᵀHd + gᵀd, so the factor 2 makes ½·H reproduce vᵀSv).
  auto add_term = [&](const Eigen::MatrixXd& M, const Eigen::VectorXd& v0,
                      const Eigen::MatrixXd& S) {
    qp.Hess += 2.0 * M.transpose() * S * M;
    qp.grad += 2.0 * M.transpose() * S * v0;
  };
  const auto& w = ctx.weights;
  for (int l = 1; l < N; ++l)
    add_term(aff.eps[static_cast<std::size_t>(l)], aff.base.eps[static_cast<std::size_t>(l)],
             w.Q);
  add_term(aff.eps[static_cast<std::size_t>(N)], aff.base.eps[static_cast<std::size_t>(N)],
           w.P);
  add_term(aff.alpha[static_cast<std::size_t>(N)],
           aff.base.alpha[static_cast<std::size_t>(N)], w.P_alpha);
  for (int l = 0; l < N; ++l) {
    Eigen::MatrixXd picker = Eigen::MatrixXd::Zero(n_y, nd);
    picker.middleCols(static_cast<Eigen::Index>(l) * n_y, n_y).setIdentity();
    add_term(picker, Eigen::VectorXd::Zero(n_y), w.R_alpha);
  }

  // Constraint rows, assembled as F·(map) d ≤ g − F·(base).
  std::vector<Eigen::MatrixXd> blocks_A;
  std::vector<Eigen::VectorXd> blocks_b;
  auto add_rows = [&](const geometry::Polytope& set, const Eigen::MatrixXd& map,
                      const Eigen::MatrixXd& M, const Eigen::VectorXd& v0,
                      double relax) {
    blocks_A.push_back(set.F * map * M);
    blocks_b.push_back(set.g.array() + relax - (set.F * map * v0).array());
  };

  // Own commanded trajectory against the tightened schedule.
  for (int l = 1; l < N; ++l) {
    const auto s = static_cast<std::size_t>(l);
    add_rows(ctx.xu[s], ctx.H, aff.z_c[s], aff.base.z_c[s], 0.0);
  }

  if (ctx.outlet && !input.first_step) {
    const auto& out = *ctx.outlet;
    // The outlet's previous plan, shifted by the propagated replanning
    // effect, against its schedule one depth further in.
    for (int l = 1; l <= N - 2; ++l) {
      const auto s = static_cast<std::size_t>(l);
      const Eigen::VectorXd base =
          input.outlet_z_c_prev[s] + aff.base.sigma_outlet[s];
      add_rows(out.xu[static_cast<std::size_t>(l + 1)], out.H, aff.sigma_outlet[s], base,
               0.0);
    }
    // Shifted terminal interlacing against the outlet budget.
    const auto sN = static_cast<std::size_t>(N - 1);
    const Eigen::VectorXd base =
        input.own_z_c_prev_terminal + aff.base.sigma[sN];
    add_rows(out.W_z, out.coupling, aff.sigma[sN], base, kFlatTol);
  }

  // Terminal admissibility of (ẑ_c(N), y_r + α̂(N−1)).
  {
    const auto sN = static_cast<std::size_t>(N);
    const Eigen::Index dim = ctx.n_z() + n_y;
    Eigen::MatrixXd M(dim, nd);
    M.topRows(ctx.n_z()) = aff.z_c[sN];
    M.bottomRows(n_y) = aff.alpha[sN];
    Eigen::VectorXd v0(dim);
    v0 << aff.base.z_c[sN], input.y_r + aff.base.alpha[sN];
    add_rows(ctx.O_eps, Eigen::MatrixXd::Identity(dim, dim), M, v0, 0.0);
  }

  Eigen::Index total = 0;
  for (const auto& blk : blocks_A) total += blk.rows();
  Eigen::MatrixXd A_all(total, nd);
  Eigen::VectorXd b_all(total);
  Eigen::Index at = 0;
  for (std::size_t k = 0; k < blocks_A.size(); ++k) {
    A_all.middleRows(at, blocks_A[k].rows()) = blocks_A[k];
    b_all.segment(at, blocks_b[k].size()) = blocks_b[k];
    at += blocks_A[k].rows();
  }

  // Rows with no decision dependence (flat interlacing directions, or the
  // whole budget block at horizon 1) are plain data checks: drop them when
  // satisfied, refuse the build when violated — the solver itself rejects
  // zero rows.
  Eigen::Index kept = 0;
  for (Eigen::Index r = 0; r < total; ++r) {
    if (A_all.row(r).norm() > 1e-12) {
      A_all.row(kept) = A_all.row(r);
      b_all(kept) = b_all(r);
      ++kept;
    } else if (b_all(r) < -1e-9) {
      std::ostringstream os;
      os << "build_rhop(): stage " << ctx.index
         << " carries a fixed constraint violated by the supplied plans "
            "(residual "
         << -b_all(r) << "); the committed trajectories are inconsistent";
      throw std::runtime_error(os.str());
    }
  }
  qp.A = A_all.topRows(kept);
  qp.b = b_all.head(kept);
  return qp;
}

RhopSolution solve_rhop(const RhopContext& ctx, const RhopInput& input,
                        const QpOptions& qp_options) {
  const QpProblem qp = build_rhop(ctx, input);
  const int N = ctx.N;
  const int n_y = ctx.n_y();

  // The shifted previous plan doubles as warm start and as the documented
  // fallback when the fresh problem is numerically infeasible.
  std::vector<Eigen::VectorXd> shifted;
  if (!input.first_step && !input.delta_prev.empty()) {
    shifted.resize(static_cast<std::size_t>(N), Eigen::VectorXd::Zero(n_y));
    for (int l = 0; l + 1 < N; ++l)
      shifted[static_cast<std::size_t>(l)] = input.delta_prev[static_cast<std::size_t>(l + 1)];
  }

  RhopSolution sol;
  QpResult qr;
  if (shifted.empty()) {
    qr = solve_qp(qp, qp_options);
  } else {
    const Eigen::VectorXd warm = stack_delta(shifted, N, n_y);
    qr = solve_qp(qp, qp_options, &warm);
  }

  if (qr.status == QpStatus::kOptimal) {
    sol.delta = unstack_delta(qr.x, N, n_y);
    sol.qp_iterations = qr.iterations;
    sol.active_rows = static_cast<int>(qr.active_set.size());
    sol.stationarity = qr.stationarity;
    sol.primal_feasibility = qr.primal_feasibility;
    sol.complementarity = qr.complementarity;
  } else if (!shifted.empty()) {
    sol.delta = shifted;
    sol.fallback = true;
  } else {
    std::ostringstream os;
    os << "solve_rhop(): stage " << ctx.index
       << " problem infeasible with no previous plan to fall back on "
          "(relaxation gap "
       << qr.infeasibility_gap << ")";
    throw std::runtime_error(os.str());
  }

  sol.traj = predict_trajectories(ctx, input, sol.delta);
  sol.cost = rhop_cost(ctx, sol.traj, sol.delta);
  return sol;
}

RhopContext make_rhop_context(const model::ClosedLoopCascade& chain,
                              const sets::SetSynthesis& synthesis,
                              const numerics::Weighting& weights, int index, int N) {
  require(index >= 0 && index < chain.count(), "stage index outside the chain");
  require(static_cast<int>(synthesis.subsystems.size()) == chain.count(),
          "set suite does not match the chain");
  require(N >= 1, "horizon must be at least 1");

  const model::ClosedLoopSubsystem& cl = chain.loops[static_cast<std::size_t>(index)];
  const auto& sets_i = synthesis.subsystems[static_cast<std::size_t>(index)];
  require(static_cast<int>(sets_i.tightening.xu.size()) >= N,
          "tightened schedule shorter than the horizon; raise the schedule length");

  RhopContext ctx;
  ctx.index = index;
  ctx.N = N;
  ctx.weights = weights;
  ctx.Phi = cl.Phi;
  ctx.Gamma = cl.Gamma;
  ctx.H = cl.H;
  for (const auto& [j, coupling] : cl.Phi_in)
    ctx.inlet_couplings.push_back(model::pad_coupling_columns(
        coupling, chain.loops[static_cast<std::size_t>(j)].n_z()));
  ctx.xu.assign(sets_i.tightening.xu.begin(), sets_i.tightening.xu.begin() + N);
  ctx.O_eps = sets_i.moas.O_eps;

  // A stage's outlet is the next stage when it lists this one as inlet.
  if (index + 1 < chain.count()) {
    const model::ClosedLoopSubsystem& next =
        chain.loops[static_cast<std::size_t>(index + 1)];
    const auto it = next.Phi_in.find(index);
    if (it != next.Phi_in.end()) {
      const auto& sets_m = synthesis.subsystems[static_cast<std::size_t>(index + 1)];
      require(static_cast<int>(sets_m.tightening.xu.size()) >= N,
              "outlet schedule shorter than the horizon");
      RhopContext::Outlet out;
      out.index = index + 1;
      out.Phi = next.Phi;
      out.Gamma = next.Gamma;
      out.H = next.H;
      out.coupling = model::pad_coupling_columns(it->second, cl.n_z());
      out.xu.assign(sets_m.tightening.xu.begin(), sets_m.tightening.xu.begin() + N);
      out.W_z = sets_m.moas.W_z;
      ctx.outlet = std::move(out);
    }
  }
  return ctx;
}

}  // namespace crg::rhop
