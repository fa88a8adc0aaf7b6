#include "crg/sets/moas.hpp"

#include <sstream>
#include <stdexcept>

#include "crg/geometry/operations.hpp"
#include "crg/geometry/tolerances.hpp"
#include "crg/model/augment.hpp"
#include "crg/numerics/linear_solve.hpp"

namespace crg::sets {

namespace {

// Observability rank of (A, C): the stacked maps C A^k for k < dim must
// span the full state space, otherwise some admissible-set direction is
// never constrained and the accumulation cannot terminate.
void require_observable(const Eigen::MatrixXd& A, const Eigen::MatrixXd& C) {
  const Eigen::Index n = A.rows();
  Eigen::MatrixXd stack(C.rows() * n, n);
  Eigen::MatrixXd block = C;
  for (Eigen::Index k = 0; k < n; ++k) {
    stack.middleRows(k * C.rows(), C.rows()) = block;
    block = block * A;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(stack);
  const Eigen::VectorXd sigma = svd.singularValues();
  const double tol = 1e-9 * (1.0 + (sigma.size() ? sigma(0) : 0.0));
  Eigen::Index rank = 0;
  for (Eigen::Index k = 0; k < sigma.size(); ++k)
    if (sigma(k) > tol) ++rank;
  if (rank < n)
    throw std::runtime_error(
        "moas(): the frozen-reference pair is not observable; the admissible set "
        "would be unbounded in an unobserved direction");
}

}  // namespace

MoasResult moas(const model::ClosedLoopSubsystem& cl, const geometry::Polytope& xu_inf,
                const geometry::SetExpr& w_z, const MoasOptions& options) {
  const int n_z = cl.n_z();
  const int n_y = cl.n_y;
  const int n = n_z + n_y;
  if (xu_inf.dim() != cl.n_x + cl.n_u)
    throw std::runtime_error("moas(): tightened set does not match the constrained variables");
  if (w_z.dim() != n_z)
    throw std::runtime_error("moas(): disturbance expression has wrong dimension");

  // Combined (z, r) evolution with frozen reference.
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
  A.topLeftCorner(n_z, n_z) = cl.Phi;
  A.topRightCorner(n_z, n_y) = cl.Gamma;
  A.bottomRightCorner(n_y, n_y) = Eigen::MatrixXd::Identity(n_y, n_y);
  Eigen::MatrixXd C = Eigen::MatrixXd::Zero(cl.n_x + cl.n_u, n);
  C.leftCols(n_z) = cl.H;
  require_observable(A, C);

  // Phase 1: run the tightened offset recursion XU(k+1) = XU(k) ⊖ H Phi^k W_z
  // on the fixed row matrix of xu_inf until the per-step shift dies out.
  // The accumulated admissible rows below read their offsets from this
  // sequence (constant past convergence).
  const Eigen::MatrixXd& F0 = xu_inf.F;
  std::vector<Eigen::VectorXd> g_seq;
  g_seq.push_back(xu_inf.g);
  {
    Eigen::MatrixXd Phi_pow = Eigen::MatrixXd::Identity(n_z, n_z);
    for (int k = 0;; ++k) {
      if (k > options.k_cap)
        throw std::runtime_error(
            "moas(): tightened offsets failed to converge within the iteration cap");
      const Eigen::MatrixXd HP = cl.H * Phi_pow;
      Eigen::VectorXd g_next(g_seq.back().size());
      double shift = 0.0;
      for (Eigen::Index r = 0; r < F0.rows(); ++r) {
        const double support = w_z.support((F0.row(r) * HP).transpose());
        g_next(r) = g_seq.back()(r) - support;
        shift = std::max(shift, support);
      }
      if (geometry::is_empty(geometry::make_polytope(F0, g_next))) {
        std::ostringstream os;
        os << "moas(): tightened constraint set is empty after step " << (k + 1)
           << "; the interlacing disturbance exhausts the constraints";
        throw std::runtime_error(os.str());
      }
      g_seq.push_back(g_next);
      Phi_pow = Phi_pow * cl.Phi;
      if (shift < options.offset_tol) break;
    }
  }
  auto g_at = [&g_seq](int k) -> const Eigen::VectorXd& {
    return k < static_cast<int>(g_seq.size()) ? g_seq[static_cast<std::size_t>(k)]
                                              : g_seq.back();
  };

  MoasResult result;
  result.tightening_converged = true;

  std::vector<Eigen::VectorXd> rows;
  std::vector<double> offsets;
  auto accumulated = [&]() {
    Eigen::MatrixXd F(static_cast<Eigen::Index>(rows.size()), n);
    Eigen::VectorXd b(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t r = 0; r < rows.size(); ++r) {
      F.row(static_cast<Eigen::Index>(r)) = rows[r].transpose();
      b(static_cast<Eigen::Index>(r)) = offsets[r];
    }
    return geometry::make_polytope(F, b);
  };
  auto push_row = [&](const Eigen::VectorXd& f, double offset) -> bool {
    if (f.cwiseAbs().maxCoeff() <= 1e-14) return false;  // constraint on nothing
    if (!rows.empty() && geometry::is_redundant(accumulated(), f, offset)) return false;
    rows.push_back(f);
    offsets.push_back(offset);
    return true;
  };

  // Phase 2: eps-shrunk steady-state rows first.  They bound the frozen
  // reference at its limit point and are what makes the k-rows eventually
  // redundant despite the marginally stable reference block.
  const Eigen::VectorXd& g_conv = g_seq.back();
  Eigen::VectorXd g_eps(g_conv.size());
  for (Eigen::Index r = 0; r < F0.rows(); ++r)
    g_eps(r) = g_conv(r) - options.eps * F0.row(r).norm();
  result.XU_eps = geometry::make_polytope(F0, g_eps);
  for (Eigen::Index r = 0; r < F0.rows(); ++r) {
    if (g_eps(r) / F0.row(r).norm() <= 0.0)
      throw std::runtime_error(
          "moas(): the shrunk steady set lost the origin; eps is too large for these "
          "tightened constraints");
  }
  const Eigen::MatrixXd dc_gain = numerics::solve_linear_multi(
      Eigen::MatrixXd(Eigen::MatrixXd::Identity(n_z, n_z) - cl.Phi), cl.Gamma);
  const Eigen::MatrixXd H_dc = cl.H * dc_gain;  // (n_x+n_u) x n_y
  for (Eigen::Index r = 0; r < F0.rows(); ++r) {
    Eigen::VectorXd f = Eigen::VectorXd::Zero(n);
    f.tail(n_y) = (F0.row(r) * H_dc).transpose();
    push_row(f, g_eps(r));
  }

  // Phase 3: accumulate rows [H 0] A^k (z, r) ∈ XU(k); finite determination
  // is the first step whose rows are all redundant.
  {
    Eigen::MatrixXd CAk = C;
    bool determined = false;
    for (int k = 0; k <= options.k_cap; ++k) {
      bool added = false;
      const Eigen::VectorXd& gk = g_at(k);
      for (Eigen::Index r = 0; r < F0.rows(); ++r) {
        const Eigen::VectorXd f = (F0.row(r) * CAk).transpose();
        added = push_row(f, gk(r)) || added;
      }
      if (!added) {
        determined = true;
        result.iterations = k;
        break;
      }
      CAk = CAk * A;
    }
    if (!determined)
      throw std::runtime_error(
          "moas(): no finite determination within the iteration cap; constraints keep "
          "binding at ever longer horizons");
  }

  geometry::Polytope O = accumulated();
  if (geometry::is_empty(O)) {
    throw std::runtime_error(
        "moas(): admissible set is empty; the interlacing disturbance bound is too "
        "large for the tightened constraints — it only shrinks if the admissible "
        "sets it is built from are enlarged upstream");
  }
  result.O_eps = geometry::remove_redundant(O);
  return result;
}

std::vector<MoasSuite> moas_decentralized(const model::ClosedLoopCascade& chain,
                                          const std::vector<geometry::Polytope>& xu_inf,
                                          const MoasOptions& options,
                                          const std::map<int, geometry::Polytope>& w_z_margin) {
  if (static_cast<int>(xu_inf.size()) != chain.count())
    throw std::runtime_error("moas_decentralized(): need one tightened set per subsystem");
  for (const auto& [i, margin] : w_z_margin) {
    if (i < 0 || i >= chain.count())
      throw std::runtime_error("moas_decentralized(): margin index outside the chain");
    if (margin.dim() != chain.loops[static_cast<std::size_t>(i)].n_z())
      throw std::runtime_error(
          "moas_decentralized(): margin dimension does not match the stage state");
  }

  std::vector<MoasSuite> suites;
  suites.reserve(chain.count());
  for (int i = 0; i < chain.count(); ++i) {
    const model::ClosedLoopSubsystem& cl = chain.loops[i];
    const int n_z = cl.n_z();

    // Interlacing bound from the upstream projections, enlarged by the
    // configured margin when one is given for this stage.
    geometry::Polytope w_z_poly = geometry::singleton(Eigen::VectorXd::Zero(n_z));
    geometry::SetExpr w_z_expr = geometry::SetExpr::ball(0.0, n_z);
    bool nontrivial = false;
    if (!cl.Phi_in.empty()) {
      bool first = true;
      for (const auto& [j, coupling] : cl.Phi_in) {
        if (j < 0 || j >= i)
          throw std::runtime_error("moas_decentralized(): chain is not in cascade order");
        const Eigen::MatrixXd padded =
            model::pad_coupling_columns(coupling, chain.loops[j].n_z());
        geometry::Polytope mapped = geometry::affine_image(padded, suites[j].O_z);
        w_z_poly = first ? std::move(mapped)
                         : geometry::minkowski_sum(w_z_poly, mapped);
        first = false;
      }
      nontrivial = true;
    }
    if (auto it = w_z_margin.find(i); it != w_z_margin.end()) {
      w_z_poly = nontrivial ? geometry::minkowski_sum(w_z_poly, it->second) : it->second;
      nontrivial = true;
    }
    if (nontrivial) w_z_expr = geometry::SetExpr::polytope(w_z_poly);

    MoasResult local;
    try {
      local = moas(cl, xu_inf[i], w_z_expr, options);
    } catch (const std::runtime_error& e) {
      std::ostringstream os;
      os << "moas_decentralized(): stage " << i << " failed: " << e.what();
      throw std::runtime_error(os.str());
    }

    MoasSuite suite;
    suite.O_eps = local.O_eps;
    suite.XU_eps = local.XU_eps;
    suite.W_z = std::move(w_z_poly);
    suite.iterations = local.iterations;

    // State-block projection via vertex enumeration and hull.
    Eigen::MatrixXd selector = Eigen::MatrixXd::Zero(n_z, n_z + cl.n_y);
    selector.leftCols(n_z) = Eigen::MatrixXd::Identity(n_z, n_z);
    suite.O_z = geometry::affine_image(selector, suite.O_eps);

    suites.push_back(std::move(suite));
  }
  return suites;
}

}  // namespace crg::sets
