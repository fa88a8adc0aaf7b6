#include "crg/sets/mrpi.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "crg/numerics/spectral.hpp"

namespace crg::sets {

namespace {

// Largest axis-aligned extent, used as the scale for inflation thresholds.
double radius_scale(const SegmentSum& S) {
  double r = S.center.cwiseAbs().maxCoeff();
  if (S.count() > 0) r += S.generators.cwiseAbs().rowwise().sum().maxCoeff();
  return r;
}

// Fixed direction template for the half-space form: real-Schur frame rows,
// coordinate axes, and the facet normals of a coarse sketch of F.  All
// directions are unit length; duplicates are dropped.
Eigen::MatrixXd hrep_template(const Eigen::MatrixXd& schur_u, const SegmentSum& F,
                              int sketch_cap) {
  const int d = F.dim();
  std::vector<Eigen::VectorXd> dirs;
  auto push = [&dirs](Eigen::VectorXd v) {
    const double norm = v.norm();
    if (norm <= 1e-12) return;
    v /= norm;
    for (const Eigen::VectorXd& seen : dirs)
      if ((seen - v).cwiseAbs().maxCoeff() < 1e-9) return;
    dirs.push_back(std::move(v));
  };

  for (int i = 0; i < d; ++i) {
    push(schur_u.col(i));
    push(-schur_u.col(i));
    Eigen::VectorXd axis = Eigen::VectorXd::Zero(d);
    axis(i) = 1.0;
    push(axis);
    push(-axis);
  }
  const geometry::Polytope sketch =
      facet_polytope(segment_reduce(F, std::max(sketch_cap, d)));
  for (Eigen::Index r = 0; r < sketch.num_rows(); ++r)
    push(sketch.F.row(r).transpose());

  Eigen::MatrixXd D(static_cast<Eigen::Index>(dirs.size()), d);
  for (std::size_t r = 0; r < dirs.size(); ++r)
    D.row(static_cast<Eigen::Index>(r)) = dirs[r].transpose();
  return D;
}

}  // namespace

MrpiResult mrpi_outer_segments(const Eigen::MatrixXd& Phi, const SegmentSum& W,
                               const MrpiOptions& options) {
  const int d = W.dim();
  if (Phi.rows() != d || Phi.cols() != d)
    throw std::runtime_error("mrpi_outer_segments(): Phi does not match the set dimension");
  if (!numerics::is_schur(Phi))
    throw std::runtime_error("mrpi_outer_segments(): Phi must be Schur");

  const double scale = radius_scale(W);
  if (scale == 0.0) {
    // Zero disturbance: the invariant set is the origin.
    MrpiResult result;
    result.F = segment_point(Eigen::VectorXd::Zero(d));
    result.F_hrep = geometry::singleton(Eigen::VectorXd::Zero(d));
    return result;
  }

  // Full-dimensionalize so a contraction factor exists even when the
  // disturbance is confined to a subspace that Phi rotates out of itself.
  SegmentSum W_work = segment_merge_parallel(W);
  if (segment_rank(W_work) < d)
    W_work = segment_inflate(W_work, options.flat_inflation * scale);
  W_work = segment_reduce(W_work, options.input_cap);

  const geometry::Polytope W_facets = facet_polytope(W_work);
  for (Eigen::Index r = 0; r < W_facets.g.size(); ++r) {
    if (W_facets.g(r) <= 0.0)
      throw std::runtime_error(
          "mrpi_outer_segments(): the origin must lie in the interior of the disturbance set");
  }

  // Smallest horizon with Phi^s W ⊆ alpha_bar W, alpha measured by support
  // ratios over the facets of W.
  const double alpha_bar = options.eps_rpi / (1.0 + options.eps_rpi);
  Eigen::MatrixXd Phi_pow = Phi;  // Phi^s while searching
  int s = 0;
  double alpha = 0.0;
  for (int trial = 1; trial <= options.s_max; ++trial) {
    const SegmentSum mapped = segment_map(Phi_pow, W_work);
    double worst = 0.0;
    for (Eigen::Index r = 0; r < W_facets.g.size(); ++r) {
      const double ratio = segment_support(mapped, W_facets.F.row(r).transpose()) / W_facets.g(r);
      worst = std::max(worst, ratio);
    }
    if (worst <= alpha_bar) {
      s = trial;
      alpha = worst;
      break;
    }
    Phi_pow = Phi_pow * Phi;
  }
  if (s == 0)
    throw std::runtime_error(
        "mrpi_outer_segments(): no contraction horizon up to the cap achieved the "
        "required factor; the dynamics contract too slowly for this tolerance");

  // Partial sum ⊕_{j<s} Phi^j W, scaled by (1-alpha)⁻¹.  Invariant by
  // construction: mapping it forward and adding W gives the same series
  // with Phi^s W ⊕ (1-alpha) W in place of W, and Phi^s W ⊆ alpha W.
  std::vector<SegmentSum> terms;
  terms.reserve(s);
  Eigen::MatrixXd pow = Eigen::MatrixXd::Identity(d, d);
  for (int j = 0; j < s; ++j) {
    terms.push_back(segment_map(pow, W_work));
    pow = pow * Phi;
  }
  MrpiResult result;
  result.s = s;
  result.alpha = alpha;
  result.F = segment_scale(1.0 / (1.0 - alpha), segment_concat(terms));

  // Half-space form on a fixed template.  Offsets start at the exact
  // supports of F and are lifted until g(d) ≥ h(Phi P, d) + h(W, d) holds
  // on every row, which is per-facet invariance of P.
  const Eigen::RealSchur<Eigen::MatrixXd> schur(Phi);
  const Eigen::MatrixXd D = hrep_template(schur.matrixU(), result.F, options.sketch_cap);
  const Eigen::Index rows = D.rows();

  Eigen::VectorXd g(rows);
  for (Eigen::Index r = 0; r < rows; ++r)
    g(r) = segment_support(result.F, D.row(r).transpose());
  const Eigen::VectorXd g_sharp = g;

  // Termination: the lift is monotone, and it is bounded whenever |T|
  // (elementwise, in the Schur frame) is itself Schur — the Schur-frame box
  // with radii (I - |T|)⁻¹ b around the disturbance center is invariant and
  // its rows are part of the template, so no offset can pass it.  The sweep
  // cap is the formal guard for dynamics without that certificate.
  const double tol_fp = 1e-12 * (1.0 + g.cwiseAbs().maxCoeff());
  const double cert_slack = 1e-9;
  int sweep = 0;
  for (;; ++sweep) {
    if (sweep > options.sweep_cap)
      throw std::runtime_error(
          "mrpi_outer_segments(): half-space offsets failed to reach an invariant "
          "fixed point within the sweep cap");
    const geometry::Polytope P = geometry::make_polytope(D, g);
    double lift = 0.0;
    Eigen::VectorXd g_next = g;
    for (Eigen::Index r = 0; r < rows; ++r) {
      const Eigen::VectorXd dir = D.row(r).transpose();
      const double needed = geometry::solve_lp(Phi.transpose() * dir, P).value +
                            segment_support(W_work, dir);
      if (needed > g_next(r)) {
        lift = std::max(lift, needed - g_next(r));
        g_next(r) = needed;
      }
    }
    g = std::move(g_next);
    if (lift <= tol_fp) break;
  }
  result.sweeps = sweep + 1;
  result.F_hrep = geometry::make_polytope(D, g);

  // Certificates on the returned forms: the half-space set absorbs one step
  // of the dynamics plus the disturbance, and it contains the segment form.
  for (Eigen::Index r = 0; r < rows; ++r) {
    const Eigen::VectorXd dir = D.row(r).transpose();
    const double lhs = geometry::solve_lp(Phi.transpose() * dir, result.F_hrep).value +
                       segment_support(W_work, dir);
    if (lhs > g(r) + cert_slack * (1.0 + std::abs(g(r))))
      throw std::runtime_error("mrpi_outer_segments(): invariance certificate failed");
    if (g(r) < g_sharp(r) - tol_fp)
      throw std::runtime_error("mrpi_outer_segments(): containment certificate failed");
  }
  return result;
}

geometry::Polytope mrpi_outer(const Eigen::MatrixXd& Phi, const geometry::SetExpr& W,
                              double eps_rpi) {
  if (eps_rpi <= 0.0)
    throw std::runtime_error("mrpi_outer(): the approximation slack must be positive");
  MrpiOptions options;
  options.eps_rpi = eps_rpi;
  return mrpi_outer_segments(Phi, segment_interval_hull(W), options).F_hrep;
}

}  // namespace crg::sets
