#include <Eigen/Dense>
#include <cmath>
#include <string>
#include <vector>

#include "doctest.h"

#include "oracles/reactor_chain.hpp"

#include "crg/geometry/operations.hpp"
#include "crg/model/augment.hpp"
#include "crg/model/cascade.hpp"
#include "crg/model/checks.hpp"
#include "crg/model/controller.hpp"
#include "crg/model/io.hpp"
#include "crg/numerics/spectral.hpp"

namespace {

using crg::geometry::Polytope;
using crg::model::AugmentedSubsystem;
using crg::model::CascadeModel;
using crg::model::ClosedLoopCascade;
using crg::model::ClosedLoopSubsystem;
using crg::model::OpenLoopSubsystem;
using crg::model::TopologyReport;

using crg_test::reactor_chain;
using crg_test::reactor_stage;

// Scalar single-integrator-augmented stage for hand-checkable synthesis.
OpenLoopSubsystem scalar_stage(double a, double b) {
  OpenLoopSubsystem sub;
  sub.A = Eigen::MatrixXd::Constant(1, 1, a);
  sub.B = Eigen::MatrixXd::Constant(1, 1, b);
  sub.C = Eigen::MatrixXd::Identity(1, 1);
  sub.E = Eigen::MatrixXd::Identity(1, 1);
  sub.X = crg::geometry::box(Eigen::VectorXd::Constant(1, -10.0),
                             Eigen::VectorXd::Constant(1, 10.0));
  sub.U = crg::geometry::box(Eigen::VectorXd::Constant(1, -10.0),
                             Eigen::VectorXd::Constant(1, 10.0));
  sub.W = crg::geometry::box(Eigen::VectorXd::Constant(1, -0.1),
                             Eigen::VectorXd::Constant(1, 0.1));
  return sub;
}

// Independent fixed-point iteration for the discrete-time Riccati equation,
// written directly from the definition as a test oracle.
Eigen::MatrixXd value_iteration_gain(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                                     const Eigen::MatrixXd& Q, const Eigen::MatrixXd& R) {
  Eigen::MatrixXd P = Q;
  for (int iter = 0; iter < 200000; ++iter) {
    const Eigen::MatrixXd BtP = B.transpose() * P;
    const Eigen::MatrixXd gain_denominator = R + BtP * B;
    const Eigen::MatrixXd next =
        A.transpose() * P * A -
        A.transpose() * P * B * gain_denominator.inverse() * BtP * A + Q;
    const double delta = (next - P).cwiseAbs().maxCoeff();
    P = next;
    if (delta < 1e-14 * (1.0 + P.cwiseAbs().maxCoeff())) break;
  }
  return (R + B.transpose() * P * B).inverse() * B.transpose() * P * A;
}

bool report_mentions(const TopologyReport& report, const std::string& fragment) {
  for (const std::string& v : report.violations)
    if (v.find(fragment) != std::string::npos) return true;
  return false;
}

}  // namespace

TEST_CASE("topology: single subsystem and linear chain validate cleanly") {
  CascadeModel single = reactor_chain(1);
  TopologyReport r1 = crg::model::validate_topology(single);
  CHECK(r1.ok);
  CHECK(r1.violations.empty());
  CHECK(single.topology.count == 1);
  CHECK(single.topology.inlets[0].empty());
  CHECK(single.topology.outlets[0].empty());

  CascadeModel chain = reactor_chain(3);
  TopologyReport r3 = crg::model::validate_topology(chain);
  CHECK(r3.ok);
  CHECK(chain.topology.inlets[1] == std::vector<int>{0});
  CHECK(chain.topology.inlets[2] == std::vector<int>{1});
  CHECK(chain.topology.outlets[0] == std::vector<int>{1});
  CHECK(chain.topology.outlets[1] == std::vector<int>{2});
  CHECK(chain.topology.outlets[2].empty());
}

TEST_CASE("topology: four-node layered graph derives the expected neighbor sets") {
  // Edges 0->1, 0->2, 1->2, 1->3, 2->3.
  std::vector<OpenLoopSubsystem> subs;
  subs.push_back(reactor_stage(false, 0));
  subs.push_back(reactor_stage(true, 0));
  OpenLoopSubsystem third = reactor_stage(true, 0);
  third.A_in.emplace(1, 0.1 * Eigen::MatrixXd::Identity(2, 2));
  subs.push_back(third);
  OpenLoopSubsystem fourth = reactor_stage(true, 1);
  fourth.A_in.emplace(2, 0.1 * Eigen::MatrixXd::Identity(2, 2));
  subs.push_back(fourth);

  CascadeModel model = crg::model::make_cascade_model(std::move(subs));
  TopologyReport report = crg::model::validate_topology(model);
  CHECK(report.ok);
  CHECK(model.topology.inlets[2] == std::vector<int>({0, 1}));
  CHECK(model.topology.outlets[1] == std::vector<int>({2, 3}));
  CHECK(model.topology.inlets[3] == std::vector<int>({1, 2}));
  CHECK(model.topology.outlets[0] == std::vector<int>({1, 2}));
}

TEST_CASE("topology: ordering breaches and inconsistencies are reported, not thrown") {
  // Self-loop style breach: subsystem 0 claims an inlet from subsystem 1.
  std::vector<OpenLoopSubsystem> subs;
  OpenLoopSubsystem first = reactor_stage(true, 1);
  subs.push_back(first);
  subs.push_back(reactor_stage(false, 0));
  CascadeModel model = crg::model::make_cascade_model(std::move(subs));
  TopologyReport report = crg::model::validate_topology(model);
  CHECK_FALSE(report.ok);
  CHECK(report_mentions(report, "lower-triangular"));

  // Dangling neighbor index.
  std::vector<OpenLoopSubsystem> subs2;
  subs2.push_back(reactor_stage(false, 0));
  OpenLoopSubsystem second = reactor_stage(true, 7);
  subs2.push_back(second);
  CascadeModel model2 = crg::model::make_cascade_model(std::move(subs2));
  TopologyReport report2 = crg::model::validate_topology(model2);
  CHECK_FALSE(report2.ok);
  CHECK(report_mentions(report2, "does not exist"));

  // Coupling width mismatch.
  std::vector<OpenLoopSubsystem> subs3;
  subs3.push_back(reactor_stage(false, 0));
  OpenLoopSubsystem wide = reactor_stage(false, 0);
  wide.A_in.emplace(0, Eigen::MatrixXd::Identity(2, 3));
  subs3.push_back(wide);
  CascadeModel model3 = crg::model::make_cascade_model(std::move(subs3));
  TopologyReport report3 = crg::model::validate_topology(model3);
  CHECK_FALSE(report3.ok);
  CHECK(report_mentions(report3, "column count"));

  // Hand-edited topology that contradicts the couplings.
  CascadeModel model4 = reactor_chain(2);
  model4.topology.outlets[0].clear();
  TopologyReport report4 = crg::model::validate_topology(model4);
  CHECK_FALSE(report4.ok);
  CHECK(report_mentions(report4, "outlet listing"));
}

TEST_CASE("topology: constraint sets must contain the origin") {
  OpenLoopSubsystem sub = reactor_stage(false, 0);
  sub.U = crg::geometry::box(Eigen::VectorXd::Constant(1, 1.0),
                             Eigen::VectorXd::Constant(1, 3.0));
  CascadeModel model = crg::model::make_cascade_model({sub});
  TopologyReport report = crg::model::validate_topology(model);
  CHECK_FALSE(report.ok);
  CHECK(report_mentions(report, "origin"));
}

TEST_CASE("augmentation: reactor stage produces the documented block structure") {
  AugmentedSubsystem aug = crg::model::augment_with_integrator(reactor_stage(true, 0));
  REQUIRE(aug.n_z() == 3);
  CHECK(aug.Phi_bar(0, 0) == doctest::Approx(0.54271));
  CHECK(aug.Phi_bar(0, 1) == doctest::Approx(-3.0e-4));
  CHECK(aug.Phi_bar(0, 2) == 0.0);
  CHECK(aug.Phi_bar(1, 0) == doctest::Approx(0.73488));
  CHECK(aug.Phi_bar(1, 1) == doctest::Approx(0.19196));
  CHECK(aug.Phi_bar(1, 2) == 0.0);
  // Integrator row: x_a⁺ = x_a - y, i.e. [-C, 1] = [0, -1, 1].
  CHECK(aug.Phi_bar(2, 0) == 0.0);
  CHECK(aug.Phi_bar(2, 1) == -1.0);
  CHECK(aug.Phi_bar(2, 2) == 1.0);

  CHECK(aug.Gamma(0, 0) == doctest::Approx(-3.0e-4));
  CHECK(aug.Gamma(1, 0) == doctest::Approx(0.6152));
  CHECK(aug.Gamma(2, 0) == 0.0);

  CHECK(aug.Upsilon.rows() == 1);
  CHECK(aug.Upsilon(0, 0) == 0.0);
  CHECK(aug.Upsilon(0, 1) == 1.0);
  CHECK(aug.Upsilon(0, 2) == 0.0);

  CHECK(aug.Omega.rows() == 3);
  CHECK((aug.Omega.topRows(2) - Eigen::MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff() == 0.0);
  CHECK(aug.Omega.row(2).cwiseAbs().maxCoeff() == 0.0);

  REQUIRE(aug.Phi_in.count(0) == 1);
  const Eigen::MatrixXd& coupling = aug.Phi_in.at(0);
  REQUIRE(coupling.rows() == 3);
  REQUIRE(coupling.cols() == 2);
  CHECK((coupling.topRows(2) - 0.2 * Eigen::MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff() ==
        0.0);
  CHECK(coupling.row(2).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("augmentation: degenerate scalar plant keeps the integrator row intact") {
  OpenLoopSubsystem sub = scalar_stage(0.0, 0.0);
  AugmentedSubsystem aug = crg::model::augment_with_integrator(sub);
  Eigen::MatrixXd expected(2, 2);
  expected << 0.0, 0.0, -1.0, 1.0;
  CHECK((aug.Phi_bar - expected).cwiseAbs().maxCoeff() == 0.0);
  CHECK(aug.Gamma.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("augmentation: rank-deficient output map is rejected") {
  OpenLoopSubsystem sub = reactor_stage(false, 0);
  sub.C = Eigen::MatrixXd(2, 2);
  sub.C << 1.0, 0.0, 1.0, 0.0;
  CHECK_THROWS_WITH_AS(crg::model::augment_with_integrator(sub),
                       doctest::Contains("full row rank"), std::runtime_error);
}

TEST_CASE("pad_coupling_columns appends zeros for the integrator part") {
  Eigen::MatrixXd block(3, 2);
  block << 1.0, 2.0, 3.0, 4.0, 5.0, 6.0;
  Eigen::MatrixXd padded = crg::model::pad_coupling_columns(block, 3);
  REQUIRE(padded.cols() == 3);
  CHECK((padded.leftCols(2) - block).cwiseAbs().maxCoeff() == 0.0);
  CHECK(padded.col(2).cwiseAbs().maxCoeff() == 0.0);
  CHECK_THROWS_AS(crg::model::pad_coupling_columns(block, 1), std::runtime_error);
}

TEST_CASE("synthesis: gain matches an independent Riccati iteration") {
  AugmentedSubsystem aug = crg::model::augment_with_integrator(scalar_stage(0.7, 0.5));
  const Eigen::MatrixXd Q = Eigen::MatrixXd::Identity(2, 2);
  const Eigen::MatrixXd R = Eigen::MatrixXd::Identity(1, 1);
  const Eigen::MatrixXd K = crg::model::synthesize_controller(aug, Q, R);
  const Eigen::MatrixXd K_oracle = value_iteration_gain(aug.Phi_bar, aug.Gamma, Q, R);
  CHECK((K - K_oracle).cwiseAbs().maxCoeff() < 1e-8);

  AugmentedSubsystem reactor = crg::model::augment_with_integrator(reactor_stage(false, 0));
  const Eigen::MatrixXd Q3 = Eigen::MatrixXd::Identity(3, 3);
  const Eigen::MatrixXd K3 = crg::model::synthesize_controller(reactor, Q3, R);
  const Eigen::MatrixXd K3_oracle = value_iteration_gain(reactor.Phi_bar, reactor.Gamma, Q3, R);
  CHECK((K3 - K3_oracle).cwiseAbs().maxCoeff() < 1e-7);
}

TEST_CASE("synthesis: expensive input shrinks the gain") {
  AugmentedSubsystem aug = crg::model::augment_with_integrator(reactor_stage(false, 0));
  const Eigen::MatrixXd Q = Eigen::MatrixXd::Identity(3, 3);
  const Eigen::MatrixXd K_cheap =
      crg::model::synthesize_controller(aug, Q, Eigen::MatrixXd::Identity(1, 1));
  const Eigen::MatrixXd K_dear =
      crg::model::synthesize_controller(aug, Q, 1e6 * Eigen::MatrixXd::Identity(1, 1));
  CHECK(K_dear.norm() < 0.1 * K_cheap.norm());
}

TEST_CASE("closed loop: structure, stability, and exact steady-state gains") {
  OpenLoopSubsystem sub = reactor_stage(true, 0);
  AugmentedSubsystem aug = crg::model::augment_with_integrator(sub);
  const Eigen::MatrixXd K = crg::model::synthesize_controller(
      aug, Eigen::MatrixXd::Identity(3, 3), Eigen::MatrixXd::Identity(1, 1));
  ClosedLoopSubsystem cl = crg::model::close_loop(aug, K, sub.X, sub.U);

  CHECK((cl.Phi - (aug.Phi_bar - aug.Gamma * K)).cwiseAbs().maxCoeff() == 0.0);
  CHECK(crg::numerics::spectral_radius(cl.Phi) < 1.0);

  // Reference channel drives only the integrator row.
  REQUIRE(cl.Gamma.rows() == 3);
  CHECK(cl.Gamma(0, 0) == 0.0);
  CHECK(cl.Gamma(1, 0) == 0.0);
  CHECK(cl.Gamma(2, 0) == 1.0);

  // H stacks the plant state over u = -K z.
  REQUIRE(cl.H.rows() == 3);
  CHECK((cl.H.topLeftCorner(2, 2) - Eigen::MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff() ==
        0.0);
  CHECK(cl.H.topRightCorner(2, 1).cwiseAbs().maxCoeff() == 0.0);
  CHECK((cl.H.bottomRows(1) + K).cwiseAbs().maxCoeff() == 0.0);

  // XU is the product of the state set and the input interval.  The
  // concentration deviation is unconstrained, so XU is a slab: points far
  // out along the first axis remain feasible while the temperature and
  // input bounds still bite.
  CHECK(cl.XU.dim() == 3);
  Eigen::VectorXd corner(3);
  corner << 100.0, 5.0, 3.0;
  CHECK(crg::geometry::contains(cl.XU, corner, 1e-12));
  corner(2) = 3.1;
  CHECK_FALSE(crg::geometry::contains(cl.XU, corner, 1e-12));
  corner(2) = 3.0;
  corner(1) = 5.1;
  CHECK_FALSE(crg::geometry::contains(cl.XU, corner, 1e-12));

  // Steady state of a unit reference: output settles at exactly one, the
  // constrained variables H z are finite and consistent with u = -K z.
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(3, 3);
  const Eigen::VectorXd z_ss = (I - cl.Phi).lu().solve(cl.Gamma.col(0));
  CHECK(std::abs((cl.Upsilon * z_ss)(0) - 1.0) < 1e-12);
  const Eigen::VectorXd c_ss = cl.H * z_ss;
  REQUIRE(c_ss.size() == 3);
  CHECK(std::isfinite(c_ss(0)));
  CHECK(std::isfinite(c_ss(1)));
  CHECK(c_ss(1) == doctest::Approx(1.0));  // output channel is the second state
  CHECK(std::abs(c_ss(2) - (-K * z_ss)(0)) < 1e-14);
  // The plant rows are in equilibrium under that input.
  const Eigen::VectorXd x_ss = z_ss.head(2);
  const Eigen::VectorXd residual =
      sub.A * x_ss + sub.B * Eigen::VectorXd::Constant(1, c_ss(2)) - x_ss;
  CHECK(residual.cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("closed loop: zero gain reproduces the open augmentation") {
  OpenLoopSubsystem sub = reactor_stage(false, 0);
  AugmentedSubsystem aug = crg::model::augment_with_integrator(sub);
  const Eigen::MatrixXd K0 = Eigen::MatrixXd::Zero(1, 3);
  ClosedLoopSubsystem cl = crg::model::close_loop(aug, K0, sub.X, sub.U);
  CHECK((cl.Phi - aug.Phi_bar).cwiseAbs().maxCoeff() == 0.0);
  CHECK(cl.H.bottomRows(1).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("cascade synthesis: every reactor loop passes the structural checks") {
  ClosedLoopCascade cascade = crg::model::synthesize_cascade(reactor_chain(3));
  REQUIRE(cascade.count() == 3);
  for (int i = 0; i < 3; ++i) {
    const ClosedLoopSubsystem& cl = cascade.loops[i];
    crg::model::StructuralCheckReport report = crg::model::check_structural_properties(cl);
    CHECK(report.all_pass);
    for (const auto& item : report.items) {
      INFO("subsystem ", i, " item ", item.name);
      CHECK(item.pass);
      if (item.name != "schur") CHECK(item.residual < 1e-10);
    }
  }
  // Couplings survive the pass-through untouched.
  REQUIRE(cascade.loops[1].Phi_in.count(0) == 1);
  CHECK((cascade.loops[1].Phi_in.at(0).topRows(2) - 0.2 * Eigen::MatrixXd::Identity(2, 2))
            .cwiseAbs()
            .maxCoeff() == 0.0);
}

TEST_CASE("structural checks: unstable loop fails the spectral item") {
  ClosedLoopSubsystem cl;
  cl.n_x = 1;
  cl.n_y = 1;
  cl.n_u = 1;
  cl.Phi = Eigen::MatrixXd::Identity(2, 2);
  cl.Gamma = Eigen::MatrixXd::Zero(2, 1);
  cl.Gamma(1, 0) = 1.0;
  cl.Upsilon = Eigen::MatrixXd::Zero(1, 2);
  cl.Upsilon(0, 0) = 1.0;
  cl.Omega = Eigen::MatrixXd::Zero(2, 1);
  cl.H = Eigen::MatrixXd::Zero(2, 2);
  cl.K = Eigen::MatrixXd::Zero(1, 2);
  crg::model::StructuralCheckReport report = crg::model::check_structural_properties(cl);
  CHECK_FALSE(report.all_pass);
  REQUIRE_FALSE(report.items.empty());
  CHECK(report.items[0].name == "schur");
  CHECK_FALSE(report.items[0].pass);
  CHECK(report.items[0].residual == doctest::Approx(1.0));
}

TEST_CASE("structural checks: coupling leaking into the output is flagged") {
  ClosedLoopSubsystem cl;
  cl.n_x = 1;
  cl.n_y = 1;
  cl.n_u = 1;
  cl.Phi = 0.5 * Eigen::MatrixXd::Identity(2, 2);
  cl.Gamma = Eigen::MatrixXd::Zero(2, 1);
  cl.Gamma(0, 0) = 0.5;  // makes the steady-state gain exactly one
  cl.Upsilon = Eigen::MatrixXd::Zero(1, 2);
  cl.Upsilon(0, 0) = 1.0;
  cl.Omega = Eigen::MatrixXd::Zero(2, 1);
  cl.H = Eigen::MatrixXd::Zero(2, 2);
  cl.K = Eigen::MatrixXd::Zero(1, 2);
  Eigen::MatrixXd leak(2, 1);
  leak << 1.0, 1.0;
  cl.Phi_in.emplace(0, leak);

  crg::model::StructuralCheckReport report = crg::model::check_structural_properties(cl);
  CHECK_FALSE(report.all_pass);
  bool dc_ok = false;
  bool leak_flagged = false;
  for (const auto& item : report.items) {
    if (item.name == "dc_gain_identity") dc_ok = item.pass;
    if (item.name == "coupling_rejection[0]") {
      leak_flagged = !item.pass;
      CHECK(item.residual == doctest::Approx(2.0));
    }
  }
  CHECK(dc_ok);
  CHECK(leak_flagged);
}

TEST_CASE("model files: round trip preserves the cascade exactly") {
  CascadeModel model = reactor_chain(3);
  nlohmann::json j = crg::model::cascade_model_to_json(model);
  CHECK(j["schema"] == "cascade-model/1");
  CascadeModel back = crg::model::cascade_model_from_json(j);
  REQUIRE(back.count() == 3);
  for (int i = 0; i < 3; ++i) {
    CHECK((back.subsystems[i].A - model.subsystems[i].A).cwiseAbs().maxCoeff() == 0.0);
    CHECK((back.subsystems[i].B - model.subsystems[i].B).cwiseAbs().maxCoeff() == 0.0);
    CHECK((back.subsystems[i].C - model.subsystems[i].C).cwiseAbs().maxCoeff() == 0.0);
    CHECK((back.subsystems[i].E - model.subsystems[i].E).cwiseAbs().maxCoeff() == 0.0);
    CHECK((back.subsystems[i].X.F - model.subsystems[i].X.F).cwiseAbs().maxCoeff() == 0.0);
    CHECK((back.subsystems[i].X.g - model.subsystems[i].X.g).cwiseAbs().maxCoeff() == 0.0);
    CHECK(back.topology.inlets[i] == model.topology.inlets[i]);
  }
  REQUIRE(back.subsystems[1].A_in.count(0) == 1);
  CHECK((back.subsystems[1].A_in.at(0) - model.subsystems[1].A_in.at(0))
            .cwiseAbs()
            .maxCoeff() == 0.0);

  // File round trip.
  const std::string path = "model_roundtrip_test.json";
  crg::model::save_cascade_model(path, model);
  CascadeModel loaded = crg::model::load_cascade_model(path);
  CHECK(loaded.count() == 3);
  CHECK((loaded.subsystems[2].A - model.subsystems[2].A).cwiseAbs().maxCoeff() == 0.0);
  std::remove(path.c_str());
}

TEST_CASE("model files: schema and consistency violations are rejected") {
  CascadeModel model = reactor_chain(2);
  nlohmann::json j = crg::model::cascade_model_to_json(model);

  nlohmann::json wrong_schema = j;
  wrong_schema["schema"] = "something-else/9";
  CHECK_THROWS_WITH_AS(crg::model::cascade_model_from_json(wrong_schema),
                       doctest::Contains("schema"), std::runtime_error);

  nlohmann::json no_subs = j;
  no_subs.erase("subsystems");
  CHECK_THROWS_AS(crg::model::cascade_model_from_json(no_subs), std::runtime_error);

  // An upward coupling in the file surfaces the validation report.
  nlohmann::json upward = j;
  upward["subsystems"][0]["coupling"]["1"] = {{0.1, 0.0}, {0.0, 0.1}};
  CHECK_THROWS_WITH_AS(crg::model::cascade_model_from_json(upward),
                       doctest::Contains("lower-triangular"), std::runtime_error);

  nlohmann::json bad_key = j;
  bad_key["subsystems"][1]["coupling"]["zero"] = {{0.1, 0.0}, {0.0, 0.1}};
  CHECK_THROWS_WITH_AS(crg::model::cascade_model_from_json(bad_key),
                       doctest::Contains("not a subsystem index"), std::runtime_error);

  nlohmann::json ragged = j;
  ragged["subsystems"][0]["A"] = {{1.0, 0.0}, {0.0}};
  CHECK_THROWS_WITH_AS(crg::model::cascade_model_from_json(ragged),
                       doctest::Contains("ragged"), std::runtime_error);
}
