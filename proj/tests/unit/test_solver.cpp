#include <cmath>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "movingflow/config.hpp"
#include "movingflow/errors.hpp"
#include "movingflow/random.hpp"
#include "movingflow/solver.hpp"
#include "support.hpp"

using namespace mf;

TEST(Solver, PartitionTime) {
  const MovingDomain d{{0.0, 1.0}, {VelocityField::zero(), 1e-3}};
  const auto g = partition_time(1.0, 4, d);
  ASSERT_EQ(g.times.size(), 5u);
  for (int j = 0; j <= 4; ++j) EXPECT_DOUBLE_EQ(g.times[j], 0.25 * j);
  EXPECT_DOUBLE_EQ(g.Delta, 0.25);
  EXPECT_EQ(partition_time(1.0, 1, d).slices(), 1);
  EXPECT_THROW(partition_time(1.0, 0, d), ParameterError);
}

TEST(Solver, TridiagonalAgainstDense) {
  Rng rng(3);
  for (int n : {1, 2, 3, 7, 40}) {
    Eigen::VectorXd sub(n), diag(n), sup(n), rhs(n);
    for (int i = 0; i < n; ++i) {
      sub[i] = rng.uniform(-1, 1);
      diag[i] = rng.uniform(-1, 1);
      sup[i] = rng.uniform(-1, 1);
      rhs[i] = rng.uniform(-1, 1);
    }
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
      A(i, i) = diag[i];
      if (i > 0) A(i, i - 1) = sub[i];
      if (i + 1 < n) A(i, i + 1) = sup[i];
    }
    const Eigen::VectorXd x = solve_tridiagonal(sub, diag, sup, rhs);
    EXPECT_LT((A * x - rhs).norm(), 1e-9 * (1.0 + x.norm()));
  }
}

TEST(Solver, ZeroFixedPoint) {
  const Mesh m = build_mesh({0.0, 1.0}, 0.1);
  const auto law = DiffusionLaw::p_laplace(2.0, 2.0, 0.0, 1.0, 1e-6);
  const auto nl = Nonlinearity::none();
  const auto v = VelocityField::zero();
  const SpaceTimeFn f = [](double, double) { return 0.0; };
  const Field u = implicit_step(m, zero_field(m, 0.0), 0.1, 0.1, law, nl, v, f, 0.1, SolverConfig{});
  EXPECT_DOUBLE_EQ(u.values.cwiseAbs().maxCoeff(), 0.0);
}

TEST(Solver, ZeroDataRunIsZero) {
  for (const char* handoff : {"characteristic", "restrict", "literal"}) {
    auto j = mf::testing::zero_config();
    j["discretization"]["handoff"] = handoff;
    const RunResult r = mf::testing::run_of(j, 0.1);
    for (const auto& s : r.solution.slices)
      for (const auto& f : s.steps) EXPECT_DOUBLE_EQ(f.values.cwiseAbs().maxCoeff(), 0.0);
    EXPECT_TRUE(lmax_bound_check(r).pass);
  }
}

TEST(Solver, IdentityFlowGluesExactly) {
  auto j = mf::testing::zero_config();
  j["problem"]["velocity"] = {{"preset", "zero"}};
  j["problem"]["data"]["u0"] = {{"preset", "sine"}, {"amplitude", 1.0}};
  const RunResult r = mf::testing::run_of(j, 0.1);
  ASSERT_EQ(r.solution.slices.size(), 2u);
  const Field& last = r.solution.slices[0].steps.back();
  const Field& first = r.solution.slices[1].steps.front();
  for (Eigen::Index i = 0; i < last.values.size(); ++i) EXPECT_DOUBLE_EQ(last.values[i], first.values[i]);
}

TEST(Solver, L1NormDecaysWithoutSources) {
  auto j = mf::testing::zero_config();
  j["problem"]["velocity"] = {{"preset", "zero"}};
  j["problem"]["data"]["u0"] = {{"preset", "sine"}, {"amplitude", 2.0}};
  const RunResult r = mf::testing::run_of(j, 0.1);
  double last = 1e300;
  for (const auto& s : r.solution.slices)
    for (const auto& f : s.steps) {
      const double n = lp_norm(f, 1.0);
      EXPECT_LE(n, last + 1e-8);
      last = n;
    }
}

TEST(Solver, NewtonConvergesOnPLaplace) {
  nlohmann::json j = builtin_l1_config();
  j["problem"]["T"] = 0.05;
  j["discretization"]["N"] = 2;
  const RunResult r = mf::testing::run_of(j, 1e-3);
  ASSERT_FALSE(r.newton_residuals.empty());
  for (std::size_t i = 0; i < r.newton_residuals.size(); ++i)
    EXPECT_LE(r.newton_residuals[i], r.newton_tolerances[i]);
}

TEST(Solver, NonconvergenceCarriesHistory) {
  nlohmann::json j = builtin_l1_config();
  j["problem"]["T"] = 0.01;
  j["discretization"]["N"] = 1;
  j["discretization"]["newton_max_iter"] = 1;
  j["discretization"]["newton_tol"] = 1e-300;
  try {
    mf::testing::run_of(j, 1e-3);
    FAIL() << "expected nonconvergence";
  } catch (const NonconvergenceError& e) {
    EXPECT_FALSE(e.residual_history.empty());
    EXPECT_EQ(e.slice, 0);
  }
}

// N and 2N slices on the drift problem differ by O(Delta)
TEST(Solver, SliceRefinementConsistency) {
  std::vector<double> deltas, diffs;
  RunResult ref = execute(parse_config(builtin_mms_config(1.0 / 32, 1.0 / 160, 0.5)), 1e-12);
  for (int N : {5, 10, 20}) {
    auto j = builtin_mms_config(1.0 / 32, 1.0 / 160, 0.5);
    j["discretization"]["N"] = N;
    const RunResult r = execute(parse_config(j), 1e-12);
    double acc = 0.0;
    for_each_point(r.solution, [&](const QuadPoint& q) {
      const double t = q.t;
      // reference value at the same point, found by slice lookup
      for (const auto& s : ref.solution.slices) {
        if (t < s.t_begin - 1e-12 || t > s.t_end + 1e-12) continue;
        for (const auto& f : s.steps)
          if (std::abs(f.time - t) < 1e-12) {
            const Interval iv = f.mesh.interval();
            const double u = (q.x < iv.left || q.x > iv.right) ? 0.0 : f.eval(q.x);
            acc += q.weight * std::abs(q.u - u);
            return;
          }
      }
    });
    deltas.push_back(0.5 / N);
    diffs.push_back(acc);
  }
  const double order = std::log(diffs[0] / diffs[2]) / std::log(deltas[0] / deltas[2]);
  EXPECT_GE(order, 0.8) << diffs[0] << " " << diffs[1] << " " << diffs[2];
}
