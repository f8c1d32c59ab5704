#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include "movingflow/errors.hpp"
#include "movingflow/flowmap.hpp"

using namespace mf;

namespace {
FlowMap flow_of(VelocityField v) { return FlowMap{std::move(v), 1e-3}; }
}  // namespace

TEST(Flowmap, ForwardExamples) {
  EXPECT_DOUBLE_EQ(forward(flow_of(VelocityField::zero()), 0.3, 0.0, 1.0), 0.3);
  EXPECT_NEAR(forward(flow_of(VelocityField::constant(0.5)), 0.0, 0.0, 2.0), 1.0, 1e-12);
  EXPECT_NEAR(forward(flow_of(VelocityField::linear(1.0, 0.0, 3.0)), 1.0, 0.0, 1.0), std::exp(1.0), 1e-8);
}

TEST(Flowmap, InverseExamples) {
  EXPECT_DOUBLE_EQ(inverse(flow_of(VelocityField::zero()), 0.42, 0.0, 1.0), 0.42);
  EXPECT_NEAR(inverse(flow_of(VelocityField::linear(1.0, 0.0, 3.0)), std::exp(1.0), 0.0, 1.0), 1.0, 1e-7);
}

TEST(Flowmap, RoundTripOnBump) {
  const FlowMap f = flow_of(VelocityField::compact_bump(0.4, 0.5, 0.4));
  for (double x : {0.1, 0.35, 0.5, 0.62, 0.9}) {
    EXPECT_NEAR(inverse(f, forward(f, x, 0.1, 0.7), 0.1, 0.7), x, 1e-12);
    // semigroup
    EXPECT_NEAR(forward(f, forward(f, x, 0.0, 0.3), 0.3, 0.8), forward(f, x, 0.0, 0.8), 1e-12);
  }
}

TEST(Flowmap, JacobianExamples) {
  EXPECT_DOUBLE_EQ(jacobian_det(flow_of(VelocityField::zero()), 0.5, 1.0), 1.0);
  EXPECT_NEAR(jacobian_det(flow_of(VelocityField::linear(1.0, -5.0, 5.0)), 0.3, 1.0), std::exp(1.0), 1e-8);
  EXPECT_NEAR(jacobian_det(flow_of(VelocityField::linear(-1.0, -5.0, 5.0)), 0.3, std::log(2.0)), 0.5, 1e-8);
}

TEST(Flowmap, JacobianMatchesFiniteDifference) {
  const FlowMap f = flow_of(VelocityField::compact_bump(0.4, 0.5, 0.4));
  for (double x : {0.3, 0.45, 0.6}) {
    const double d = 1e-6;
    const double fd = (forward(f, x + d, 0.0, 0.5) - forward(f, x - d, 0.0, 0.5)) / (2 * d);
    EXPECT_NEAR(jacobian_det(f, x, 0.5), fd, 1e-7);
  }
}

TEST(Flowmap, JacobianBounds) {
  const MovingDomain still{{0.0, 1.0}, flow_of(VelocityField::zero())};
  auto [a0, b0] = jacobian_bounds(still.flow, still, 1.0, 16);
  EXPECT_DOUBLE_EQ(a0, 1.0);
  EXPECT_DOUBLE_EQ(b0, 1.0);

  const MovingDomain grow{{0.0, 1.0}, flow_of(VelocityField::linear(1.0, 0.0, 3.0))};
  auto [a1, b1] = jacobian_bounds(grow.flow, grow, 1.0, 16);
  EXPECT_NEAR(a1, 1.0, 1e-6);
  EXPECT_NEAR(b1, std::exp(1.0), 1e-6);

  const MovingDomain bump{{0.0, 1.0}, flow_of(VelocityField::compact_bump(0.5, 0.5, 0.4))};
  auto [a2, b2] = jacobian_bounds(bump.flow, bump, 0.5, 64);
  EXPECT_LE(a2, 1.0);
  EXPECT_GE(b2, 1.0);
  // brute-force sampling never leaves [a, b]
  for (int i = 0; i <= 40; ++i)
    for (int k = 0; k <= 10; ++k) {
      const double J = jacobian_det(bump.flow, i / 40.0, 0.05 * k);
      EXPECT_GE(J, a2 - 1e-12);
      EXPECT_LE(J, b2 + 1e-12);
    }
}

TEST(Flowmap, DomainAt) {
  const MovingDomain still{{0.0, 1.0}, flow_of(VelocityField::zero())};
  EXPECT_DOUBLE_EQ(domain_at(still, 5.0).left, 0.0);
  EXPECT_DOUBLE_EQ(domain_at(still, 5.0).right, 1.0);

  const MovingDomain drift{{0.0, 1.0}, flow_of(VelocityField::constant(0.2))};
  EXPECT_NEAR(domain_at(drift, 1.0).left, 0.2, 1e-12);
  EXPECT_NEAR(domain_at(drift, 1.0).right, 1.2, 1e-12);

  const MovingDomain grow{{1.0, 2.0}, flow_of(VelocityField::linear(1.0, 0.0, 5.0))};
  EXPECT_NEAR(domain_at(grow, std::log(2.0)).left, 2.0, 1e-7);
  EXPECT_NEAR(domain_at(grow, std::log(2.0)).right, 4.0, 1e-7);
}

TEST(Flowmap, NonFiniteVelocityNamesPoint) {
  VelocityField bad = VelocityField::zero();
  bad.eval = [](double, double) { return std::numeric_limits<double>::quiet_NaN(); };
  try {
    forward(flow_of(bad), 0.25, 0.0, 1.0);
    FAIL() << "expected an evaluation error";
  } catch (const EvaluationError& e) {
    EXPECT_DOUBLE_EQ(e.x, 0.25);
  }
}
