// Copyright 2026 The fmppi Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <limits>
#include <random>

#include <gtest/gtest.h>

#include "fmppi/gradient.h"
#include "fmppi/lqr.h"
#include "test_util.h"

namespace fmppi {
namespace {

using testing::CentralDifference;
using testing::RelativeError;
using testing::Vec;

GradientOptions Engine(GradientEngine engine) {
  GradientOptions options;
  options.engine = engine;
  return options;
}

const GradientOptions kTangent = Engine(GradientEngine::kTangent);
const GradientOptions kFiniteDiff = Engine(GradientEngine::kFiniteDifference);

TEST(GradientTest, DoubleIntegratorClosedForm) {
  const double dt = 0.05;
  const int n = 20;
  const Matrix a = DoubleIntegrator::A(dt), b = DoubleIntegrator::B(dt);
  const Matrix s = SolveDare({a, b, Matrix::Identity(2, 2),
                              Matrix::Identity(1, 1)}).s;
  const OcpProblem p = testing::DoubleIntegratorProblem(n, dt, &s);
  const auto policy = Parametrization::ZeroOrder(1, n, dt);

  std::mt19937_64 rng(1);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 20; ++trial) {
    Vector theta(n);
    for (int i = 0; i < n; ++i) theta[i] = normal(rng);
    const Vector x0 = Vec({normal(rng), normal(rng)});
    // dJ/dx0 = sum_i 2 x_i' Q A^i + 2 x_N' S A^N with Q = I
    RowVector expected = RowVector::Zero(2);
    Vector x = x0;
    Matrix power = Matrix::Identity(2, 2);
    for (int i = 0; i < n; ++i) {
      expected += 2.0 * x.transpose() * power;
      x = a * x + b * theta.segment(i, 1);
      power = a * power;
    }
    expected += 2.0 * x.transpose() * s * power;

    const RowVector tangent = RolloutCostGradient(p, policy, theta, x0);
    EXPECT_LT(RelativeError(tangent, expected), 1e-12) << "trial " << trial;
    const RowVector fd = CentralDifference(p, policy, theta, x0);
    EXPECT_LT(RelativeError(fd, expected), 1e-7) << "trial " << trial;
    const RowVector engine_fd =
        RolloutCostGradient(p, policy, theta, x0, kFiniteDiff);
    EXPECT_LT(RelativeError(engine_fd, expected), 1e-7) << "trial " << trial;
  }
}

TEST(GradientTest, PureInputCostHasZeroGradient) {
  auto model = std::make_shared<Quadrotor>();
  OcpProblem p;
  p.model = model;
  p.cost = std::make_shared<QuadraticCost>(
      Vector::Zero(13), Vector::Zero(13), Vector::Constant(4, 1e-2),
      Vector::Zero(13), model->HoverInput());
  p.horizon = 15;
  p.dt = 0.05;
  const auto policy = Parametrization::CubicSpline(4, 15, 0.05, 5);
  std::mt19937_64 rng(2);
  std::normal_distribution<double> normal(0.0, 5.0);
  Vector theta = policy.Constant(model->HoverInput());
  for (int i = 0; i < theta.size(); ++i) theta[i] += normal(rng);
  const Vector x0 = Quadrotor::HoverState(0.2, 0.1, 1.0);
  EXPECT_EQ(RolloutCostGradient(p, policy, theta, x0).cwiseAbs().maxCoeff(),
            0.0);
  EXPECT_EQ(RolloutCostGradient(p, policy, theta, x0, kFiniteDiff)
                .cwiseAbs()
                .maxCoeff(),
            0.0);
}

struct Case {
  Vector theta;
  Vector x0;
};

Case RandomQuadrotorCase(const Quadrotor& model, const Parametrization& policy,
                         std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Case c;
  c.theta = policy.Constant(model.HoverInput());
  for (int i = 0; i < c.theta.size(); ++i) c.theta[i] += 5.0 * normal(rng);
  c.x0 = Quadrotor::HoverState(normal(rng), normal(rng), 1.0 + normal(rng));
  for (int i = 3; i < 6; ++i) c.x0[i] = 0.5 * normal(rng);
  c.x0.segment(6, 4) = testing::RandomUnitQuaternion(rng, 0.2);
  for (int i = 10; i < 13; ++i) c.x0[i] = 0.5 * normal(rng);
  return c;
}

TEST(GradientTest, QuadrotorTangentMatchesFiniteDifferences) {
  const OcpProblem p = testing::QuadrotorProblem();
  const auto& model = static_cast<const Quadrotor&>(*p.model);
  const auto policy = Parametrization::CubicSpline(4, 15, 0.05, 5);
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    const Case c = RandomQuadrotorCase(model, policy, rng);
    const RowVector tangent = RolloutCostGradient(p, policy, c.theta, c.x0);
    const RowVector fd = CentralDifference(p, policy, c.theta, c.x0);
    EXPECT_LT(RelativeError(tangent, fd), 1e-5) << "trial " << trial;
    const RowVector engine_fd =
        RolloutCostGradient(p, policy, c.theta, c.x0, kFiniteDiff);
    EXPECT_LT(RelativeError(engine_fd, fd), 1e-12) << "trial " << trial;
  }
}

TEST(GradientTest, DoubleIntegratorTangentMatchesFiniteDifferences) {
  const OcpProblem p = testing::DoubleIntegratorProblem(30, 0.05);
  const auto policy = Parametrization::LinearSpline(1, 30, 0.05, 6);
  std::mt19937_64 rng(4);
  std::normal_distribution<double> normal(0.0, 2.0);
  for (int trial = 0; trial < 100; ++trial) {
    Vector theta(policy.dim());
    for (int i = 0; i < theta.size(); ++i) theta[i] = normal(rng);
    const Vector x0 = Vec({normal(rng), normal(rng)});
    const RowVector tangent = RolloutCostGradient(p, policy, theta, x0);
    const RowVector fd = CentralDifference(p, policy, theta, x0);
    EXPECT_LT(RelativeError(tangent, fd), 1e-5) << "trial " << trial;
  }
}

TEST(GradientTest, QuadrupedTangentMatchesFiniteDifferences) {
  const OcpProblem p = testing::QuadrupedProblem(testing::StandingParams());
  const auto policy = Parametrization::LinearSpline(12, 10, 0.02, 4);
  std::mt19937_64 rng(5);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 100; ++trial) {
    Vector theta(policy.dim());
    for (int i = 0; i < theta.size(); ++i) theta[i] = 3.0 * normal(rng);
    Vector x0(12);
    for (int i = 0; i < 12; ++i) x0[i] = 0.2 * normal(rng);
    x0[2] = 0.33 + 0.02 * normal(rng);
    const RowVector tangent = RolloutCostGradient(p, policy, theta, x0);
    const RowVector fd = CentralDifference(p, policy, theta, x0);
    EXPECT_LT(RelativeError(tangent, fd), 1e-5) << "trial " << trial;
  }
}

TEST(GradientTest, TrottingQuadrupedTangentMatchesFiniteDifferences) {
  const OcpProblem p = testing::QuadrupedProblem(QuadrupedParams{});
  const auto policy = Parametrization::LinearSpline(12, 10, 0.02, 4);
  std::mt19937_64 rng(6);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 20; ++trial) {
    OcpProblem shifted = p;
    shifted.start_time = 0.1 * trial;
    Vector theta(policy.dim());
    for (int i = 0; i < theta.size(); ++i) theta[i] = 3.0 * normal(rng);
    Vector x0(12);
    for (int i = 0; i < 12; ++i) x0[i] = 0.2 * normal(rng);
    x0[2] = 0.33;
    const RowVector tangent = RolloutCostGradient(shifted, policy, theta, x0);
    const RowVector fd = CentralDifference(shifted, policy, theta, x0);
    EXPECT_LT(RelativeError(tangent, fd), 1e-5) << "trial " << trial;
  }
}

TEST(GradientTest, IndicatorDoesNotChangeGradient) {
  OcpProblem with = testing::QuadrotorProblem();
  const auto& model = static_cast<const Quadrotor&>(*with.model);
  auto cost = testing::QuadrotorCost(model, Vec({1.0, 0.0, 1.5}));
  ObstacleField field;
  field.circles.push_back({0.3, 0.0, 0.1});
  field.inflation = 0.05;
  cost->set_obstacles(field, 1e6);
  with.cost = cost;
  OcpProblem without = testing::QuadrotorProblem();

  const auto policy = Parametrization::CubicSpline(4, 15, 0.05, 5);
  const Vector theta = policy.Constant(model.HoverInput());
  Vector x0 = Quadrotor::HoverState(0.0, 0.0, 1.0);
  x0[3] = 1.0;  // flies through the obstacle

  const Trajectory traj = Rollout(with, policy, theta, x0);
  int hits = 0;
  for (const Vector& x : traj.states) hits += cost->InCollision(AsSpan(x));
  ASSERT_GT(hits, 0);
  ASSERT_LT(hits, static_cast<int>(traj.states.size()));
  EXPECT_GE(traj.Total(), 1e6);

  for (const auto& options : {kTangent, kFiniteDiff}) {
    const RowVector a = RolloutCostGradient(with, policy, theta, x0, options);
    const RowVector b =
        RolloutCostGradient(without, policy, theta, x0, options);
    EXPECT_TRUE(testing::BitwiseEqual(a, b));
    EXPECT_GT(a.cwiseAbs().maxCoeff(), 0.0);
  }
}

TEST(GradientTest, ReturnedCostMatchesValueRollout) {
  const OcpProblem p = testing::QuadrotorProblem();
  const auto& model = static_cast<const Quadrotor&>(*p.model);
  const auto policy = Parametrization::CubicSpline(4, 15, 0.05, 5);
  std::mt19937_64 rng(7);
  RolloutWorkspace ws;
  for (int trial = 0; trial < 20; ++trial) {
    const Case c = RandomQuadrotorCase(model, policy, rng);
    RowVector grad(13);
    const double cost = RolloutCostAndGradient(
        p, policy, AsSpan(c.theta), AsSpan(c.x0), ws,
        {grad.data(), 13}, kTangent);
    EXPECT_EQ(cost, RolloutCost(p, policy, AsSpan(c.theta), AsSpan(c.x0), ws));
  }
}

TEST(GradientTest, DivergedRollout) {
  const OcpProblem p = testing::DoubleIntegratorProblem(4, 0.05);
  const auto policy = Parametrization::ZeroOrder(1, 4, 0.05);
  Vector theta = Vector::Zero(4);
  theta[1] = std::numeric_limits<double>::quiet_NaN();
  const Vector x0 = Vec({0.5, 0.0});
  RolloutWorkspace ws;
  RowVector grad = RowVector::Constant(2, 7.0);
  const double cost = RolloutCostAndGradient(p, policy, AsSpan(theta),
                                             AsSpan(x0), ws, {grad.data(), 2});
  EXPECT_TRUE(std::isinf(cost));
  EXPECT_EQ(grad.cwiseAbs().maxCoeff(), 0.0);
  EXPECT_THROW(RolloutCostGradient(p, policy, theta, x0), RolloutDivergedError);
}

TEST(GradientTest, EngineNames) {
  EXPECT_EQ(ParseGradientEngine("tangent"), GradientEngine::kTangent);
  EXPECT_EQ(ParseGradientEngine("finite-diff"),
            GradientEngine::kFiniteDifference);
  EXPECT_EQ(ToString(GradientEngine::kFiniteDifference), "finite-diff");
  EXPECT_THROW(ParseGradientEngine("adjoint"), ConfigurationError);
}

}  // namespace
}  // namespace fmppi
