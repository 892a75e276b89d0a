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

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "fmppi/gains.h"
#include "fmppi/gradient.h"
#include "fmppi/lqr.h"
#include "fmppi/solver.h"
#include "test_util.h"

namespace fmppi {
namespace {

using testing::BitwiseEqual;
using testing::Vec;

std::vector<double> RandomWeights(int k, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> cost(0.0, 5.0);
  std::vector<double> costs(k);
  for (double& c : costs) c = cost(rng);
  return ComputeWeights(costs, 1.0).weights;
}

Matrix RandomMatrix(int rows, int cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Matrix m(rows, cols);
  for (int i = 0; i < m.size(); ++i) m.data()[i] = normal(rng);
  return m;
}

TEST(GainsTest, EqualGradientsGiveZeroGain) {
  std::mt19937_64 rng(1);
  const auto policy = Parametrization::CubicSpline(2, 10, 0.05, 4);
  const std::vector<double> w = RandomWeights(40, rng);
  const RowVector g = RandomMatrix(1, 5, rng);
  const Matrix grads = g.replicate(40, 1);
  const Matrix d = RandomMatrix(policy.dim(), 40, rng);
  const Matrix f = AssembleGains(w, grads, d, policy, 0.5);
  EXPECT_EQ(f.rows(), 2);
  EXPECT_EQ(f.cols(), 5);
  EXPECT_LT(f.cwiseAbs().maxCoeff(), 1e-12);
}

TEST(GainsTest, GeneralMatchesDirectBitwise) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 50; ++trial) {
    const int nu = 1 + trial % 4, nx = 2 + trial % 11, k = 8 + trial;
    const auto policy = Parametrization::ZeroOrder(nu, 6, 0.05);
    std::vector<double> w = RandomWeights(k, rng);
    w[trial % k] = 0.0;
    const Matrix grads = RandomMatrix(k, nx, rng);
    const Matrix d = RandomMatrix(policy.dim(), k, rng);
    const double lambda = 0.1 + trial;
    EXPECT_TRUE(BitwiseEqual(AssembleGains(w, grads, d, policy, lambda),
                             AssembleGainsDirect(w, grads, d, nu, lambda)))
        << "trial " << trial;
  }
}

TEST(GainsTest, MatchesOuterProductOracle) {
  std::mt19937_64 rng(3);
  const auto policy = Parametrization::CubicSpline(3, 12, 0.05, 5);
  const int k = 30, nx = 7;
  const double lambda = 0.8;
  const std::vector<double> w = RandomWeights(k, rng);
  const Matrix grads = RandomMatrix(k, nx, rng);
  const Matrix d = RandomMatrix(policy.dim(), k, rng);

  const Matrix dpi = policy.DecodeJacobianTheta(0.0);
  RowVector g_bar = RowVector::Zero(nx);
  for (int j = 0; j < k; ++j) g_bar += w[j] * grads.row(j);
  Matrix expected = Matrix::Zero(3, nx);
  for (int j = 0; j < k; ++j) {
    expected -= (dpi * d.col(j)) * (w[j] / lambda) * (grads.row(j) - g_bar);
  }
  const Matrix f = AssembleGains(w, grads, d, policy, lambda);
  EXPECT_LT((f - expected).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(GainsTest, CenteringIdentity) {
  std::mt19937_64 rng(4);
  const int k = 200, nx = 6;
  const std::vector<double> w = RandomWeights(k, rng);
  const Matrix grads = 10.0 * RandomMatrix(k, nx, rng);
  RowVector g_bar = RowVector::Zero(nx);
  for (int j = 0; j < k; ++j) g_bar += w[j] * grads.row(j);
  RowVector centered = RowVector::Zero(nx);
  for (int j = 0; j < k; ++j) centered += w[j] * (grads.row(j) - g_bar);
  EXPECT_LT(centered.cwiseAbs().maxCoeff(), 1e-12);

  const auto policy = Parametrization::LinearSpline(2, 8, 0.05, 3);
  const Matrix d = RandomMatrix(policy.dim(), k, rng);
  const Matrix shifted = grads.rowwise() + RandomMatrix(1, nx, rng).row(0);
  const Matrix a = AssembleGains(w, grads, d, policy, 1.0);
  const Matrix b = AssembleGains(w, shifted, d, policy, 1.0);
  EXPECT_LT((a - b).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(GainsTest, ZeroWeightSamplesIgnored) {
  std::mt19937_64 rng(5);
  const auto policy = Parametrization::ZeroOrder(1, 4, 0.05);
  std::vector<double> w = {0.5, 0.0, 0.5};
  Matrix grads = RandomMatrix(3, 2, rng);
  const Matrix d = RandomMatrix(4, 3, rng);
  const Matrix a = AssembleGains(w, grads, d, policy, 1.0);
  grads.row(1).setConstant(std::numeric_limits<double>::infinity());
  EXPECT_TRUE(BitwiseEqual(a, AssembleGains(w, grads, d, policy, 1.0)));
}

struct Riccati {
  LqrProblem lqr;
  LqrSolution solution;
};

Riccati DoubleIntegratorRiccati(double dt) {
  Riccati r{{DoubleIntegrator::A(dt), DoubleIntegrator::B(dt),
             Matrix::Identity(2, 2), Matrix::Identity(1, 1)},
            {}};
  r.solution = SolveDare(r.lqr);
  return r;
}

// one-step problem with the Riccati cost-to-go as terminal cost
Matrix MppiGain(const Riccati& r, int samples, std::uint64_t seed) {
  const double dt = 0.05;
  const OcpProblem p =
      testing::DoubleIntegratorProblem(1, dt, &r.solution.s);
  const auto policy = Parametrization::ZeroOrder(1, 1, dt);
  SamplerConfig sampler;
  sampler.num_samples = samples;
  sampler.covariance = Vector::Constant(1, 10.0);
  sampler.lambda = 0.1;
  sampler.seed = seed;
  SolverOptions options;
  options.compute_gradients = true;
  MppiSolver solver(p, policy, sampler, options);
  const SolveOutput out = solver.Solve(Vector::Zero(1), Vec({0.5, 0.0}), 0.0);
  return AssembleGains(out, policy, sampler.lambda);
}

TEST(GainsTest, DoubleIntegratorGainApproachesRiccati) {
  const Riccati r = DoubleIntegratorRiccati(0.05);
  EXPECT_NEAR(r.solution.gain(0, 0), -0.958, 1e-3);
  EXPECT_NEAR(r.solution.gain(0, 1), -1.707, 1e-3);
  const Matrix f = MppiGain(r, 100000, 0);
  EXPECT_LT((f - r.solution.gain).norm(), 0.05) << f;
}

TEST(GainsTest, DoubleIntegratorGainIsStabilizing) {
  const Riccati r = DoubleIntegratorRiccati(0.05);
  for (int power = 6; power <= 16; ++power) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const Matrix f = MppiGain(r, 1 << power, seed);
      EXPECT_LT(SpectralRadius(r.lqr.a + r.lqr.b * f), 1.0)
          << "K=2^" << power << " seed " << seed;
    }
  }
}

double MedianError(const Riccati& r, int samples) {
  std::vector<double> errors;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    errors.push_back((MppiGain(r, samples, seed) - r.solution.gain).norm());
  }
  std::nth_element(errors.begin(), errors.begin() + 5, errors.end());
  const double upper = errors[5];
  const double lower = *std::max_element(errors.begin(), errors.begin() + 5);
  return 0.5 * (upper + lower);
}

TEST(GainsTest, ErrorShrinksWithSampleCount) {
  const Riccati r = DoubleIntegratorRiccati(0.05);
  EXPECT_LT(MedianError(r, 1 << 16), MedianError(r, 1 << 8));
}

TEST(GainsTest, IndicatorDoesNotChangeGain) {
  OcpProblem with = testing::QuadrotorProblem();
  const auto& model = static_cast<const Quadrotor&>(*with.model);
  auto cost = testing::QuadrotorCost(model, Vec({1.0, 0.0, 1.5}));
  ObstacleField field;
  field.circles.push_back({0.35, 0.0, 0.1});
  cost->set_obstacles(field, 1e6);
  with.cost = cost;
  const OcpProblem without = testing::QuadrotorProblem();
  const auto policy = Parametrization::CubicSpline(4, 15, 0.05, 5);
  SamplerConfig sampler;
  sampler.num_samples = 200;
  sampler.covariance = Vector::Constant(policy.dim(), 25.0);
  sampler.lambda = 1.0;
  SolverOptions options;
  options.compute_gradients = true;
  Vector x0 = Quadrotor::HoverState(0.0, 0.0, 1.0);
  x0[3] = 1.0;
  const SolveOutput out = MppiSolver(with, policy, sampler, options)
                              .Solve(policy.Constant(model.HoverInput()), x0,
                                     0.0, 0);
  int colliding = 0;
  for (double c : out.costs) colliding += c >= 1e6;
  ASSERT_GT(colliding, 0);

  // same weights and draws, gradients from the problem without indicator
  Matrix grads(200, 13);
  for (int k = 0; k < 200; ++k) {
    const Vector theta =
        policy.Constant(model.HoverInput()) + out.perturbations.col(k);
    grads.row(k) = RolloutCostGradient(without, policy, theta, x0);
  }
  EXPECT_TRUE(BitwiseEqual(
      AssembleGains(out, policy, 1.0),
      AssembleGains(out.weights, grads, out.perturbations, policy, 1.0)));
}

}  // namespace
}  // namespace fmppi
