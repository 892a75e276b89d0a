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

// Shared fixtures for the unit tests. Oracles in here avoid the library's
// rollout and gradient code paths on purpose.

#ifndef FMPPI_TESTS_TEST_UTIL_H_
#define FMPPI_TESTS_TEST_UTIL_H_

#include <algorithm>
#include <array>
#include <cmath>
#include <cstring>
#include <memory>
#include <random>
#include <string>

#include "fmppi/models/double_integrator.h"
#include "fmppi/models/quadrotor.h"
#include "fmppi/models/quadruped.h"
#include "fmppi/policy.h"
#include "fmppi/problem.h"
#include "fmppi/quadratic_cost.h"
#include "fmppi/types.h"

namespace fmppi::testing {

inline std::string SourcePath(const std::string& relative) {
  return std::string(FMPPI_SOURCE_DIR) + "/" + relative;
}

inline Vector Vec(std::initializer_list<double> values) {
  Vector v(values.size());
  int i = 0;
  for (double x : values) v[i++] = x;
  return v;
}

// Q = diag(1,1), R = 1, optional terminal x'Sx.
inline OcpProblem DoubleIntegratorProblem(int horizon, double dt,
                                          const Matrix* s = nullptr,
                                          double input_limit = 1e6) {
  auto cost = std::make_shared<QuadraticCost>(
      Vec({1.0, 1.0}), Vec({1.0, 1.0}), Vec({1.0}), Vector::Zero(2),
      Vector::Zero(1));
  if (s) cost->set_terminal_matrix(*s);
  OcpProblem p;
  p.model = std::make_shared<DoubleIntegrator>(input_limit);
  p.cost = cost;
  p.horizon = horizon;
  p.dt = dt;
  return p;
}

inline std::shared_ptr<QuadraticCost> QuadrotorCost(const Quadrotor& model,
                                                    const Vector& goal) {
  Vector q(13), qn(13);
  q << 100, 100, 125, 0.5, 0.5, 2.5, 0, 0.5, 0.5, 50, 0.25, 0.25, 25;
  qn << 100, 100, 125, 10, 10, 25, 0, 10, 10, 100, 0.5, 0.5, 50;
  return std::make_shared<QuadraticCost>(
      q, qn, Vector::Constant(4, 1e-2),
      Quadrotor::HoverState(goal[0], goal[1], goal[2]), model.HoverInput());
}

inline OcpProblem QuadrotorProblem(int horizon = 15, double dt = 0.05) {
  auto model = std::make_shared<Quadrotor>();
  OcpProblem p;
  p.model = model;
  p.cost = QuadrotorCost(*model, Vec({1.0, 0.0, 1.5}));
  p.horizon = horizon;
  p.dt = dt;
  return p;
}

inline QuadrupedParams StandingParams() {
  QuadrupedParams params;
  params.fixed_contacts = ContactFlags{true, true, true, true};
  return params;
}

inline std::shared_ptr<QuadraticCost> QuadrupedCost(double height,
                                                    double vx) {
  Vector q(12);
  q << 0, 0, 1500, 200, 200, 200, 1500, 1500, 0, 20, 20, 50;
  Vector x_ref = Vector::Zero(12);
  x_ref[2] = height;
  x_ref[3] = vx;
  return std::make_shared<QuadraticCost>(q, q, Vector::Constant(12, 1e-4),
                                         x_ref, Vector::Zero(12));
}

inline OcpProblem QuadrupedProblem(const QuadrupedParams& params,
                                   int horizon = 10, double dt = 0.02) {
  auto model = std::make_shared<SrbdQuadruped>(params);
  auto cost = QuadrupedCost(0.33, 0.3);
  cost->set_input_reference([model](double t, std::span<double> u) {
    model->GravityCompensation(t, u);
  });
  OcpProblem p;
  p.model = model;
  p.cost = cost;
  p.horizon = horizon;
  p.dt = dt;
  p.input_offset = [model](double t, std::span<double> u) {
    std::array<double, 12> g;
    model->GravityCompensation(t, g);
    for (std::size_t i = 0; i < u.size(); ++i) u[i] += g[i];
  };
  return p;
}

// Straight-line rollout written out by hand.
inline double LoopCost(const OcpProblem& p, const Parametrization& policy,
                       const Vector& theta, const Vector& x0,
                       CostTerms terms = CostTerms::kAll) {
  Vector x = x0, next(x0.size()), u(p.input_dim());
  double total = 0.0;
  for (int i = 0; i < p.horizon; ++i) {
    const double t = p.start_time + i * p.dt;
    policy.DecodeStage(AsSpan(theta), i, AsSpan(u));
    if (p.input_offset) p.input_offset(t, AsSpan(u));
    p.model->ClipInput(AsSpan(u));
    total += p.cost->Stage(AsSpan(x), AsSpan(u), t, terms);
    p.model->Step(AsSpan(x), AsSpan(u), t, p.dt, AsSpan(next));
    x = next;
  }
  return total + p.cost->Terminal(AsSpan(x), p.start_time + p.horizon * p.dt,
                                  terms);
}

// Central differences of the smooth rollout cost w.r.t. x0,
// h_j = max(1e-5, 1e-5 |x0_j|).
inline RowVector CentralDifference(const OcpProblem& p,
                                   const Parametrization& policy,
                                   const Vector& theta, const Vector& x0) {
  RowVector g(x0.size());
  for (int j = 0; j < x0.size(); ++j) {
    const double h = std::max(1e-5, 1e-5 * std::abs(x0[j]));
    Vector plus = x0, minus = x0;
    plus[j] += h;
    minus[j] -= h;
    g[j] = (LoopCost(p, policy, theta, plus, CostTerms::kSmooth) -
            LoopCost(p, policy, theta, minus, CostTerms::kSmooth)) /
           (2.0 * h);
  }
  return g;
}

// max_j |a_j - b_j| / max(|b|_inf, 1e-8)
inline double RelativeError(const RowVector& a, const RowVector& b) {
  const double scale = std::max(b.cwiseAbs().maxCoeff(), 1e-8);
  return (a - b).cwiseAbs().maxCoeff() / scale;
}

inline Vector RandomUnitQuaternion(std::mt19937_64& rng, double spread) {
  std::normal_distribution<double> n(0.0, spread);
  Vector q = Vec({1.0, n(rng), n(rng), n(rng)});
  return q / q.norm();
}

inline bool BitwiseEqual(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  return std::equal(a.data(), a.data() + a.size(), b.data(),
                    [](double x, double y) {
                      return std::memcmp(&x, &y, sizeof(double)) == 0;
                    });
}

}  // namespace fmppi::testing

#endif  // FMPPI_TESTS_TEST_UTIL_H_
