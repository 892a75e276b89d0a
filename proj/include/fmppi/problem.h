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

#ifndef FMPPI_PROBLEM_H_
#define FMPPI_PROBLEM_H_

#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "fmppi/cost.h"
#include "fmppi/model.h"
#include "fmppi/policy.h"
#include "fmppi/types.h"

namespace fmppi {

// Finite-horizon optimal control problem
//   min_theta  l_N(x_N) + sum_i l_i(x_i, u_i)
//   s.t.       x_0 = x_hat, x_{i+1} = f(x_i, u_i), u_i = clip(pi(theta, t_i)).
// Stage i happens at absolute time start_time + i * dt. An optional
// time-only input offset u_ff(t) is added to the decoded input before
// clipping: u_i = clip(u_ff(t_i) + pi(theta, t_i)).
struct OcpProblem {
  using InputOffset = std::function<void(double t, std::span<double> u)>;

  std::shared_ptr<const Model> model;
  std::shared_ptr<const Cost> cost;
  int horizon = 1;
  double dt = 0.0;
  double start_time = 0.0;
  InputOffset input_offset;  // adds u_ff(t) in place

  int state_dim() const { return model->state_dim(); }
  int input_dim() const { return model->input_dim(); }
  double StageTime(int i) const { return start_time + i * dt; }

  // Throws ConfigurationError on any violated precondition.
  void Validate() const;
  void Validate(const Parametrization& policy) const;

  void Clip(std::span<double> u) const { model->ClipInput(u); }

  // u = clip(u_ff(t_i) + pi(theta, t_i))
  void StageInput(const Parametrization& policy, std::span<const double> theta,
                  int stage, std::span<double> u) const;
};

struct Trajectory {
  std::vector<Vector> states;  // N + 1
  std::vector<Vector> inputs;  // N, after clipping
  std::vector<double> stage_costs;
  double terminal_cost = 0.0;

  double Total() const;
};

// sum of stage costs plus terminal cost
double TotalCost(const Trajectory& trajectory);

// Full rollout; throws RolloutDivergedError on a non-finite state.
Trajectory Rollout(const OcpProblem& problem, const Parametrization& policy,
                   const Vector& theta, const Vector& x0);

// Scratch buffers for allocation-free rollouts.
struct RolloutWorkspace {
  std::vector<double> state, next, input, tangent, tangent_next, grad;
  void Resize(int state_dim, int input_dim);
};

// Cost-only rollout for the sampling loop. Returns +inf if the rollout
// diverges (non-finite state or a model singularity).
double RolloutCost(const OcpProblem& problem, const Parametrization& policy,
                   std::span<const double> theta, std::span<const double> x0,
                   RolloutWorkspace& workspace,
                   CostTerms terms = CostTerms::kAll);

}  // namespace fmppi

#endif  // FMPPI_PROBLEM_H_
