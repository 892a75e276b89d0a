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

#include "fmppi/problem.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace fmppi {

namespace {

bool AllFinite(std::span<const double> v) {
  for (double x : v) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

}  // namespace

void InputBounds::Validate(int input_dim) const {
  if (lower.size() != input_dim || upper.size() != input_dim) {
    throw ConfigurationError("input bounds have wrong dimension");
  }
  for (int i = 0; i < input_dim; ++i) {
    if (!(lower[i] <= upper[i])) {
      throw ConfigurationError("input bound lo > hi on channel " +
                               std::to_string(i));
    }
  }
}

void InputBounds::Clip(std::span<double> u) const {
  for (std::size_t i = 0; i < u.size(); ++i) {
    u[i] = std::clamp(u[i], lower[i], upper[i]);
  }
}

void OcpProblem::StageInput(const Parametrization& policy,
                            std::span<const double> theta, int stage,
                            std::span<double> u) const {
  policy.DecodeStage(theta, stage, u);
  if (input_offset) input_offset(StageTime(stage), u);
  model->ClipInput(u);
}

void Model::ClipInput(std::span<double> u) const { input_bounds().Clip(u); }

void OcpProblem::Validate() const {
  if (!model) throw ConfigurationError("problem has no model");
  if (!cost) throw ConfigurationError("problem has no cost");
  if (horizon < 1) throw ConfigurationError("horizon must be >= 1");
  if (!(dt > 0.0)) throw ConfigurationError("dt must be > 0");
  model->input_bounds().Validate(model->input_dim());
}

void OcpProblem::Validate(const Parametrization& policy) const {
  Validate();
  if (policy.input_dim() != input_dim()) {
    throw ConfigurationError("parametrization input dimension mismatch");
  }
  if (policy.horizon() != horizon) {
    throw ConfigurationError("parametrization horizon mismatch");
  }
  if (std::abs(policy.dt() - dt) > 1e-12) {
    throw ConfigurationError("parametrization dt mismatch");
  }
}

double Trajectory::Total() const { return TotalCost(*this); }

double TotalCost(const Trajectory& trajectory) {
  double total = 0.0;
  for (double c : trajectory.stage_costs) total += c;
  return total + trajectory.terminal_cost;
}

Trajectory Rollout(const OcpProblem& problem, const Parametrization& policy,
                   const Vector& theta, const Vector& x0) {
  problem.Validate(policy);
  if (theta.size() != policy.dim()) {
    throw ConfigurationError("theta length does not match parametrization");
  }
  if (x0.size() != problem.state_dim()) {
    throw ConfigurationError("x0 length does not match model state");
  }
  const int nu = problem.input_dim();
  Trajectory traj;
  traj.states.reserve(problem.horizon + 1);
  traj.inputs.reserve(problem.horizon);
  traj.stage_costs.reserve(problem.horizon);
  traj.states.push_back(x0);

  for (int i = 0; i < problem.horizon; ++i) {
    const Vector& x = traj.states.back();
    Vector u(nu);
    problem.StageInput(policy, AsSpan(theta), i, AsSpan(u));
    const double t = problem.StageTime(i);
    traj.stage_costs.push_back(
        problem.cost->Stage(AsSpan(x), AsSpan(u), t, CostTerms::kAll));
    Vector next(x.size());
    try {
      problem.model->Step(AsSpan(x), AsSpan(u), t, problem.dt, AsSpan(next));
    } catch (const SingularityError&) {
      throw RolloutDivergedError(i + 1);
    }
    if (!AllFinite(AsSpan(next))) throw RolloutDivergedError(i + 1);
    traj.inputs.push_back(std::move(u));
    traj.states.push_back(std::move(next));
  }
  traj.terminal_cost = problem.cost->Terminal(
      AsSpan(traj.states.back()), problem.StageTime(problem.horizon), CostTerms::kAll);
  return traj;
}

void RolloutWorkspace::Resize(int state_dim, int input_dim) {
  state.resize(state_dim);
  next.resize(state_dim);
  input.resize(input_dim);
  tangent.resize(state_dim * state_dim);
  tangent_next.resize(state_dim * state_dim);
  grad.resize(state_dim);
}

double RolloutCost(const OcpProblem& problem, const Parametrization& policy,
                   std::span<const double> theta, std::span<const double> x0,
                   RolloutWorkspace& ws, CostTerms terms) {
  const int nx = problem.state_dim();
  ws.Resize(nx, problem.input_dim());
  std::copy(x0.begin(), x0.end(), ws.state.begin());
  double total = 0.0;
  try {
    for (int i = 0; i < problem.horizon; ++i) {
      problem.StageInput(policy, theta, i, ws.input);
      const double t = problem.StageTime(i);
      total += problem.cost->Stage(ws.state, ws.input, t, terms);
      problem.model->Step(ws.state, ws.input, t, problem.dt, ws.next);
      if (!AllFinite(ws.next)) {
        return std::numeric_limits<double>::infinity();
      }
      std::swap(ws.state, ws.next);
    }
  } catch (const SingularityError&) {
    return std::numeric_limits<double>::infinity();
  }
  total += problem.cost->Terminal(ws.state, problem.StageTime(problem.horizon),
                                  terms);
  return total;
}

}  // namespace fmppi
