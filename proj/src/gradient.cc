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

#include "fmppi/gradient.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace fmppi {

std::string_view ToString(GradientEngine engine) {
  return engine == GradientEngine::kTangent ? "tangent" : "finite-diff";
}

GradientEngine ParseGradientEngine(std::string_view name) {
  if (name == "tangent") return GradientEngine::kTangent;
  if (name == "finite-diff") return GradientEngine::kFiniteDifference;
  throw ConfigurationError("unknown gradient engine '" + std::string(name) +
                           "'");
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// grad += row * T for column-major n x n T
void AccumulateRowTimesTangent(std::span<const double> row,
                               std::span<const double> tangent, int n,
                               std::span<double> grad) {
  for (int k = 0; k < n; ++k) {
    const double* col = tangent.data() + k * n;
    double s = 0.0;
    for (int j = 0; j < n; ++j) s += row[j] * col[j];
    grad[k] += s;
  }
}

double TangentRollout(const OcpProblem& problem, const Parametrization& policy,
                      std::span<const double> theta,
                      std::span<const double> x0, RolloutWorkspace& ws,
                      std::span<double> grad) {
  const int nx = problem.state_dim();
  ws.Resize(nx, problem.input_dim());
  std::copy(x0.begin(), x0.end(), ws.state.begin());
  std::fill(ws.tangent.begin(), ws.tangent.end(), 0.0);
  for (int j = 0; j < nx; ++j) ws.tangent[j * nx + j] = 1.0;
  std::fill(grad.begin(), grad.end(), 0.0);

  double total = 0.0;
  for (int i = 0; i < problem.horizon; ++i) {
    problem.StageInput(policy, theta, i, ws.input);
    const double t = problem.StageTime(i);
    total += problem.cost->Stage(ws.state, ws.input, t, CostTerms::kAll);
    problem.cost->StageGradient(ws.state, ws.input, t, ws.grad);
    AccumulateRowTimesTangent(ws.grad, ws.tangent, nx, grad);
    try {
      problem.model->StepTangent(ws.state, ws.tangent, ws.input, t,
                                 problem.dt, ws.next, ws.tangent_next);
    } catch (const SingularityError&) {
      std::fill(grad.begin(), grad.end(), 0.0);
      return kInf;
    }
    for (double v : ws.next) {
      if (!std::isfinite(v)) {
        std::fill(grad.begin(), grad.end(), 0.0);
        return kInf;
      }
    }
    for (double v : ws.tangent_next) {
      if (!std::isfinite(v)) {
        throw GradientFailure(i + 1, "non-finite state Jacobian");
      }
    }
    std::swap(ws.state, ws.next);
    std::swap(ws.tangent, ws.tangent_next);
  }
  const double tn = problem.StageTime(problem.horizon);
  total += problem.cost->Terminal(ws.state, tn, CostTerms::kAll);
  problem.cost->TerminalGradient(ws.state, tn, ws.grad);
  AccumulateRowTimesTangent(ws.grad, ws.tangent, nx, grad);
  return total;
}

double FiniteDifferenceRollout(const OcpProblem& problem,
                               const Parametrization& policy,
                               std::span<const double> theta,
                               std::span<const double> x0,
                               RolloutWorkspace& ws, std::span<double> grad,
                               const GradientOptions& options) {
  const int nx = problem.state_dim();
  const double total = RolloutCost(problem, policy, theta, x0, ws);
  std::fill(grad.begin(), grad.end(), 0.0);
  if (!std::isfinite(total)) return total;
  std::vector<double> probe(x0.begin(), x0.end());
  for (int j = 0; j < nx; ++j) {
    const double h =
        std::max(options.min_step, options.relative_step * std::abs(x0[j]));
    probe[j] = x0[j] + h;
    const double plus =
        RolloutCost(problem, policy, theta, probe, ws, CostTerms::kSmooth);
    probe[j] = x0[j] - h;
    const double minus =
        RolloutCost(problem, policy, theta, probe, ws, CostTerms::kSmooth);
    probe[j] = x0[j];
    if (!std::isfinite(plus) || !std::isfinite(minus)) {
      throw GradientFailure(0, "finite-difference probe diverged");
    }
    grad[j] = (plus - minus) / (2.0 * h);
  }
  return total;
}

}  // namespace

double RolloutCostAndGradient(const OcpProblem& problem,
                              const Parametrization& policy,
                              std::span<const double> theta,
                              std::span<const double> x0,
                              RolloutWorkspace& workspace,
                              std::span<double> grad,
                              const GradientOptions& options) {
  if (policy.state_dependent()) {
    throw ConfigurationError(
        "state-dependent parametrizations are not supported");
  }
  if (options.engine == GradientEngine::kTangent) {
    return TangentRollout(problem, policy, theta, x0, workspace, grad);
  }
  return FiniteDifferenceRollout(problem, policy, theta, x0, workspace, grad,
                                 options);
}

RowVector RolloutCostGradient(const OcpProblem& problem,
                              const Parametrization& policy,
                              const Vector& theta, const Vector& x0,
                              const GradientOptions& options) {
  problem.Validate(policy);
  if (theta.size() != policy.dim() || x0.size() != problem.state_dim()) {
    throw ConfigurationError("dimension mismatch in gradient request");
  }
  RolloutWorkspace ws;
  RowVector grad(problem.state_dim());
  const double cost = RolloutCostAndGradient(
      problem, policy, AsSpan(theta), AsSpan(x0), ws, AsSpan(grad), options);
  if (!std::isfinite(cost)) throw RolloutDivergedError(problem.horizon);
  return grad;
}

}  // namespace fmppi
