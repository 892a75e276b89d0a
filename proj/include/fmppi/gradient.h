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

#ifndef FMPPI_GRADIENT_H_
#define FMPPI_GRADIENT_H_

#include <span>
#include <string_view>

#include "fmppi/policy.h"
#include "fmppi/problem.h"
#include "fmppi/types.h"

namespace fmppi {

enum class GradientEngine { kTangent, kFiniteDifference };

std::string_view ToString(GradientEngine engine);
GradientEngine ParseGradientEngine(std::string_view name);

struct GradientOptions {
  GradientEngine engine = GradientEngine::kTangent;
  // central-difference step h_j = max(min_step, relative_step * |x0_j|)
  double relative_step = 1e-5;
  double min_step = 1e-5;
};

// Rollout that also returns dJ/dx0 of the smooth cost terms.
//
// The tangent engine carries T_i = dx_i/dx0 alongside the states (T_0 = I,
// T_{i+1} = df/dx T_i, since time-only inputs do not depend on x0) and
// accumulates grad = sum_i dl_i/dx T_i + dl_N/dx T_N. The finite-difference
// engine differentiates the smooth part of the rollout cost numerically.
// Indicator terms contribute exactly zero in both engines.
//
// Returns the total cost (all terms). A diverged rollout returns +inf and a
// zero gradient. Throws GradientFailure on a non-finite tangent.
double RolloutCostAndGradient(const OcpProblem& problem,
                              const Parametrization& policy,
                              std::span<const double> theta,
                              std::span<const double> x0,
                              RolloutWorkspace& workspace,
                              std::span<double> grad,
                              const GradientOptions& options = {});

// dJ/dx0 for one parameter vector; throws RolloutDivergedError if the
// rollout diverges.
RowVector RolloutCostGradient(const OcpProblem& problem,
                              const Parametrization& policy,
                              const Vector& theta, const Vector& x0,
                              const GradientOptions& options = {});

}  // namespace fmppi

#endif  // FMPPI_GRADIENT_H_
