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

#ifndef FMPPI_SCENARIOS_H_
#define FMPPI_SCENARIOS_H_

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "fmppi/config.h"
#include "fmppi/harness.h"
#include "fmppi/lqr.h"
#include "fmppi/model.h"

namespace fmppi {

// Per-channel state names, e.g. {"x", "y", "z", "vx", ...}.
std::vector<std::string> StateNames(std::string_view model_type);
int StateIndex(std::string_view model_type, std::string_view channel);

std::shared_ptr<const Model> BuildModel(const ModelSection& section);

// Riccati problem of the configured double integrator (Q from the running
// weights, R from the input weight, A and B from the Euler step).
LqrProblem BuildLqrProblem(const ExperimentConfig& config);

Scenario BuildScenario(const ExperimentConfig& config);
LoopConfig BuildLoopConfig(const ExperimentConfig& config, std::uint64_t seed);
ObstacleField BuildObstacles(const ExperimentConfig& config);
std::vector<ControllerVariant> BuildVariants(const ExperimentConfig& config);

struct GainValidationRow {
  int samples = 0;
  std::uint64_t seed = 0;
  double gain_error = 0.0;       // ||F - F_LQR||
  double spectral_radius = 0.0;  // of A + B F
  Matrix gain;
};

struct GainValidation {
  LqrSolution lqr;
  Matrix a;
  Matrix b;
  std::vector<GainValidationRow> rows;
};

// One MPPI solve per (K, seed) from the configured x0 on the LQR-matched
// double integrator, gains by direct-sampling assembly.
GainValidation ValidateLqrGains(const ExperimentConfig& config,
                                const std::vector<int>& samples,
                                const std::vector<std::uint64_t>& seeds);

}  // namespace fmppi

#endif  // FMPPI_SCENARIOS_H_
