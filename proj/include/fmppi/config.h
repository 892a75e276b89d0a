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

#ifndef FMPPI_CONFIG_H_
#define FMPPI_CONFIG_H_

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "fmppi/models/quadrotor.h"
#include "fmppi/models/quadruped.h"

namespace fmppi {

// One experiment, loaded from a YAML tree. Every physical and solver
// constant lives here.

struct ModelSection {
  std::string type;  // double-integrator | quadrotor | srbd-quadruped
  double mass = 1.0;  // double integrator only
  QuadrotorParams quadrotor;
  QuadrupedParams quadruped;
  bool operator==(const ModelSection&) const = default;
};

struct SolverSection {
  int horizon = 1;
  double dt = 0.05;
  int samples = 2;
  double sigma = 1.0;   // Sigma = sigma * I (covariance)
  double lambda = 1.0;
  int workers = 1;
  std::string gradient_engine = "tangent";
  double fd_step = 1e-5;
  bool operator==(const SolverSection&) const = default;
};

struct PolicySection {
  std::string kind = "zero-order";
  int knots = 0;
  bool operator==(const PolicySection&) const = default;
};

// Weight blocks are named per model:
//   double-integrator: p, v
//   quadrotor:         r, v, q (applied to qx, qy, qz), w
//   srbd-quadruped:    r, v, phi, w
// terminal_riccati replaces the terminal weights by the DARE solution S.
struct CostSection {
  std::map<std::string, std::vector<double>> running;
  std::map<std::string, std::vector<double>> terminal;
  bool terminal_riccati = false;
  std::vector<double> input_weight;
  double obstacle_weight = 0.0;
  bool operator==(const CostSection&) const = default;
};

struct TaskSection {
  std::vector<double> start;  // full state (double integrator), position
                              // (quadrotor) or base height (quadruped)
  std::vector<double> goal;   // same layout as start
  double goal_tolerance = 0.1;
  std::vector<double> velocity_range;  // quadruped forward-velocity bounds
  double resample_interval = 2.0;
  std::vector<std::string> tracked;    // channel names scored by MAE
  bool operator==(const TaskSection&) const = default;
};

struct DisturbanceSection {
  std::string kind = "none";
  std::array<double, 3> force{};
  std::array<double, 3> torque{};
  double hold = 0.5;
  bool operator==(const DisturbanceSection&) const = default;
};

struct LoopSection {
  double outer_rate = 50.0;
  double inner_rate = 200.0;
  double duration = 6.0;
  std::string controller = "fmppi";
  double stale_factor = 3.0;
  DisturbanceSection disturbance;
  bool operator==(const LoopSection&) const = default;
};

struct ObstacleSection {
  double inflation = 0.0;
  std::vector<std::array<double, 3>> circles;  // x, y, radius
  bool operator==(const ObstacleSection&) const = default;
};

struct VariantSection {
  std::string controller;
  double outer_rate = 0.0;
  bool operator==(const VariantSection&) const = default;
};

struct BenchSection {
  std::vector<int> horizons;
  std::vector<int> samples;
  int repeats = 11;
  bool operator==(const BenchSection&) const = default;
};

struct LqrSection {
  std::vector<int> samples;
  double tolerance = 1e-12;
  int max_iterations = 100000;
  bool operator==(const LqrSection&) const = default;
};

struct ExperimentConfig {
  std::string scenario;
  std::string run = "closed-loop";  // closed-loop | obstacle-course | compare
  std::vector<std::uint64_t> seeds;
  std::string output_dir = "out";
  ModelSection model;
  SolverSection solver;
  PolicySection policy;
  CostSection cost;
  TaskSection task;
  LoopSection loop;
  ObstacleSection obstacles;
  std::vector<VariantSection> compare;
  BenchSection bench;
  LqrSection lqr;

  // One message per offending key; empty when valid.
  std::vector<std::string> Problems() const;
  // Throws ConfigurationError naming every offending key.
  void Validate() const;
  bool operator==(const ExperimentConfig&) const = default;
};

// Throws ConfigurationError listing unknown, missing or mistyped keys.
ExperimentConfig ParseConfig(const std::string& yaml_text);
ExperimentConfig LoadConfig(const std::string& path);
std::string SerializeConfig(const ExperimentConfig& config);

}  // namespace fmppi

#endif  // FMPPI_CONFIG_H_
