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

#ifndef FMPPI_HARNESS_H_
#define FMPPI_HARNESS_H_

#include <array>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "fmppi/feedback.h"
#include "fmppi/policy.h"
#include "fmppi/problem.h"
#include "fmppi/quadratic_cost.h"
#include "fmppi/solver.h"
#include "fmppi/types.h"

namespace fmppi {

enum class ControllerMode { kFmppi, kMppi };
std::string_view ToString(ControllerMode mode);
ControllerMode ParseControllerMode(std::string_view name);

enum class DisturbanceKind { kNone, kRandomWrench, kStepForce };
std::string_view ToString(DisturbanceKind kind);
DisturbanceKind ParseDisturbanceKind(std::string_view name);

// Random wrenches are drawn uniformly in [-bound, bound] per axis and held
// for `hold` seconds. A step force is applied as given during the window.
struct DisturbanceSpec {
  DisturbanceKind kind = DisturbanceKind::kNone;
  std::array<double, 3> force_bound{};
  std::array<double, 3> torque_bound{};
  double hold = 0.5;
  double start = 0.0;
  double end = std::numeric_limits<double>::infinity();

  void Validate() const;
};

// Piecewise-constant wrench sequence, fixed by the episode seed.
class DisturbanceSchedule {
 public:
  DisturbanceSchedule(const DisturbanceSpec& spec, double duration,
                      std::uint64_t seed);
  Wrench At(double t) const;

 private:
  DisturbanceSpec spec_;
  std::vector<Wrench> segments_;
};

struct LoopConfig {
  double outer_rate = 50.0;   // Hz
  double inner_rate = 200.0;  // Hz
  double duration = 6.0;      // s
  ControllerMode controller = ControllerMode::kFmppi;
  DisturbanceSpec disturbance;
  std::uint64_t seed = 0;
  double stale_factor = 3.0;

  void Validate() const;
  // inner ticks per solve
  int Ratio() const;
};

// Target that the closed loop is scored against. Channels listed in
// `random_channels` are resampled uniformly in [low, high] every `interval`
// seconds, from a stream fixed by the episode seed.
struct ReferenceSpec {
  Vector state;
  std::vector<int> random_channels;
  double low = 0.0;
  double high = 0.0;
  double interval = 2.0;

  void Validate(int state_dim) const;
};

class ReferenceSchedule {
 public:
  ReferenceSchedule(const ReferenceSpec& spec, double duration,
                    std::uint64_t seed);
  Vector At(double t) const;
  bool time_varying() const { return !spec_.random_channels.empty(); }

 private:
  ReferenceSpec spec_;
  std::vector<std::vector<double>> values_;  // per interval, per channel
};

// A prediction problem plus everything needed to close the loop around it.
struct Scenario {
  std::string name;
  OcpProblem problem;
  std::shared_ptr<const QuadraticCost> cost;  // the reference is replaced
  Parametrization policy = Parametrization::ZeroOrder(1, 1, 1.0);
  SamplerConfig sampler;                      // seed replaced per episode
  SolverOptions solver;
  Vector x0;
  Vector theta0;
  ReferenceSpec reference;
  std::vector<int> tracked_channels;   // scored by MAE
  std::array<int, 3> position_index{0, 1, 2};
  double goal_tolerance = 0.1;         // m, for the reach time

  void Validate() const;
};

// Inner-tick log row.
struct TickRecord {
  double time = 0.0;
  Vector state;
  Vector input;
  Vector u_star;
  Vector setpoint;
  Vector reference;
  Matrix gain;
  double packet_age = 0.0;
  bool stale = false;
  double clearance = std::numeric_limits<double>::infinity();
};

// Outer-tick log row.
struct SolveRecord {
  double time = 0.0;
  double wall_time = 0.0;  // s
  double rho = 0.0;
  double effective_samples = 0.0;
  int nonfinite = 0;
};

struct Metrics {
  Vector rmse;                    // per state channel, post-transient
  Vector mae;                     // per state channel, post-transient
  double tracking_mae = 0.0;      // mean MAE over tracked channels
  double input_total_variation = 0.0;
  std::optional<double> goal_reach_time;
  int collisions = 0;             // inner ticks inside an obstacle
  double min_clearance = std::numeric_limits<double>::infinity();
  int stale_ticks = 0;
  double mean_solve_time = 0.0;
  bool failed = false;
  std::string failure;
};

struct ClosedLoopLog {
  std::string scenario;
  ControllerMode controller = ControllerMode::kFmppi;
  std::uint64_t seed = 0;
  double outer_rate = 0.0;
  double inner_rate = 0.0;
  std::vector<TickRecord> ticks;
  std::vector<SolveRecord> solves;
};

struct EpisodeResult {
  ClosedLoopLog log;
  Metrics metrics;
};

// Two-rate closed loop in simulated time: every Ratio() inner ticks the
// solver runs from the current state and publishes a packet; every inner tick
// the controller applies it (feedback in fmppi mode, held u* in mppi mode)
// and the plant advances by 1 / inner_rate under the disturbance.
EpisodeResult RunClosedLoop(const Scenario& scenario, const LoopConfig& config);

// RunClosedLoop with an obstacle field added to the cost; collisions are
// counted, not fatal.
EpisodeResult RunObstacleCourse(const Scenario& scenario,
                                const LoopConfig& config,
                                const ObstacleField& obstacles,
                                double obstacle_weight);

Metrics ComputeMetrics(const Scenario& scenario, const ClosedLoopLog& log);

struct ControllerVariant {
  ControllerMode mode = ControllerMode::kFmppi;
  double outer_rate = 50.0;
  std::string Label() const;
};

struct ComparisonEntry {
  ControllerVariant variant;
  std::vector<std::uint64_t> seeds;
  std::vector<Metrics> metrics;  // aligned with seeds

  double MedianTrackingMae() const;
  double MedianRmse(int channel) const;
  double MedianTotalVariation() const;
};

struct ComparisonReport {
  std::string scenario;
  std::vector<ComparisonEntry> entries;
};

// Every variant runs on the same seeds, so plant disturbances and references
// are shared pairwise.
ComparisonReport CompareControllers(const Scenario& scenario,
                                    const LoopConfig& base,
                                    const std::vector<ControllerVariant>& variants,
                                    const std::vector<std::uint64_t>& seeds);

struct TimingRow {
  int horizon = 0;
  int samples = 0;
  int repeats = 0;
  double mppi_seconds = 0.0;   // median per solve
  double fmppi_seconds = 0.0;  // median per solve incl. gradients and gains
  double Overhead() const { return fmppi_seconds / mppi_seconds - 1.0; }
};

// Median wall time per solve over the (N, K) grid, mppi vs fmppi.
std::vector<TimingRow> BenchTimings(const Scenario& scenario,
                                    const std::vector<int>& horizons,
                                    const std::vector<int>& samples,
                                    int repeats);

double Median(std::vector<double> values);

}  // namespace fmppi

#endif  // FMPPI_HARNESS_H_
