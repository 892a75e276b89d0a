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

#include "fmppi/harness.h"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cmath>
#include <random>
#include <utility>

#include "fmppi/gains.h"

namespace fmppi {
namespace {

constexpr std::uint64_t kDisturbanceStream = 0xd1b54a32d192ed03ULL;
constexpr std::uint64_t kReferenceStream = 0x8cb92ba72f3d8dd7ULL;

std::mt19937_64 StreamFor(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream),
                    static_cast<std::uint32_t>(stream >> 32)};
  return std::mt19937_64(seq);
}

int SegmentCount(double duration, double interval) {
  return std::max(1, static_cast<int>(std::ceil(duration / interval)) + 1);
}

bool IsFinite(std::span<const double> x) {
  return std::all_of(x.begin(), x.end(),
                     [](double v) { return std::isfinite(v); });
}

}  // namespace

std::string_view ToString(ControllerMode mode) {
  return mode == ControllerMode::kFmppi ? "fmppi" : "mppi";
}

ControllerMode ParseControllerMode(std::string_view name) {
  if (name == "fmppi") return ControllerMode::kFmppi;
  if (name == "mppi") return ControllerMode::kMppi;
  throw ConfigurationError("unknown controller '" + std::string(name) + "'");
}

std::string_view ToString(DisturbanceKind kind) {
  switch (kind) {
    case DisturbanceKind::kNone:
      return "none";
    case DisturbanceKind::kRandomWrench:
      return "random-wrench";
    case DisturbanceKind::kStepForce:
      return "step-force";
  }
  return "none";
}

DisturbanceKind ParseDisturbanceKind(std::string_view name) {
  if (name == "none") return DisturbanceKind::kNone;
  if (name == "random-wrench") return DisturbanceKind::kRandomWrench;
  if (name == "step-force") return DisturbanceKind::kStepForce;
  throw ConfigurationError("unknown disturbance '" + std::string(name) + "'");
}

void DisturbanceSpec::Validate() const {
  for (int i = 0; i < 3; ++i) {
    if (!std::isfinite(force_bound[i]) || !std::isfinite(torque_bound[i])) {
      throw ConfigurationError("disturbance bounds must be finite");
    }
    if (kind == DisturbanceKind::kRandomWrench &&
        (force_bound[i] < 0.0 || torque_bound[i] < 0.0)) {
      throw ConfigurationError("random wrench bounds must be >= 0");
    }
  }
  if (!(hold > 0.0)) throw ConfigurationError("disturbance hold must be > 0");
  if (!(start <= end)) throw ConfigurationError("disturbance window is empty");
}

DisturbanceSchedule::DisturbanceSchedule(const DisturbanceSpec& spec,
                                         double duration, std::uint64_t seed)
    : spec_(spec) {
  spec_.Validate();
  if (spec_.kind != DisturbanceKind::kRandomWrench) return;
  std::mt19937_64 rng = StreamFor(seed, kDisturbanceStream);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  segments_.resize(SegmentCount(duration, spec_.hold));
  for (Wrench& w : segments_) {
    for (int i = 0; i < 3; ++i) w.force[i] = spec_.force_bound[i] * unit(rng);
    for (int i = 0; i < 3; ++i) w.torque[i] = spec_.torque_bound[i] * unit(rng);
  }
}

Wrench DisturbanceSchedule::At(double t) const {
  if (spec_.kind == DisturbanceKind::kNone || t < spec_.start ||
      t >= spec_.end) {
    return {};
  }
  if (spec_.kind == DisturbanceKind::kStepForce) {
    Wrench w;
    w.force = spec_.force_bound;
    w.torque = spec_.torque_bound;
    return w;
  }
  const auto index = std::min<std::size_t>(
      static_cast<std::size_t>(std::floor(t / spec_.hold)),
      segments_.size() - 1);
  return segments_[index];
}

void LoopConfig::Validate() const {
  if (!(outer_rate > 0.0) || !(inner_rate > 0.0)) {
    throw ConfigurationError("loop rates must be > 0");
  }
  if (inner_rate < outer_rate * (1.0 - 1e-9)) {
    throw ConfigurationError("inner_rate must be >= outer_rate");
  }
  const double ratio = inner_rate / outer_rate;
  if (std::abs(ratio - std::round(ratio)) > 1e-6 * ratio) {
    throw ConfigurationError(
        "inner_rate must be an integer multiple of outer_rate");
  }
  if (!(duration > 0.0)) throw ConfigurationError("duration must be > 0");
  if (!(stale_factor > 0.0)) {
    throw ConfigurationError("stale factor must be > 0");
  }
  disturbance.Validate();
}

int LoopConfig::Ratio() const {
  return static_cast<int>(std::lround(inner_rate / outer_rate));
}

void ReferenceSpec::Validate(int state_dim) const {
  if (state.size() != state_dim) {
    throw ConfigurationError("reference state has wrong length");
  }
  for (int c : random_channels) {
    if (c < 0 || c >= state_dim) {
      throw ConfigurationError("reference channel out of range");
    }
  }
  if (!random_channels.empty() && (!(low <= high) || !(interval > 0.0))) {
    throw ConfigurationError("reference range or interval invalid");
  }
}

ReferenceSchedule::ReferenceSchedule(const ReferenceSpec& spec,
                                     double duration, std::uint64_t seed)
    : spec_(spec) {
  if (spec_.random_channels.empty()) return;
  std::mt19937_64 rng = StreamFor(seed, kReferenceStream);
  std::uniform_real_distribution<double> draw(spec_.low, spec_.high);
  values_.resize(SegmentCount(duration, spec_.interval));
  for (auto& row : values_) {
    row.resize(spec_.random_channels.size());
    for (double& v : row) v = draw(rng);
  }
}

Vector ReferenceSchedule::At(double t) const {
  Vector x = spec_.state;
  if (values_.empty()) return x;
  const auto index = std::min<std::size_t>(
      static_cast<std::size_t>(std::max(0.0, std::floor(t / spec_.interval))),
      values_.size() - 1);
  for (std::size_t c = 0; c < spec_.random_channels.size(); ++c) {
    x[spec_.random_channels[c]] = values_[index][c];
  }
  return x;
}

void Scenario::Validate() const {
  problem.Validate(policy);
  if (!cost) throw ConfigurationError("scenario has no cost");
  const int nx = problem.state_dim();
  if (x0.size() != nx) throw ConfigurationError("x0 has wrong length");
  if (theta0.size() != policy.dim()) {
    throw ConfigurationError("initial parameters have wrong length");
  }
  sampler.Validate(policy.dim());
  reference.Validate(nx);
  for (int c : tracked_channels) {
    if (c < 0 || c >= nx) throw ConfigurationError("tracked channel invalid");
  }
  for (int c : position_index) {
    if (c < 0 || c >= nx) throw ConfigurationError("position index invalid");
  }
}

EpisodeResult RunClosedLoop(const Scenario& scenario,
                            const LoopConfig& config) {
  config.Validate();
  scenario.Validate();
  const bool feedback = config.controller == ControllerMode::kFmppi;
  const int ratio = config.Ratio();
  const double inner_dt = 1.0 / config.inner_rate;
  const double outer_dt = 1.0 / config.outer_rate;
  const long num_ticks = std::lround(config.duration * config.inner_rate);
  const std::shared_ptr<const Model> model = scenario.problem.model;

  const DisturbanceSchedule disturbance(config.disturbance, config.duration,
                                        config.seed);
  const ReferenceSchedule reference(scenario.reference, config.duration,
                                    config.seed);

  OcpProblem problem = scenario.problem;
  problem.cost = scenario.cost;
  SamplerConfig sampler = scenario.sampler;
  sampler.seed = config.seed;
  SolverOptions options = scenario.solver;
  options.compute_gradients = feedback;
  MppiSolver solver(problem, scenario.policy, sampler, options);

  PacketMailbox mailbox;
  InnerLoopController inner(model, &mailbox, feedback, config.stale_factor);

  EpisodeResult result;
  ClosedLoopLog& log = result.log;
  log.scenario = scenario.name;
  log.controller = config.controller;
  log.seed = config.seed;
  log.outer_rate = config.outer_rate;
  log.inner_rate = config.inner_rate;
  log.ticks.reserve(num_ticks);
  log.solves.reserve(num_ticks / ratio + 1);

  Vector theta_bar = scenario.theta0;
  Vector x = scenario.x0;
  Vector x_next(x.size());
  Vector active_reference = scenario.cost->state_reference();
  std::string failure;

  for (long tick = 0; tick < num_ticks; ++tick) {
    const double t = tick * inner_dt;
    const Vector target = reference.At(t);

    if (tick % ratio == 0) {
      if (reference.time_varying() && target != active_reference) {
        auto cost = std::make_shared<QuadraticCost>(*scenario.cost);
        cost->set_state_reference(target);
        solver.set_cost(std::move(cost));
        active_reference = target;
      }
      const auto begin = std::chrono::steady_clock::now();
      SolveOutput out;
      Matrix gain;
      try {
        out = solver.Solve(theta_bar, x, t);
        gain = feedback ? AssembleGains(out, scenario.policy,
                                        scenario.sampler.lambda)
                        : Matrix::Zero(model->input_dim(), model->state_dim());
      } catch (const Error& e) {
        failure = e.what();
        break;
      }
      const double wall = std::chrono::duration<double>(
                              std::chrono::steady_clock::now() - begin)
                              .count();
      auto packet = std::make_shared<FeedbackPacket>();
      packet->u_star = out.u_star;
      packet->gain = std::move(gain);
      packet->x0 = out.nominal.states[0];
      packet->x1 = out.nominal.states[1];
      packet->dt = problem.dt;
      packet->solve_time = t;
      mailbox.Publish(std::move(packet));
      theta_bar = scenario.policy.WarmStartShift(out.theta_star, outer_dt);
      log.solves.push_back(
          {t, wall, out.rho, out.effective_samples, out.nonfinite});
    }

    const InnerLoopController::Command cmd = inner.Update(x, t);
    const std::shared_ptr<const FeedbackPacket> packet = mailbox.Latest();
    TickRecord row;
    row.time = t;
    row.state = x;
    row.input = cmd.u;
    row.u_star = packet->u_star;
    row.setpoint = InterpolateSetpoint(*packet, t, *model);
    row.reference = target;
    row.gain = packet->gain;
    row.packet_age = cmd.packet_age;
    row.stale = cmd.stale;
    if (const auto& field = scenario.cost->obstacles()) {
      row.clearance = field->Clearance(x[scenario.position_index[0]],
                                       x[scenario.position_index[1]]);
    }
    log.ticks.push_back(std::move(row));

    try {
      model->StepDisturbed(AsSpan(x), AsSpan(cmd.u), t, inner_dt,
                           disturbance.At(t), AsSpan(x_next));
    } catch (const SingularityError& e) {
      failure = e.what();
      break;
    }
    if (!IsFinite(AsSpan(x_next))) {
      failure = "plant state became non-finite";
      break;
    }
    x.swap(x_next);
  }

  result.metrics = ComputeMetrics(scenario, log);
  if (!failure.empty()) {
    result.metrics.failed = true;
    result.metrics.failure = failure;
  }
  return result;
}

EpisodeResult RunObstacleCourse(const Scenario& scenario,
                                const LoopConfig& config,
                                const ObstacleField& obstacles,
                                double obstacle_weight) {
  auto cost = std::make_shared<QuadraticCost>(*scenario.cost);
  cost->set_obstacles(obstacles, obstacle_weight, scenario.position_index[0],
                      scenario.position_index[1]);
  const auto& p = scenario.position_index;
  if (obstacles.Contains(scenario.x0[p[0]], scenario.x0[p[1]])) {
    throw ConfigurationError("start position lies inside an obstacle");
  }
  const Vector& goal = scenario.reference.state;
  if (obstacles.Contains(goal[p[0]], goal[p[1]])) {
    throw ConfigurationError("goal lies inside an obstacle: no feasible goal");
  }
  Scenario course = scenario;
  course.cost = std::move(cost);
  return RunClosedLoop(course, config);
}

Metrics ComputeMetrics(const Scenario& scenario, const ClosedLoopLog& log) {
  Metrics m;
  const int nx = scenario.problem.state_dim();
  m.rmse = Vector::Zero(nx);
  m.mae = Vector::Zero(nx);
  if (log.ticks.empty()) return m;

  const double duration = log.ticks.size() / log.inner_rate;
  const double window_start = 0.5 * duration;
  int count = 0;
  for (const TickRecord& row : log.ticks) {
    if (row.time + 1e-12 < window_start) continue;
    const Vector e = row.state - row.reference;
    m.rmse += e.cwiseAbs2();
    m.mae += e.cwiseAbs();
    ++count;
  }
  if (count > 0) {
    m.rmse = (m.rmse / count).cwiseSqrt();
    m.mae /= count;
  }
  if (!scenario.tracked_channels.empty()) {
    for (int c : scenario.tracked_channels) m.tracking_mae += m.mae[c];
    m.tracking_mae /= static_cast<double>(scenario.tracked_channels.size());
  }

  const auto& p = scenario.position_index;
  for (std::size_t i = 0; i < log.ticks.size(); ++i) {
    const TickRecord& row = log.ticks[i];
    if (i > 0) {
      m.input_total_variation +=
          (row.input - log.ticks[i - 1].input).cwiseAbs().sum();
    }
    if (row.stale) ++m.stale_ticks;
    if (row.clearance < 0.0) ++m.collisions;
    m.min_clearance = std::min(m.min_clearance, row.clearance);
    if (!m.goal_reach_time && scenario.goal_tolerance > 0.0) {
      double d2 = 0.0;
      for (int k : p) {
        const double e = row.state[k] - row.reference[k];
        d2 += e * e;
      }
      if (std::sqrt(d2) < scenario.goal_tolerance) m.goal_reach_time = row.time;
    }
  }
  double total = 0.0;
  for (const SolveRecord& s : log.solves) total += s.wall_time;
  if (!log.solves.empty()) m.mean_solve_time = total / log.solves.size();
  return m;
}

std::string ControllerVariant::Label() const {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%s@%gHz",
                std::string(ToString(mode)).c_str(), outer_rate);
  return buffer;
}

double Median(std::vector<double> values) {
  if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

double ComparisonEntry::MedianTrackingMae() const {
  std::vector<double> v;
  for (const Metrics& m : metrics) v.push_back(m.tracking_mae);
  return Median(std::move(v));
}

double ComparisonEntry::MedianRmse(int channel) const {
  std::vector<double> v;
  for (const Metrics& m : metrics) v.push_back(m.rmse[channel]);
  return Median(std::move(v));
}

double ComparisonEntry::MedianTotalVariation() const {
  std::vector<double> v;
  for (const Metrics& m : metrics) v.push_back(m.input_total_variation);
  return Median(std::move(v));
}

ComparisonReport CompareControllers(
    const Scenario& scenario, const LoopConfig& base,
    const std::vector<ControllerVariant>& variants,
    const std::vector<std::uint64_t>& seeds) {
  ComparisonReport report;
  report.scenario = scenario.name;
  for (const ControllerVariant& variant : variants) {
    ComparisonEntry entry;
    entry.variant = variant;
    for (std::uint64_t seed : seeds) {
      LoopConfig config = base;
      config.controller = variant.mode;
      config.outer_rate = variant.outer_rate;
      config.seed = seed;
      entry.seeds.push_back(seed);
      entry.metrics.push_back(RunClosedLoop(scenario, config).metrics);
    }
    report.entries.push_back(std::move(entry));
  }
  return report;
}

std::vector<TimingRow> BenchTimings(const Scenario& scenario,
                                    const std::vector<int>& horizons,
                                    const std::vector<int>& samples,
                                    int repeats) {
  if (repeats < 5) throw ConfigurationError("bench needs repeats >= 5");
  scenario.Validate();
  const Vector u0 = scenario.policy.Decode(scenario.theta0, 0.0);
  std::vector<TimingRow> rows;
  for (int n : horizons) {
    for (int k : samples) {
      OcpProblem problem = scenario.problem;
      problem.cost = scenario.cost;
      problem.horizon = n;
      const Parametrization& base = scenario.policy;
      Parametrization policy(base.kind(), base.input_dim(), n, problem.dt,
                             base.kind() == PolicyKind::kZeroOrder
                                 ? 0
                                 : base.num_knots());
      SamplerConfig sampler = scenario.sampler;
      sampler.num_samples = k;
      sampler.covariance =
          Vector::Constant(policy.dim(), scenario.sampler.covariance[0]);
      SolverOptions options = scenario.solver;
      options.compute_gradients = false;
      const MppiSolver plain(problem, policy, sampler, options);
      options.compute_gradients = true;
      const MppiSolver with_gains(problem, policy, sampler, options);
      const Vector theta = policy.Constant(u0);

      std::vector<double> mppi, fmppi;
      for (int r = 0; r < repeats; ++r) {
        auto begin = std::chrono::steady_clock::now();
        plain.Solve(theta, scenario.x0, 0.0, r);
        mppi.push_back(std::chrono::duration<double>(
                           std::chrono::steady_clock::now() - begin)
                           .count());
        begin = std::chrono::steady_clock::now();
        const SolveOutput out = with_gains.Solve(theta, scenario.x0, 0.0, r);
        AssembleGains(out, policy, sampler.lambda);
        fmppi.push_back(std::chrono::duration<double>(
                            std::chrono::steady_clock::now() - begin)
                            .count());
      }
      rows.push_back({n, k, repeats, Median(mppi), Median(fmppi)});
    }
  }
  return rows;
}

}  // namespace fmppi
