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

#include "fmppi/scenarios.h"

#include <algorithm>

#include "fmppi/gains.h"
#include "fmppi/models/double_integrator.h"
#include "fmppi/models/quadrotor.h"
#include "fmppi/models/quadruped.h"
#include "fmppi/solver.h"

namespace fmppi {
namespace {

// state offset of each named weight block
struct Block {
  const char* name;
  int offset;
  int width;
};

std::vector<Block> WeightLayout(std::string_view type) {
  if (type == "double-integrator") return {{"p", 0, 1}, {"v", 1, 1}};
  if (type == "quadrotor") {
    return {{"r", 0, 3}, {"v", 3, 3}, {"q", 7, 3}, {"w", 10, 3}};
  }
  return {{"r", 0, 3}, {"v", 3, 3}, {"phi", 6, 3}, {"w", 9, 3}};
}

Vector StateWeights(const std::map<std::string, std::vector<double>>& blocks,
                    std::string_view type, int state_dim) {
  Vector q = Vector::Zero(state_dim);
  for (const Block& b : WeightLayout(type)) {
    const auto it = blocks.find(b.name);
    if (it == blocks.end()) continue;
    for (int i = 0; i < b.width; ++i) q[b.offset + i] = it->second[i];
  }
  return q;
}

Vector InputWeights(const std::vector<double>& values, int input_dim) {
  if (values.size() == 1) return Vector::Constant(input_dim, values[0]);
  return Eigen::Map<const Vector>(values.data(), input_dim);
}

}  // namespace

std::vector<std::string> StateNames(std::string_view model_type) {
  if (model_type == "double-integrator") return {"p", "v"};
  if (model_type == "quadrotor") {
    return {"x",  "y",  "z",  "vx", "vy", "vz", "qw",
            "qx", "qy", "qz", "wx", "wy", "wz"};
  }
  if (model_type == "srbd-quadruped") {
    return {"x",    "y",     "z",   "vx", "vy", "vz",
            "roll", "pitch", "yaw", "wx", "wy", "wz"};
  }
  throw ConfigurationError("unknown model '" + std::string(model_type) + "'");
}

int StateIndex(std::string_view model_type, std::string_view channel) {
  const auto names = StateNames(model_type);
  const auto it = std::find(names.begin(), names.end(), channel);
  if (it == names.end()) {
    throw ConfigurationError("unknown state channel '" + std::string(channel) +
                             "'");
  }
  return static_cast<int>(it - names.begin());
}

std::shared_ptr<const Model> BuildModel(const ModelSection& section) {
  if (section.type == "double-integrator") {
    return std::make_shared<DoubleIntegrator>(1e6, section.mass);
  }
  if (section.type == "quadrotor") {
    return std::make_shared<Quadrotor>(section.quadrotor);
  }
  if (section.type == "srbd-quadruped") {
    return std::make_shared<SrbdQuadruped>(section.quadruped);
  }
  throw ConfigurationError("unknown model '" + section.type + "'");
}

LqrProblem BuildLqrProblem(const ExperimentConfig& config) {
  if (config.model.type != "double-integrator") {
    throw ConfigurationError("LQR problem needs the double integrator");
  }
  LqrProblem p;
  p.a = DoubleIntegrator::A(config.solver.dt);
  p.b = DoubleIntegrator::B(config.solver.dt) / config.model.mass;
  p.q = StateWeights(config.cost.running, config.model.type, 2).asDiagonal();
  p.r = InputWeights(config.cost.input_weight, 1).asDiagonal();
  return p;
}

Scenario BuildScenario(const ExperimentConfig& config) {
  config.Validate();
  const std::string& type = config.model.type;
  Scenario s;
  s.name = config.scenario;
  s.problem.model = BuildModel(config.model);
  s.problem.horizon = config.solver.horizon;
  s.problem.dt = config.solver.dt;
  const int nx = s.problem.state_dim();
  const int nu = s.problem.input_dim();

  s.policy = Parametrization(ParsePolicyKind(config.policy.kind), nu,
                             config.solver.horizon, config.solver.dt,
                             config.policy.knots);
  s.sampler.num_samples = config.solver.samples;
  s.sampler.covariance = Vector::Constant(s.policy.dim(), config.solver.sigma);
  s.sampler.lambda = config.solver.lambda;
  s.sampler.seed = config.seeds.front();
  s.solver.workers = config.solver.workers;
  s.solver.gradient.engine = ParseGradientEngine(config.solver.gradient_engine);
  s.solver.gradient.relative_step = config.solver.fd_step;
  s.solver.gradient.min_step = config.solver.fd_step;

  const Vector q = StateWeights(config.cost.running, type, nx);
  const Vector q_terminal = StateWeights(config.cost.terminal, type, nx);
  const Vector r = InputWeights(config.cost.input_weight, nu);
  const auto& start = config.task.start;
  const auto& goal = config.task.goal;
  std::shared_ptr<QuadraticCost> cost;

  if (type == "double-integrator") {
    s.x0 = Eigen::Map<const Vector>(start.data(), 2);
    s.reference.state = goal.empty() ? Vector::Zero(2).eval()
                                     : Eigen::Map<const Vector>(goal.data(), 2).eval();
    cost = std::make_shared<QuadraticCost>(q, q_terminal, r, s.reference.state,
                                           Vector::Zero(nu));
    if (config.cost.terminal_riccati) {
      const LqrProblem lqr = BuildLqrProblem(config);
      cost->set_terminal_matrix(
          SolveDare(lqr, config.lqr.tolerance, config.lqr.max_iterations).s);
    }
    s.theta0 = Vector::Zero(s.policy.dim());
    s.position_index = {0, 0, 0};
    s.goal_tolerance = 0.0;
  } else if (type == "quadrotor") {
    const auto& model = static_cast<const Quadrotor&>(*s.problem.model);
    s.x0 = Quadrotor::HoverState(start[0], start[1], start[2]);
    const auto& g = goal.empty() ? start : goal;
    s.reference.state = Quadrotor::HoverState(g[0], g[1], g[2]);
    const Vector u_h = model.HoverInput();
    cost = std::make_shared<QuadraticCost>(q, q_terminal, r, s.reference.state,
                                           u_h);
    s.theta0 = s.policy.Constant(u_h);
    s.goal_tolerance = config.task.goal_tolerance;
    if (config.cost.obstacle_weight > 0.0 && !config.obstacles.circles.empty()) {
      cost->set_obstacles(BuildObstacles(config), config.cost.obstacle_weight);
    }
  } else {
    auto model =
        std::static_pointer_cast<const SrbdQuadruped>(s.problem.model);
    const double height = start[0];
    s.x0 = Vector::Zero(12);
    s.x0[2] = height;
    s.reference.state = s.x0;
    if (config.task.velocity_range.size() == 2) {
      s.reference.random_channels = {3};
      s.reference.low = config.task.velocity_range[0];
      s.reference.high = config.task.velocity_range[1];
      s.reference.interval = config.task.resample_interval;
    }
    cost = std::make_shared<QuadraticCost>(q, q_terminal, r, s.reference.state,
                                           Vector::Zero(nu));
    cost->set_input_reference([model](double t, std::span<double> u_ref) {
      model->GravityCompensation(t, u_ref);
    });
    s.problem.input_offset = [model](double t, std::span<double> u) {
      std::array<double, 12> g;
      model->GravityCompensation(t, g);
      for (std::size_t i = 0; i < u.size(); ++i) u[i] += g[i];
    };
    s.theta0 = Vector::Zero(s.policy.dim());
    s.goal_tolerance = 0.0;
  }
  s.cost = cost;
  s.problem.cost = cost;
  for (const std::string& channel : config.task.tracked) {
    s.tracked_channels.push_back(StateIndex(type, channel));
  }
  s.Validate();
  return s;
}

LoopConfig BuildLoopConfig(const ExperimentConfig& config,
                           std::uint64_t seed) {
  LoopConfig loop;
  loop.outer_rate = config.loop.outer_rate;
  loop.inner_rate = config.loop.inner_rate;
  loop.duration = config.loop.duration;
  loop.controller = ParseControllerMode(config.loop.controller);
  loop.stale_factor = config.loop.stale_factor;
  loop.seed = seed;
  DisturbanceSpec& d = loop.disturbance;
  d.kind = ParseDisturbanceKind(config.loop.disturbance.kind);
  d.force_bound = config.loop.disturbance.force;
  d.torque_bound = config.loop.disturbance.torque;
  d.hold = config.loop.disturbance.hold;
  loop.Validate();
  return loop;
}

ObstacleField BuildObstacles(const ExperimentConfig& config) {
  ObstacleField field;
  field.inflation = config.obstacles.inflation;
  for (const auto& c : config.obstacles.circles) {
    field.circles.push_back({c[0], c[1], c[2]});
  }
  field.Validate();
  return field;
}

std::vector<ControllerVariant> BuildVariants(const ExperimentConfig& config) {
  std::vector<ControllerVariant> variants;
  for (const VariantSection& v : config.compare) {
    variants.push_back({ParseControllerMode(v.controller), v.outer_rate});
  }
  return variants;
}

GainValidation ValidateLqrGains(const ExperimentConfig& config,
                                const std::vector<int>& samples,
                                const std::vector<std::uint64_t>& seeds) {
  if (samples.empty()) throw ConfigurationError("K list must be nonempty");
  if (config.policy.kind != "zero-order") {
    throw ConfigurationError("LQR validation uses direct (zero-order) sampling");
  }
  ExperimentConfig c = config;
  c.cost.terminal_riccati = true;
  const Scenario scenario = BuildScenario(c);
  GainValidation result;
  const LqrProblem lqr = BuildLqrProblem(c);
  result.lqr = SolveDare(lqr, c.lqr.tolerance, c.lqr.max_iterations);
  result.a = lqr.a;
  result.b = lqr.b;

  OcpProblem problem = scenario.problem;
  SolverOptions options = scenario.solver;
  options.compute_gradients = true;
  for (int k : samples) {
    for (std::uint64_t seed : seeds) {
      SamplerConfig sampler = scenario.sampler;
      sampler.num_samples = k;
      sampler.seed = seed;
      const MppiSolver solver(problem, scenario.policy, sampler, options);
      const SolveOutput out = solver.Solve(scenario.theta0, scenario.x0, 0.0, 0);
      GainValidationRow row;
      row.samples = k;
      row.seed = seed;
      row.gain = AssembleGainsDirect(out.weights, out.gradients,
                                     out.perturbations, 1, sampler.lambda);
      row.gain_error = (row.gain - result.lqr.gain).norm();
      row.spectral_radius = SpectralRadius(lqr.a + lqr.b * row.gain);
      result.rows.push_back(std::move(row));
    }
  }
  return result;
}

}  // namespace fmppi
