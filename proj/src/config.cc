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

#include "fmppi/config.h"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "fmppi/gradient.h"
#include "fmppi/harness.h"
#include "fmppi/policy.h"
#include "fmppi/quadratic_cost.h"

namespace fmppi {
namespace {

// Reads one YAML mapping, recording problems instead of throwing so that a
// single error message can list every offending key.
class Reader {
 public:
  Reader(YAML::Node node, std::string path, std::vector<std::string>* errors)
      : node_(std::move(node)), path_(std::move(path)), errors_(errors) {
    present_ = node_.IsDefined() && !node_.IsNull();
    if (present_ && !node_.IsMap()) {
      errors_->push_back(Where("") + ": expected a mapping");
      present_ = false;
    }
  }

  ~Reader() {
    if (!present_) return;
    for (const auto& item : node_) {
      const std::string key = item.first.as<std::string>();
      if (!seen_.count(key)) errors_->push_back("unknown key " + Where(key));
    }
  }

  bool Has(const std::string& key) const {
    if (!present_) return false;
    const YAML::Node& node = node_;
    return static_cast<bool>(node[key]);
  }

  template <typename T>
  void Get(const std::string& key, T* out, bool required = false) {
    seen_.insert(key);
    if (!Has(key)) {
      if (required) errors_->push_back("missing key " + Where(key));
      return;
    }
    try {
      *out = node_[key].template as<T>();
    } catch (const YAML::Exception&) {
      errors_->push_back("invalid value for " + Where(key));
    }
  }

  Reader Child(const std::string& key, bool required = false) {
    seen_.insert(key);
    if (!Has(key)) {
      if (required) errors_->push_back("missing key " + Where(key));
      return Reader(YAML::Node(YAML::NodeType::Undefined), Where(key), errors_);
    }
    return Reader(node_[key], Where(key), errors_);
  }

  YAML::Node Raw(const std::string& key) {
    seen_.insert(key);
    return Has(key) ? node_[key] : YAML::Node(YAML::NodeType::Undefined);
  }

  std::string Where(const std::string& key) const {
    if (path_.empty()) return key;
    return key.empty() ? path_ : path_ + "." + key;
  }

 private:
  YAML::Node node_;
  bool present_ = false;
  std::string path_;
  std::vector<std::string>* errors_;
  std::set<std::string> seen_;
};

void ReadQuadrotor(Reader r, QuadrotorParams* p) {
  r.Get("mass", &p->mass);
  r.Get("inertia", &p->inertia);
  r.Get("arm_length", &p->arm_length);
  r.Get("thrust_coefficient", &p->thrust_coefficient);
  r.Get("moment_ratio", &p->moment_ratio);
  r.Get("gravity", &p->gravity);
  r.Get("min_speed", &p->min_speed);
  r.Get("max_speed", &p->max_speed);
}

void ReadQuadruped(Reader r, QuadrupedParams* p) {
  r.Get("mass", &p->mass);
  r.Get("inertia", &p->inertia);
  r.Get("gravity", &p->gravity);
  r.Get("friction", &p->friction);
  r.Get("max_normal_force", &p->max_normal_force);
  r.Get("foot_offsets", &p->foot_offsets);
  r.Get("gait_period", &p->gait_period);
  r.Get("gait_duty", &p->gait_duty);
  r.Get("max_pitch", &p->max_pitch);
  const bool fixed = r.Has("fixed_contacts");
  ContactFlags flags{};
  r.Get("fixed_contacts", &flags);
  if (fixed) p->fixed_contacts = flags;
}

const std::map<std::string, std::vector<std::string>>& WeightBlocks() {
  static const std::map<std::string, std::vector<std::string>> blocks = {
      {"double-integrator", {"p", "v"}},
      {"quadrotor", {"r", "v", "q", "w"}},
      {"srbd-quadruped", {"r", "v", "phi", "w"}}};
  return blocks;
}

int InputDim(const std::string& type) {
  if (type == "double-integrator") return 1;
  if (type == "quadrotor") return 4;
  return 12;
}

void CheckWeights(const std::map<std::string, std::vector<double>>& weights,
                  const std::string& type, const std::string& where,
                  std::vector<std::string>* errors) {
  const auto it = WeightBlocks().find(type);
  if (it == WeightBlocks().end()) return;
  const std::size_t width = type == "double-integrator" ? 1 : 3;
  for (const auto& [name, values] : weights) {
    if (std::find(it->second.begin(), it->second.end(), name) ==
        it->second.end()) {
      errors->push_back("unknown weight block " + where + "." + name);
      continue;
    }
    if (values.size() != width) {
      errors->push_back(where + "." + name + " must have " +
                        std::to_string(width) + " entries");
    }
    for (double v : values) {
      if (!(v >= 0.0)) errors->push_back(where + "." + name + " must be >= 0");
    }
  }
}

template <typename T>
void Emit(YAML::Emitter& out, const std::string& key, const T& value) {
  out << YAML::Key << key << YAML::Value << value;
}

void EmitList(YAML::Emitter& out, const std::string& key,
              const auto& values) {
  out << YAML::Key << key << YAML::Value << YAML::Flow << YAML::BeginSeq;
  for (const auto& v : values) out << v;
  out << YAML::EndSeq;
}

void EmitWeights(YAML::Emitter& out, const std::string& key,
                 const std::map<std::string, std::vector<double>>& weights) {
  out << YAML::Key << key << YAML::Value << YAML::BeginMap;
  for (const auto& [name, values] : weights) EmitList(out, name, values);
  out << YAML::EndMap;
}

}  // namespace

ExperimentConfig ParseConfig(const std::string& yaml_text) {
  YAML::Node root;
  try {
    root = YAML::Load(yaml_text);
  } catch (const YAML::Exception& e) {
    throw ConfigurationError(std::string("malformed config: ") + e.what());
  }
  ExperimentConfig c;
  std::vector<std::string> errors;
  {
    Reader r(root, "", &errors);
    r.Get("scenario", &c.scenario, true);
    r.Get("run", &c.run);
    r.Get("seeds", &c.seeds);
    r.Get("output_dir", &c.output_dir);
    {
      Reader m = r.Child("model", true);
      m.Get("type", &c.model.type, true);
      m.Get("mass", &c.model.mass);
      ReadQuadrotor(m.Child("quadrotor"), &c.model.quadrotor);
      ReadQuadruped(m.Child("quadruped"), &c.model.quadruped);
    }
    {
      Reader s = r.Child("solver", true);
      s.Get("horizon", &c.solver.horizon, true);
      s.Get("dt", &c.solver.dt, true);
      s.Get("samples", &c.solver.samples, true);
      s.Get("sigma", &c.solver.sigma, true);
      s.Get("lambda", &c.solver.lambda, true);
      s.Get("workers", &c.solver.workers);
      s.Get("gradient_engine", &c.solver.gradient_engine);
      s.Get("fd_step", &c.solver.fd_step);
    }
    {
      Reader p = r.Child("policy", true);
      p.Get("kind", &c.policy.kind, true);
      p.Get("knots", &c.policy.knots);
    }
    {
      Reader k = r.Child("cost", true);
      k.Get("running", &c.cost.running, true);
      k.Get("terminal", &c.cost.terminal);
      k.Get("terminal_riccati", &c.cost.terminal_riccati);
      k.Get("input_weight", &c.cost.input_weight, true);
      k.Get("obstacle_weight", &c.cost.obstacle_weight);
    }
    {
      Reader t = r.Child("task", true);
      t.Get("start", &c.task.start, true);
      t.Get("goal", &c.task.goal);
      t.Get("goal_tolerance", &c.task.goal_tolerance);
      t.Get("velocity_range", &c.task.velocity_range);
      t.Get("resample_interval", &c.task.resample_interval);
      t.Get("tracked", &c.task.tracked);
    }
    {
      Reader l = r.Child("loop");
      l.Get("outer_rate", &c.loop.outer_rate);
      l.Get("inner_rate", &c.loop.inner_rate);
      l.Get("duration", &c.loop.duration);
      l.Get("controller", &c.loop.controller);
      l.Get("stale_factor", &c.loop.stale_factor);
      Reader d = l.Child("disturbance");
      d.Get("kind", &c.loop.disturbance.kind);
      d.Get("force", &c.loop.disturbance.force);
      d.Get("torque", &c.loop.disturbance.torque);
      d.Get("hold", &c.loop.disturbance.hold);
    }
    {
      Reader o = r.Child("obstacles");
      o.Get("inflation", &c.obstacles.inflation);
      o.Get("circles", &c.obstacles.circles);
    }
    {
      YAML::Node list = r.Raw("compare");
      if (list && !list.IsSequence()) {
        errors.push_back("compare: expected a list");
      } else if (list) {
        for (std::size_t i = 0; i < list.size(); ++i) {
          VariantSection v;
          Reader e(list[i], "compare[" + std::to_string(i) + "]", &errors);
          e.Get("controller", &v.controller, true);
          e.Get("outer_rate", &v.outer_rate, true);
          c.compare.push_back(v);
        }
      }
    }
    {
      Reader b = r.Child("bench");
      b.Get("horizons", &c.bench.horizons);
      b.Get("samples", &c.bench.samples);
      b.Get("repeats", &c.bench.repeats);
    }
    {
      Reader q = r.Child("lqr");
      q.Get("samples", &c.lqr.samples);
      q.Get("tolerance", &c.lqr.tolerance);
      q.Get("max_iterations", &c.lqr.max_iterations);
    }
  }
  if (!errors.empty()) {
    for (const std::string& e : c.Problems()) errors.push_back(e);
    std::string message = "invalid config:";
    for (const std::string& e : errors) message += "\n  " + e;
    throw ConfigurationError(message);
  }
  return c;
}

ExperimentConfig LoadConfig(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigurationError("cannot open config '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  ExperimentConfig config = ParseConfig(buffer.str());
  config.Validate();
  return config;
}

std::string SerializeConfig(const ExperimentConfig& c) {
  YAML::Emitter out;
  out.SetDoublePrecision(17);
  out << YAML::BeginMap;
  Emit(out, "scenario", c.scenario);
  Emit(out, "run", c.run);
  EmitList(out, "seeds", c.seeds);
  Emit(out, "output_dir", c.output_dir);

  out << YAML::Key << "model" << YAML::Value << YAML::BeginMap;
  Emit(out, "type", c.model.type);
  Emit(out, "mass", c.model.mass);
  {
    const QuadrotorParams& p = c.model.quadrotor;
    out << YAML::Key << "quadrotor" << YAML::Value << YAML::BeginMap;
    Emit(out, "mass", p.mass);
    EmitList(out, "inertia", p.inertia);
    Emit(out, "arm_length", p.arm_length);
    Emit(out, "thrust_coefficient", p.thrust_coefficient);
    Emit(out, "moment_ratio", p.moment_ratio);
    Emit(out, "gravity", p.gravity);
    Emit(out, "min_speed", p.min_speed);
    Emit(out, "max_speed", p.max_speed);
    out << YAML::EndMap;
  }
  {
    const QuadrupedParams& p = c.model.quadruped;
    out << YAML::Key << "quadruped" << YAML::Value << YAML::BeginMap;
    Emit(out, "mass", p.mass);
    EmitList(out, "inertia", p.inertia);
    Emit(out, "gravity", p.gravity);
    Emit(out, "friction", p.friction);
    Emit(out, "max_normal_force", p.max_normal_force);
    out << YAML::Key << "foot_offsets" << YAML::Value << YAML::BeginSeq;
    for (const auto& o : p.foot_offsets) {
      out << YAML::Flow << YAML::BeginSeq << o[0] << o[1] << o[2]
          << YAML::EndSeq;
    }
    out << YAML::EndSeq;
    Emit(out, "gait_period", p.gait_period);
    Emit(out, "gait_duty", p.gait_duty);
    Emit(out, "max_pitch", p.max_pitch);
    if (p.fixed_contacts) EmitList(out, "fixed_contacts", *p.fixed_contacts);
    out << YAML::EndMap;
  }
  out << YAML::EndMap;

  out << YAML::Key << "solver" << YAML::Value << YAML::BeginMap;
  Emit(out, "horizon", c.solver.horizon);
  Emit(out, "dt", c.solver.dt);
  Emit(out, "samples", c.solver.samples);
  Emit(out, "sigma", c.solver.sigma);
  Emit(out, "lambda", c.solver.lambda);
  Emit(out, "workers", c.solver.workers);
  Emit(out, "gradient_engine", c.solver.gradient_engine);
  Emit(out, "fd_step", c.solver.fd_step);
  out << YAML::EndMap;

  out << YAML::Key << "policy" << YAML::Value << YAML::BeginMap;
  Emit(out, "kind", c.policy.kind);
  Emit(out, "knots", c.policy.knots);
  out << YAML::EndMap;

  out << YAML::Key << "cost" << YAML::Value << YAML::BeginMap;
  EmitWeights(out, "running", c.cost.running);
  EmitWeights(out, "terminal", c.cost.terminal);
  Emit(out, "terminal_riccati", c.cost.terminal_riccati);
  EmitList(out, "input_weight", c.cost.input_weight);
  Emit(out, "obstacle_weight", c.cost.obstacle_weight);
  out << YAML::EndMap;

  out << YAML::Key << "task" << YAML::Value << YAML::BeginMap;
  EmitList(out, "start", c.task.start);
  EmitList(out, "goal", c.task.goal);
  Emit(out, "goal_tolerance", c.task.goal_tolerance);
  EmitList(out, "velocity_range", c.task.velocity_range);
  Emit(out, "resample_interval", c.task.resample_interval);
  EmitList(out, "tracked", c.task.tracked);
  out << YAML::EndMap;

  out << YAML::Key << "loop" << YAML::Value << YAML::BeginMap;
  Emit(out, "outer_rate", c.loop.outer_rate);
  Emit(out, "inner_rate", c.loop.inner_rate);
  Emit(out, "duration", c.loop.duration);
  Emit(out, "controller", c.loop.controller);
  Emit(out, "stale_factor", c.loop.stale_factor);
  out << YAML::Key << "disturbance" << YAML::Value << YAML::BeginMap;
  Emit(out, "kind", c.loop.disturbance.kind);
  EmitList(out, "force", c.loop.disturbance.force);
  EmitList(out, "torque", c.loop.disturbance.torque);
  Emit(out, "hold", c.loop.disturbance.hold);
  out << YAML::EndMap << YAML::EndMap;

  out << YAML::Key << "obstacles" << YAML::Value << YAML::BeginMap;
  Emit(out, "inflation", c.obstacles.inflation);
  out << YAML::Key << "circles" << YAML::Value << YAML::BeginSeq;
  for (const auto& circle : c.obstacles.circles) {
    out << YAML::Flow << YAML::BeginSeq << circle[0] << circle[1] << circle[2]
        << YAML::EndSeq;
  }
  out << YAML::EndSeq << YAML::EndMap;

  out << YAML::Key << "compare" << YAML::Value << YAML::BeginSeq;
  for (const VariantSection& v : c.compare) {
    out << YAML::Flow << YAML::BeginMap;
    Emit(out, "controller", v.controller);
    Emit(out, "outer_rate", v.outer_rate);
    out << YAML::EndMap;
  }
  out << YAML::EndSeq;

  out << YAML::Key << "bench" << YAML::Value << YAML::BeginMap;
  EmitList(out, "horizons", c.bench.horizons);
  EmitList(out, "samples", c.bench.samples);
  Emit(out, "repeats", c.bench.repeats);
  out << YAML::EndMap;

  out << YAML::Key << "lqr" << YAML::Value << YAML::BeginMap;
  EmitList(out, "samples", c.lqr.samples);
  Emit(out, "tolerance", c.lqr.tolerance);
  Emit(out, "max_iterations", c.lqr.max_iterations);
  out << YAML::EndMap;

  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

std::vector<std::string> ExperimentConfig::Problems() const {
  std::vector<std::string> errors;
  auto check = [&errors](bool ok, const std::string& message) {
    if (!ok) errors.push_back(message);
  };
  auto guarded = [&errors](const std::string& key, auto&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      errors.push_back(key + ": " + e.what());
    }
  };

  check(!scenario.empty(), "scenario: must not be empty");
  check(run == "closed-loop" || run == "obstacle-course" || run == "compare",
        "run: expected closed-loop, obstacle-course or compare");
  check(!seeds.empty(), "seeds: at least one seed is required");

  const bool known_model = WeightBlocks().count(model.type) > 0;
  check(known_model, "model.type: expected double-integrator, quadrotor or "
                     "srbd-quadruped");
  if (model.type == "double-integrator") {
    check(model.mass > 0.0, "model.mass: must be > 0");
  } else if (model.type == "quadrotor") {
    guarded("model.quadrotor", [&] { model.quadrotor.Validate(); });
  } else if (model.type == "srbd-quadruped") {
    guarded("model.quadruped", [&] { model.quadruped.Validate(); });
  }

  check(solver.horizon >= 1, "solver.horizon: must be >= 1");
  check(solver.dt > 0.0, "solver.dt: must be > 0");
  check(solver.samples >= 2, "solver.samples: must be >= 2");
  check(solver.sigma > 0.0, "solver.sigma: must be > 0");
  check(solver.lambda > 0.0, "solver.lambda: must be > 0");
  check(solver.workers >= 1, "solver.workers: must be >= 1");
  check(solver.fd_step > 0.0, "solver.fd_step: must be > 0");
  guarded("solver.gradient_engine",
          [&] { ParseGradientEngine(solver.gradient_engine); });

  guarded("policy", [&] {
    Parametrization(ParsePolicyKind(policy.kind), 1, solver.horizon,
                    solver.dt, policy.knots);
  });

  if (known_model) {
    CheckWeights(cost.running, model.type, "cost.running", &errors);
    CheckWeights(cost.terminal, model.type, "cost.terminal", &errors);
    const std::size_t nu = InputDim(model.type);
    check(cost.input_weight.size() == 1 || cost.input_weight.size() == nu,
          "cost.input_weight: expected 1 or " + std::to_string(nu) +
              " entries");
    for (double v : cost.input_weight) {
      check(v >= 0.0, "cost.input_weight: must be >= 0");
    }
    check(!cost.terminal_riccati || model.type == "double-integrator",
          "cost.terminal_riccati: only supported for the double integrator");
  }
  check(cost.obstacle_weight >= 0.0, "cost.obstacle_weight: must be >= 0");

  const std::size_t task_dim = model.type == "double-integrator" ? 2
                               : model.type == "quadrotor"       ? 3
                                                                 : 1;
  check(task.start.size() == task_dim,
        "task.start: expected " + std::to_string(task_dim) + " entries");
  check(task.goal.empty() || task.goal.size() == task_dim,
        "task.goal: expected " + std::to_string(task_dim) + " entries");
  check(task.goal_tolerance >= 0.0, "task.goal_tolerance: must be >= 0");
  check(task.velocity_range.empty() ||
            (task.velocity_range.size() == 2 &&
             task.velocity_range[0] <= task.velocity_range[1]),
        "task.velocity_range: expected [low, high]");
  check(task.resample_interval > 0.0, "task.resample_interval: must be > 0");

  LoopConfig loop_config;
  loop_config.outer_rate = loop.outer_rate;
  loop_config.inner_rate = loop.inner_rate;
  loop_config.duration = loop.duration;
  loop_config.stale_factor = loop.stale_factor;
  guarded("loop", [&] {
    loop_config.controller = ParseControllerMode(loop.controller);
    loop_config.disturbance.kind = ParseDisturbanceKind(loop.disturbance.kind);
    loop_config.disturbance.force_bound = loop.disturbance.force;
    loop_config.disturbance.torque_bound = loop.disturbance.torque;
    loop_config.disturbance.hold = loop.disturbance.hold;
    loop_config.Validate();
  });
  for (std::size_t i = 0; i < compare.size(); ++i) {
    const std::string key = "compare[" + std::to_string(i) + "]";
    guarded(key, [&] {
      ParseControllerMode(compare[i].controller);
      LoopConfig variant = loop_config;
      variant.outer_rate = compare[i].outer_rate;
      variant.Validate();
    });
  }
  check(run != "compare" || !compare.empty(),
        "compare: required when run is compare");

  ObstacleField field;
  field.inflation = obstacles.inflation;
  for (const auto& c : obstacles.circles) field.circles.push_back({c[0], c[1], c[2]});
  guarded("obstacles", [&] { field.Validate(); });
  if (model.type == "quadrotor" && errors.empty()) {
    check(!field.Contains(task.start[0], task.start[1]),
          "task.start: lies inside an inflated obstacle");
    check(task.goal.size() != 3 || !field.Contains(task.goal[0], task.goal[1]),
          "task.goal: lies inside an inflated obstacle (no feasible goal)");
  }

  check(bench.horizons.empty() || bench.repeats >= 5,
        "bench.repeats: must be >= 5");
  for (int n : bench.horizons) check(n >= 1, "bench.horizons: must be >= 1");
  for (int k : bench.samples) check(k >= 2, "bench.samples: must be >= 2");
  for (int k : lqr.samples) check(k >= 2, "lqr.samples: must be >= 2");
  check(lqr.tolerance > 0.0, "lqr.tolerance: must be > 0");
  check(lqr.max_iterations >= 1, "lqr.max_iterations: must be >= 1");

  return errors;
}

void ExperimentConfig::Validate() const {
  const std::vector<std::string> errors = Problems();
  if (!errors.empty()) {
    std::string message = "invalid config:";
    for (const std::string& e : errors) message += "\n  " + e;
    throw ConfigurationError(message);
  }
}

}  // namespace fmppi
