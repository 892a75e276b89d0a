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

// Command-line entry point: validate-lqr, run and bench.

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "fmppi/config.h"
#include "fmppi/harness.h"
#include "fmppi/io.h"
#include "fmppi/scenarios.h"
#include "fmppi/types.h"

namespace {

namespace fs = std::filesystem;

struct CommonFlags {
  std::string config;
  std::string out;
  std::vector<std::uint64_t> seeds;
  int workers = 0;
  std::string engine;
};

void AddCommon(CLI::App* cmd, CommonFlags* flags) {
  cmd->add_option("--config", flags->config, "experiment config file")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--out", flags->out, "output directory");
  cmd->add_option("--seed", flags->seeds, "episode seed (repeatable)")
      ->take_all()
      ->expected(1);
  cmd->add_option("--workers", flags->workers, "rollout worker threads")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--gradient-engine", flags->engine, "tangent | finite-diff")
      ->check(CLI::IsMember({"tangent", "finite-diff"}));
}

fmppi::ExperimentConfig Load(const CommonFlags& flags) {
  fmppi::ExperimentConfig config = fmppi::LoadConfig(flags.config);
  if (!flags.out.empty()) config.output_dir = flags.out;
  if (!flags.seeds.empty()) config.seeds = flags.seeds;
  if (flags.workers > 0) config.solver.workers = flags.workers;
  if (!flags.engine.empty()) config.solver.gradient_engine = flags.engine;
  config.Validate();
  fs::create_directories(config.output_dir);
  return config;
}

std::ofstream Open(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw fmppi::Error("cannot write '" + path.string() + "'");
  return out;
}

int ValidateLqr(const CommonFlags& flags, std::vector<int> samples) {
  const auto begin = std::chrono::steady_clock::now();
  const fmppi::ExperimentConfig config = Load(flags);
  if (samples.empty()) samples = config.lqr.samples;
  const fmppi::GainValidation result =
      fmppi::ValidateLqrGains(config, samples, config.seeds);
  const auto names = fmppi::StateNames(config.model.type);
  const fs::path path = fs::path(config.output_dir) / "lqr_gains.csv";
  auto out = Open(path);
  fmppi::WriteGainValidationCsv(out, result, names);

  std::cout << "F_LQR = (" << result.lqr.gain(0, 0) << ", "
            << result.lqr.gain(0, 1) << ")  DARE residual "
            << result.lqr.residual << "\n";
  std::map<int, std::vector<double>> errors;
  double worst_radius = 0.0;
  for (const auto& row : result.rows) {
    errors[row.samples].push_back(row.gain_error);
    worst_radius = std::max(worst_radius, row.spectral_radius);
  }
  for (auto& [k, e] : errors) {
    std::cout << "K=" << k << "  median |F - F_LQR| = "
              << fmppi::Median(e) << "\n";
  }
  std::cout << "max spectral radius " << worst_radius << "\n"
            << "wrote " << path.string() << " in "
            << std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                             begin)
                   .count()
            << " s\n";
  return 0;
}

void WriteEpisode(const fs::path& dir, const fmppi::EpisodeResult& episode,
                  const std::vector<std::string>& names) {
  fs::create_directories(dir);
  {
    auto out = Open(dir / "log.csv");
    fmppi::WriteTickCsv(out, episode.log, names);
  }
  {
    auto out = Open(dir / "solves.csv");
    fmppi::WriteSolveCsv(out, episode.log);
  }
  auto out = Open(dir / "metrics.json");
  out << fmppi::MetricsJson(episode.metrics, names);
}

int Run(const CommonFlags& flags) {
  const fmppi::ExperimentConfig config = Load(flags);
  const fmppi::Scenario scenario = fmppi::BuildScenario(config);
  const auto names = fmppi::StateNames(config.model.type);
  const fs::path root(config.output_dir);

  if (config.run == "compare") {
    const fmppi::ComparisonReport report = fmppi::CompareControllers(
        scenario, fmppi::BuildLoopConfig(config, config.seeds.front()),
        fmppi::BuildVariants(config), config.seeds);
    auto out = Open(root / "comparison.json");
    out << fmppi::ComparisonJson(report, names);
    for (const auto& entry : report.entries) {
      std::cout << entry.variant.Label()
                << "  median tracking MAE " << entry.MedianTrackingMae()
                << "  median input TV " << entry.MedianTotalVariation()
                << "\n";
    }
    std::cout << "wrote " << (root / "comparison.json").string() << "\n";
    return 0;
  }

  int failures = 0;
  for (std::uint64_t seed : config.seeds) {
    const fmppi::LoopConfig loop = fmppi::BuildLoopConfig(config, seed);
    const fmppi::EpisodeResult episode =
        config.run == "obstacle-course"
            ? fmppi::RunObstacleCourse(scenario, loop,
                                       fmppi::BuildObstacles(config),
                                       config.cost.obstacle_weight)
            : fmppi::RunClosedLoop(scenario, loop);
    const fs::path dir = root / ("seed_" + std::to_string(seed));
    WriteEpisode(dir, episode, names);
    const auto& m = episode.metrics;
    std::cout << "seed " << seed << ": ";
    if (m.goal_reach_time) std::cout << "goal at " << *m.goal_reach_time << " s, ";
    std::cout << "collisions " << m.collisions << ", input TV "
              << m.input_total_variation;
    if (m.failed) {
      std::cout << ", FAILED: " << m.failure;
      ++failures;
    }
    std::cout << "  -> " << dir.string() << "\n";
  }
  return failures ? 3 : 0;
}

int Bench(const CommonFlags& flags) {
  const fmppi::ExperimentConfig config = Load(flags);
  const fmppi::Scenario scenario = fmppi::BuildScenario(config);
  const auto rows = fmppi::BenchTimings(
      scenario, config.bench.horizons, config.bench.samples,
      config.bench.repeats);
  const fs::path path = fs::path(config.output_dir) / "timings.csv";
  auto out = Open(path);
  fmppi::WriteTimingCsv(out, rows);
  std::cout << "   N      K   mppi [ms]  fmppi [ms]  overhead\n";
  for (const auto& r : rows) {
    std::printf("%4d %6d %11.3f %11.3f %8.1f%%\n", r.horizon, r.samples,
                1e3 * r.mppi_seconds, 1e3 * r.fmppi_seconds,
                100.0 * r.Overhead());
  }
  std::cout << "reference: 40-70% overhead reported on an embedded GPU; "
               "not comparable to CPU threads\n"
            << "wrote " << path.string() << "\n";
  return 0;
}

int Fail(const std::string& kind, const std::string& message, int code) {
  nlohmann::json error = {{"error", kind}, {"message", message}};
  std::cerr << error.dump() << "\n";
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Feedback-MPPI experiments"};
  app.require_subcommand(1);

  CommonFlags lqr_flags, run_flags, bench_flags;
  std::vector<int> lqr_samples;
  CLI::App* lqr = app.add_subcommand(
      "validate-lqr", "compare sampled gains against the Riccati gain");
  AddCommon(lqr, &lqr_flags);
  lqr->add_option("--samples", lqr_samples, "sample counts K (repeatable)")
      ->take_all()
      ->expected(1);
  CLI::App* run = app.add_subcommand("run", "closed-loop experiments");
  AddCommon(run, &run_flags);
  CLI::App* bench = app.add_subcommand("bench", "solve timing grid");
  AddCommon(bench, &bench_flags);

  CLI11_PARSE(app, argc, argv);

  try {
    if (lqr->parsed()) return ValidateLqr(lqr_flags, lqr_samples);
    if (run->parsed()) return Run(run_flags);
    if (bench->parsed()) return Bench(bench_flags);
  } catch (const fmppi::ConfigurationError& e) {
    return Fail("configuration", e.what(), 2);
  } catch (const std::exception& e) {
    return Fail("runtime", e.what(), 1);
  }
  return 0;
}
