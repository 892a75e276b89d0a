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

#include "fmppi/solver.h"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <random>
#include <string>

namespace fmppi {

namespace {

std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// SplitMix64 as a stream; one word of state keeps per-sample seeding cheap
class SampleStream {
 public:
  using result_type = std::uint64_t;
  explicit SampleStream(std::uint64_t seed) : state_(seed) {}
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }
  result_type operator()() {
    const result_type out = SplitMix64(state_);
    state_ += 0x9e3779b97f4a7c15ULL;
    return out;
  }

 private:
  std::uint64_t state_;
};

std::uint64_t SampleSeed(std::uint64_t seed, std::uint64_t iteration,
                         std::uint64_t k) {
  return SplitMix64(SplitMix64(SplitMix64(seed) ^ iteration) ^ k);
}

void FillSample(const SamplerConfig& config, std::uint64_t iteration, int k,
                std::span<double> out) {
  if (k == 0) {
    std::fill(out.begin(), out.end(), 0.0);
    return;
  }
  SampleStream rng(SampleSeed(config.seed, iteration, k));
  std::normal_distribution<double> normal(0.0, 1.0);
  for (std::size_t m = 0; m < out.size(); ++m) {
    out[m] = std::sqrt(config.covariance[m]) * normal(rng);
  }
}

}  // namespace

void SamplerConfig::Validate(int num_params) const {
  if (num_samples < 2) throw ConfigurationError("num_samples must be >= 2");
  if (!(lambda > 0.0)) throw ConfigurationError("lambda must be > 0");
  if (covariance.size() != num_params) {
    throw ConfigurationError("covariance has " +
                             std::to_string(covariance.size()) +
                             " entries, expected " +
                             std::to_string(num_params));
  }
  for (int i = 0; i < covariance.size(); ++i) {
    if (!(covariance[i] > 0.0)) {
      throw ConfigurationError("covariance entries must be > 0");
    }
  }
}

Matrix SamplePerturbations(const SamplerConfig& config, int num_params,
                           std::uint64_t iteration) {
  if (num_params < 1) throw ConfigurationError("num_params must be > 0");
  config.Validate(num_params);
  Matrix perturbations(num_params, config.num_samples);
  for (int k = 0; k < config.num_samples; ++k) {
    FillSample(config, iteration, k,
               {perturbations.col(k).data(),
                static_cast<std::size_t>(num_params)});
  }
  return perturbations;
}

Weights ComputeWeights(std::span<const double> costs, double lambda) {
  if (!(lambda > 0.0)) throw ConfigurationError("lambda must be > 0");
  Weights out;
  out.weights.assign(costs.size(), 0.0);
  out.rho = std::numeric_limits<double>::infinity();
  for (double c : costs) {
    if (std::isfinite(c)) {
      out.rho = std::min(out.rho, c);
    } else {
      ++out.nonfinite;
    }
  }
  if (out.nonfinite == static_cast<int>(costs.size())) return out;

  double total = 0.0;
  for (std::size_t k = 0; k < costs.size(); ++k) {
    if (!std::isfinite(costs[k])) continue;
    out.weights[k] = std::exp(-(costs[k] - out.rho) / lambda);
    total += out.weights[k];
  }
  for (double& w : out.weights) w /= total;
  return out;
}

Vector WeightedUpdate(const Vector& theta_bar, const Matrix& perturbations,
                      std::span<const double> weights) {
  Vector delta = Vector::Zero(theta_bar.size());
  for (int k = 0; k < perturbations.cols(); ++k) {
    if (weights[k] == 0.0) continue;
    for (int m = 0; m < theta_bar.size(); ++m) {
      delta[m] += weights[k] * perturbations(m, k);
    }
  }
  return theta_bar + delta;
}

MppiSolver::MppiSolver(OcpProblem problem, Parametrization policy,
                       SamplerConfig sampler, SolverOptions options)
    : problem_(std::move(problem)),
      policy_(std::move(policy)),
      sampler_(std::move(sampler)),
      options_(options) {
  problem_.Validate(policy_);
  sampler_.Validate(policy_.dim());
  if (options_.workers < 1) throw ConfigurationError("workers must be >= 1");
}

SolveOutput MppiSolver::Solve(const Vector& theta_bar, const Vector& x0,
                              double time) {
  SolveOutput out = Solve(theta_bar, x0, time, iteration_);
  ++iteration_;
  return out;
}

SolveOutput MppiSolver::Solve(const Vector& theta_bar, const Vector& x0,
                              double time, std::uint64_t iteration) const {
  const int num_params = policy_.dim();
  const int nx = problem_.state_dim();
  const int num_samples = sampler_.num_samples;
  if (theta_bar.size() != num_params) {
    throw ConfigurationError("theta_bar length does not match parametrization");
  }
  if (x0.size() != nx) throw ConfigurationError("x0 has wrong dimension");

  OcpProblem problem = problem_;
  problem.start_time = time;

  SolveOutput out;
  out.iteration = iteration;
  out.perturbations.resize(num_params, num_samples);
  out.costs.assign(num_samples, 0.0);
  const bool gradients = options_.compute_gradients;
  // per-sample rows are written from worker threads; keep them contiguous
  Matrix grad_rows;
  if (gradients) grad_rows.resize(nx, num_samples);

  std::exception_ptr failure;
#pragma omp parallel num_threads(options_.workers)
  {
    RolloutWorkspace ws;
    std::vector<double> theta(num_params);
#pragma omp for schedule(static)
    for (int k = 0; k < num_samples; ++k) {
      try {
        std::span<double> delta(out.perturbations.col(k).data(),
                                static_cast<std::size_t>(num_params));
        FillSample(sampler_, iteration, k, delta);
        for (int m = 0; m < num_params; ++m) {
          theta[m] = theta_bar[m] + delta[m];
        }
        if (gradients) {
          out.costs[k] = RolloutCostAndGradient(
              problem, policy_, theta, AsSpan(x0), ws,
              {grad_rows.col(k).data(), static_cast<std::size_t>(nx)},
              options_.gradient);
        } else {
          out.costs[k] = RolloutCost(problem, policy_, theta, AsSpan(x0), ws);
        }
      } catch (...) {
#pragma omp critical
        failure = std::current_exception();
      }
    }
  }
  if (failure) std::rethrow_exception(failure);
  if (gradients) out.gradients = grad_rows.transpose();

  Weights w = ComputeWeights(out.costs, sampler_.lambda);
  if (w.nonfinite == num_samples) {
    throw SolverFailure("all " + std::to_string(num_samples) +
                        " rollouts are non-finite");
  }
  out.weights = std::move(w.weights);
  out.rho = w.rho;
  out.nonfinite = w.nonfinite;
  double sum_sq = 0.0;
  for (double wk : out.weights) sum_sq += wk * wk;
  out.effective_samples = 1.0 / sum_sq;

  out.theta_star = WeightedUpdate(theta_bar, out.perturbations, out.weights);
  out.u_star.resize(problem.input_dim());
  problem.StageInput(policy_, AsSpan(out.theta_star), 0, AsSpan(out.u_star));
  out.nominal = Rollout(problem, policy_, out.theta_star, x0);
  return out;
}

}  // namespace fmppi
