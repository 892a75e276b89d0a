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

#ifndef FMPPI_SOLVER_H_
#define FMPPI_SOLVER_H_

#include <cstdint>
#include <span>
#include <vector>

#include "fmppi/gradient.h"
#include "fmppi/policy.h"
#include "fmppi/problem.h"
#include "fmppi/types.h"

namespace fmppi {

struct SamplerConfig {
  int num_samples = 2;  // K
  Vector covariance;    // diagonal of Sigma, one entry per parameter
  double lambda = 1.0;  // temperature
  std::uint64_t seed = 0;

  void Validate(int num_params) const;
};

// K perturbations as columns of an n_theta x K matrix. Column k is drawn
// from its own stream seeded by (seed, iteration, k); column 0 is zero so
// the nominal parameters are always part of the mixture.
Matrix SamplePerturbations(const SamplerConfig& config, int num_params,
                           std::uint64_t iteration);

struct Weights {
  std::vector<double> weights;
  double rho = 0.0;        // minimum finite cost
  int nonfinite = 0;       // samples excluded from the normalization
};

// w_k = exp(-(J_k - rho) / lambda) / sum_j exp(-(J_j - rho) / lambda).
// Non-finite costs get weight zero and are counted.
Weights ComputeWeights(std::span<const double> costs, double lambda);

// theta* = theta_bar + sum_k w_k dtheta_k, summed in ascending k.
Vector WeightedUpdate(const Vector& theta_bar, const Matrix& perturbations,
                      std::span<const double> weights);

struct SolverOptions {
  int workers = 1;
  bool compute_gradients = false;
  GradientOptions gradient;
};

struct SolveOutput {
  Vector theta_star;
  Vector u_star;           // clip(pi(theta*, t_0))
  Trajectory nominal;      // rollout under theta* from x0
  std::vector<double> weights;
  std::vector<double> costs;
  double rho = 0.0;
  int nonfinite = 0;
  double effective_samples = 0.0;  // 1 / sum w^2
  std::uint64_t iteration = 0;
  Matrix perturbations;    // n_theta x K
  Matrix gradients;        // K x n_x, rows dJ_k/dx0 (empty without gains)
};

class MppiSolver {
 public:
  MppiSolver(OcpProblem problem, Parametrization policy, SamplerConfig sampler,
             SolverOptions options = {});

  // Samples with the internal iteration counter, then advances it.
  SolveOutput Solve(const Vector& theta_bar, const Vector& x0, double time);

  SolveOutput Solve(const Vector& theta_bar, const Vector& x0, double time,
                    std::uint64_t iteration) const;

  const OcpProblem& problem() const { return problem_; }
  const Parametrization& policy() const { return policy_; }
  const SamplerConfig& sampler() const { return sampler_; }
  const SolverOptions& options() const { return options_; }

  void set_cost(std::shared_ptr<const Cost> cost) { problem_.cost = std::move(cost); }
  void set_compute_gradients(bool on) { options_.compute_gradients = on; }
  void set_workers(int workers) { options_.workers = workers; }
  std::uint64_t iteration() const { return iteration_; }

 private:
  OcpProblem problem_;
  Parametrization policy_;
  SamplerConfig sampler_;
  SolverOptions options_;
  std::uint64_t iteration_ = 0;
};

}  // namespace fmppi

#endif  // FMPPI_SOLVER_H_
