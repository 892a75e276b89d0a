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

#include "fmppi/gains.h"

#include <vector>

namespace fmppi {

namespace {

RowVector WeightedMeanGradient(std::span<const double> weights,
                               const Matrix& gradients) {
  RowVector mean = RowVector::Zero(gradients.cols());
  for (int k = 0; k < gradients.rows(); ++k) {
    if (weights[k] == 0.0) continue;
    for (int j = 0; j < gradients.cols(); ++j) {
      mean[j] += weights[k] * gradients(k, j);
    }
  }
  return mean;
}

// F -= column * scale * (g_k - g_bar)
void SubtractOuterProduct(const std::vector<double>& column, double scale,
                          const Matrix& gradients, int k,
                          const RowVector& mean, Matrix& gain) {
  for (int c = 0; c < gain.rows(); ++c) {
    const double a = column[c] * scale;
    for (int j = 0; j < gain.cols(); ++j) {
      gain(c, j) -= a * (gradients(k, j) - mean[j]);
    }
  }
}

void CheckShapes(std::span<const double> weights, const Matrix& gradients,
                 const Matrix& perturbations) {
  if (static_cast<Eigen::Index>(weights.size()) != gradients.rows() ||
      gradients.rows() != perturbations.cols()) {
    throw ConfigurationError(
        "weights, gradients and perturbations are not index-aligned");
  }
}

}  // namespace

Matrix AssembleGains(std::span<const double> weights, const Matrix& gradients,
                     const Matrix& perturbations,
                     const Parametrization& policy, double lambda) {
  CheckShapes(weights, gradients, perturbations);
  if (perturbations.rows() != policy.dim()) {
    throw ConfigurationError("perturbation length does not match policy");
  }
  const int nu = policy.input_dim();
  const Matrix decode = policy.DecodeJacobianTheta(0.0);
  const RowVector mean = WeightedMeanGradient(weights, gradients);

  Matrix gain = policy.DecodeJacobianState(static_cast<int>(gradients.cols()));
  std::vector<double> column(nu);
  for (int k = 0; k < perturbations.cols(); ++k) {
    if (weights[k] == 0.0) continue;
    for (int c = 0; c < nu; ++c) {
      double s = 0.0;
      for (int m = 0; m < perturbations.rows(); ++m) {
        s += decode(c, m) * perturbations(m, k);
      }
      column[c] = s;
    }
    SubtractOuterProduct(column, weights[k] / lambda, gradients, k, mean,
                         gain);
  }
  return gain;
}

Matrix AssembleGainsDirect(std::span<const double> weights,
                           const Matrix& gradients,
                           const Matrix& perturbations, int input_dim,
                           double lambda) {
  CheckShapes(weights, gradients, perturbations);
  const RowVector mean = WeightedMeanGradient(weights, gradients);
  Matrix gain = Matrix::Zero(input_dim, gradients.cols());
  std::vector<double> column(input_dim);
  for (int k = 0; k < perturbations.cols(); ++k) {
    if (weights[k] == 0.0) continue;
    for (int c = 0; c < input_dim; ++c) column[c] = perturbations(c, k);
    SubtractOuterProduct(column, weights[k] / lambda, gradients, k, mean,
                         gain);
  }
  return gain;
}

Matrix AssembleGains(const SolveOutput& solve, const Parametrization& policy,
                     double lambda) {
  if (solve.gradients.rows() == 0) {
    throw ConfigurationError("solve output carries no gradients");
  }
  return AssembleGains(solve.weights, solve.gradients, solve.perturbations,
                       policy, lambda);
}

}  // namespace fmppi
