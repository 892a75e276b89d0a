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

#ifndef FMPPI_GAINS_H_
#define FMPPI_GAINS_H_

#include <span>

#include "fmppi/policy.h"
#include "fmppi/solver.h"
#include "fmppi/types.h"

namespace fmppi {

// Feedback gain F = d u* / d x0 (n_u x n_x) of the importance-sampled
// solution:
//
//   F = -sum_k (dpi/dtheta dtheta_k) (w_k / lambda) (g_k - g_bar) + dpi/dx0
//
// with g_k = dJ_k/dx0 (row k of `gradients`) and g_bar = sum_j w_j g_j.
// The minus sign comes from d exp(-J/lambda) / dJ. Samples are reduced in
// ascending index.
Matrix AssembleGains(std::span<const double> weights, const Matrix& gradients,
                     const Matrix& perturbations,
                     const Parametrization& policy, double lambda);

// Direct-sampling specialization: dpi/dtheta = (I, 0, ..., 0), so only the
// first input block of each perturbation enters and dpi/dx0 = 0.
Matrix AssembleGainsDirect(std::span<const double> weights,
                           const Matrix& gradients,
                           const Matrix& perturbations, int input_dim,
                           double lambda);

// Convenience overload on a solver result (requires gradients).
Matrix AssembleGains(const SolveOutput& solve, const Parametrization& policy,
                     double lambda);

}  // namespace fmppi

#endif  // FMPPI_GAINS_H_
