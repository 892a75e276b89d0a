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

#ifndef FMPPI_LQR_H_
#define FMPPI_LQR_H_

#include "fmppi/types.h"

namespace fmppi {

struct LqrProblem {
  Matrix a;
  Matrix b;
  Matrix q;
  Matrix r;

  void Validate() const;
};

// Infinite-horizon discrete LQR, control law u = gain * x.
struct LqrSolution {
  Matrix s;
  Matrix gain;
  int iterations = 0;
  double residual = 0.0;
};

// Riccati fixed-point iteration
//   S <- Q + A'SA - A'SB (R + B'SB)^-1 B'SA,   S <- (S + S')/2
// until ||dS||_inf < tol. Throws OracleFailure if it does not converge.
LqrSolution SolveDare(const LqrProblem& problem, double tol = 1e-12,
                      int max_iter = 100000);

// F = -(R + B'SB)^-1 B'SA
Matrix RiccatiGain(const LqrProblem& problem, const Matrix& s);

// ||Q + A'SA - S - A'SB (R + B'SB)^-1 B'SA||_inf (max abs entry)
double DareResidual(const LqrProblem& problem, const Matrix& s);

double SpectralRadius(const Matrix& m);

// x' S x
double QuadraticForm(const Matrix& s, const Vector& x);

}  // namespace fmppi

#endif  // FMPPI_LQR_H_
