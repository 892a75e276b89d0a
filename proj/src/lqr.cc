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

#include "fmppi/lqr.h"

#include <cmath>

#include <Eigen/Eigenvalues>

namespace fmppi {
namespace {

Matrix RiccatiMap(const LqrProblem& p, const Matrix& s) {
  const Matrix bts = p.b.transpose() * s;
  const Matrix gram = p.r + bts * p.b;
  const Matrix btsa = bts * p.a;
  return p.q + p.a.transpose() * s * p.a -
         btsa.transpose() * gram.ldlt().solve(btsa);
}

}  // namespace

void LqrProblem::Validate() const {
  const auto n = a.rows();
  if (a.cols() != n || b.rows() != n || q.rows() != n || q.cols() != n ||
      r.rows() != b.cols() || r.cols() != b.cols()) {
    throw ConfigurationError("LQR matrices have inconsistent shapes");
  }
}

LqrSolution SolveDare(const LqrProblem& problem, double tol, int max_iter) {
  problem.Validate();
  if (!(tol > 0.0)) throw ConfigurationError("DARE tolerance must be > 0");
  Matrix s = problem.q;
  for (int it = 1; it <= max_iter; ++it) {
    Matrix next = RiccatiMap(problem, s);
    next = 0.5 * (next + next.transpose()).eval();
    if (!next.allFinite()) {
      throw OracleFailure("Riccati iteration produced non-finite values");
    }
    const double delta = (next - s).cwiseAbs().maxCoeff();
    s = std::move(next);
    if (delta < tol) {
      LqrSolution out;
      out.s = s;
      out.gain = RiccatiGain(problem, s);
      out.iterations = it;
      out.residual = DareResidual(problem, s);
      return out;
    }
  }
  throw OracleFailure("Riccati iteration did not converge in " +
                      std::to_string(max_iter) + " iterations");
}

Matrix RiccatiGain(const LqrProblem& problem, const Matrix& s) {
  const Matrix bts = problem.b.transpose() * s;
  const Matrix gram = problem.r + bts * problem.b;
  return -gram.ldlt().solve(bts * problem.a);
}

double DareResidual(const LqrProblem& problem, const Matrix& s) {
  return (RiccatiMap(problem, s) - s).cwiseAbs().maxCoeff();
}

double SpectralRadius(const Matrix& m) {
  if (m.rows() != m.cols()) {
    throw ConfigurationError("spectral radius needs a square matrix");
  }
  Eigen::EigenSolver<Matrix> solver(m, false);
  return solver.eigenvalues().cwiseAbs().maxCoeff();
}

double QuadraticForm(const Matrix& s, const Vector& x) {
  return x.dot(s * x);
}

}  // namespace fmppi
