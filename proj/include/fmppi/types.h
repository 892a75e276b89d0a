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

#ifndef FMPPI_TYPES_H_
#define FMPPI_TYPES_H_

#include <span>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace fmppi {

using Vector = Eigen::VectorXd;
using RowVector = Eigen::RowVectorXd;
using Matrix = Eigen::MatrixXd;

template <typename Derived>
std::span<double> AsSpan(Eigen::PlainObjectBase<Derived>& v) {
  return {v.data(), static_cast<std::size_t>(v.size())};
}
template <typename Derived>
std::span<const double> AsSpan(const Eigen::PlainObjectBase<Derived>& v) {
  return {v.data(), static_cast<std::size_t>(v.size())};
}

// ----- errors ----- //

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// dimension mismatch or invalid settings
class ConfigurationError : public Error {
 public:
  using Error::Error;
};

// argument outside the domain of an operation (e.g. decode time)
class DomainError : public Error {
 public:
  using Error::Error;
};

// non-finite state during a rollout
class RolloutDivergedError : public Error {
 public:
  explicit RolloutDivergedError(int step)
      : Error("rollout diverged at step " + std::to_string(step)),
        step_(step) {}
  int step() const { return step_; }

 private:
  int step_;
};

// every sampled rollout was non-finite
class SolverFailure : public Error {
 public:
  using Error::Error;
};

// non-finite Jacobian during tangent propagation
class GradientFailure : public Error {
 public:
  GradientFailure(int step, const std::string& what)
      : Error(what + " (step " + std::to_string(step) + ")"), step_(step) {}
  int step() const { return step_; }

 private:
  int step_;
};

// Riccati iteration did not converge
class OracleFailure : public Error {
 public:
  using Error::Error;
};

// Euler-rate map evaluated too close to gimbal lock
class SingularityError : public Error {
 public:
  using Error::Error;
};

}  // namespace fmppi

#endif  // FMPPI_TYPES_H_
