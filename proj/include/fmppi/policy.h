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

#ifndef FMPPI_POLICY_H_
#define FMPPI_POLICY_H_

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fmppi/types.h"

namespace fmppi {

enum class PolicyKind { kZeroOrder, kLinearSpline, kCubicSpline };

std::string_view ToString(PolicyKind kind);
PolicyKind ParsePolicyKind(std::string_view name);

// Time-only input parametrization u = pi(theta, t) over one horizon.
//
// theta is stored knot-major: theta[j * n_u + c] is channel c at knot j.
// Zero-order sampling has one knot per stage; splines place num_knots knots
// equally spaced over [t_0, t_{N-1}] (relative time, t_0 = 0). Every decode
// is linear in theta, so decoding reduces to a fixed weight row per time.
class Parametrization {
 public:
  Parametrization(PolicyKind kind, int input_dim, int horizon, double dt,
                  int num_knots = 0);

  static Parametrization ZeroOrder(int input_dim, int horizon, double dt) {
    return Parametrization(PolicyKind::kZeroOrder, input_dim, horizon, dt);
  }
  static Parametrization LinearSpline(int input_dim, int horizon, double dt,
                                      int num_knots) {
    return Parametrization(PolicyKind::kLinearSpline, input_dim, horizon, dt,
                           num_knots);
  }
  static Parametrization CubicSpline(int input_dim, int horizon, double dt,
                                     int num_knots) {
    return Parametrization(PolicyKind::kCubicSpline, input_dim, horizon, dt,
                           num_knots);
  }

  PolicyKind kind() const { return kind_; }
  int input_dim() const { return input_dim_; }
  int horizon() const { return horizon_; }
  int num_knots() const { return num_knots_; }
  int dim() const { return num_knots_ * input_dim_; }
  double dt() const { return dt_; }
  double final_time() const { return (horizon_ - 1) * dt_; }
  const std::vector<double>& knot_times() const { return knot_times_; }

  // Every in-scope parametrization ignores the state.
  bool state_dependent() const { return false; }

  // Input at relative time t in [t_0, t_{N-1}]; throws DomainError otherwise.
  Vector Decode(const Vector& theta, double t) const;

  // Input at stage i using precomputed weights; no allocation.
  void DecodeStage(std::span<const double> theta, int stage,
                   std::span<double> u) const;

  // d pi / d theta at t0 (n_u x dim).
  Matrix DecodeJacobianTheta(double t0 = 0.0) const;

  // d pi / d x_0 (n_u x n_x); zero for time-only parametrizations.
  Matrix DecodeJacobianState(int state_dim) const;

  // Interpolation weight of each knot at relative time t.
  std::vector<double> Weights(double t) const;

  // theta that decodes to the constant input u.
  Vector Constant(const Vector& u) const;

  // Warm start for the next solve, shifted by `shift` seconds. Zero-order
  // moves blocks by round(shift / dt) stages and repeats the last block;
  // splines resample the decoded trajectory at knot times + shift (held
  // constant past t_{N-1}).
  Vector WarmStartShift(const Vector& theta_star, double shift) const;
  Vector WarmStartShift(const Vector& theta_star) const {
    return WarmStartShift(theta_star, dt_);
  }

 private:
  void CheckTheta(std::size_t size) const;

  PolicyKind kind_;
  int input_dim_;
  int horizon_;
  double dt_;
  int num_knots_;
  std::vector<double> knot_times_;
  Matrix moment_map_;     // knot values -> natural-spline second derivatives
  Matrix stage_weights_;  // horizon x num_knots
};

}  // namespace fmppi

#endif  // FMPPI_POLICY_H_
