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

#include "fmppi/models/quadrotor.h"

#include <cmath>

namespace fmppi {

void QuadrotorParams::Validate() const {
  if (!(mass > 0.0)) throw ConfigurationError("quadrotor mass must be > 0");
  for (double i : inertia) {
    if (!(i > 0.0)) throw ConfigurationError("quadrotor inertia must be > 0");
  }
  if (!(arm_length > 0.0) || !(thrust_coefficient > 0.0) ||
      !(moment_ratio > 0.0)) {
    throw ConfigurationError("quadrotor geometry/aero constants must be > 0");
  }
  if (!(min_speed >= 0.0 && min_speed <= max_speed)) {
    throw ConfigurationError("quadrotor rotor speed bounds are inconsistent");
  }
}

Quadrotor::Quadrotor(QuadrotorParams params) : params_(params) {
  params_.Validate();
}

InputBounds Quadrotor::input_bounds() const {
  return {Vector::Constant(4, params_.min_speed),
          Vector::Constant(4, params_.max_speed)};
}

void Quadrotor::Normalize(std::span<double> x) const {
  double norm = 0.0;
  for (int i = kQuaternion; i < kQuaternion + 4; ++i) norm += x[i] * x[i];
  norm = std::sqrt(norm);
  if (!(norm > 0.0)) return;
  for (int i = kQuaternion; i < kQuaternion + 4; ++i) x[i] /= norm;
}

Vector Quadrotor::HoverState(double x, double y, double z) {
  Vector state = Vector::Zero(13);
  state[0] = x;
  state[1] = y;
  state[2] = z;
  state[kQuaternion] = 1.0;
  return state;
}

}  // namespace fmppi
