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

#include "fmppi/models/quadruped.h"

#include <algorithm>

namespace fmppi {

void QuadrupedParams::Validate() const {
  if (!(mass > 0.0)) throw ConfigurationError("quadruped mass must be > 0");
  for (double i : inertia) {
    if (!(i > 0.0)) throw ConfigurationError("quadruped inertia must be > 0");
  }
  if (!(friction > 0.0)) throw ConfigurationError("friction must be > 0");
  if (!(max_normal_force > 0.0)) {
    throw ConfigurationError("max normal force must be > 0");
  }
  if (!(gait_period > 0.0) || !(gait_duty > 0.0 && gait_duty <= 1.0)) {
    throw ConfigurationError("gait period must be > 0 and duty in (0, 1]");
  }
  if (!(max_pitch > 0.0 && max_pitch < std::numbers::pi / 2)) {
    throw ConfigurationError("pitch guard must be in (0, pi/2)");
  }
}

SrbdQuadruped::SrbdQuadruped(QuadrupedParams params) : params_(params) {
  params_.Validate();
}

ContactFlags SrbdQuadruped::Contacts(double t) const {
  if (params_.fixed_contacts) return *params_.fixed_contacts;
  return TrotSchedule(t, params_.gait_period, params_.gait_duty);
}

InputBounds SrbdQuadruped::input_bounds() const {
  const double fmax = params_.max_normal_force;
  const double tmax = params_.friction * fmax;
  Vector lower(12), upper(12);
  for (int leg = 0; leg < 4; ++leg) {
    lower.segment<3>(3 * leg) << -tmax, -tmax, 0.0;
    upper.segment<3>(3 * leg) << tmax, tmax, fmax;
  }
  return {lower, upper};
}

void SrbdQuadruped::ClipInput(std::span<double> u) const {
  const double mu = params_.friction;
  for (int leg = 0; leg < 4; ++leg) {
    double* f = u.data() + 3 * leg;
    f[2] = std::clamp(f[2], 0.0, params_.max_normal_force);
    const double limit = mu * f[2];
    f[0] = std::clamp(f[0], -limit, limit);
    f[1] = std::clamp(f[1], -limit, limit);
  }
}

Vector SrbdQuadruped::GravityCompensation(double t) const {
  Vector u(12);
  GravityCompensation(t, AsSpan(u));
  return u;
}

void SrbdQuadruped::GravityCompensation(double t, std::span<double> u) const {
  const ContactFlags contact = Contacts(t);
  const int stance = static_cast<int>(std::count(contact.begin(),
                                                 contact.end(), true));
  std::fill(u.begin(), u.end(), 0.0);
  if (stance == 0) return;
  const double share = params_.mass * params_.gravity / stance;
  for (int leg = 0; leg < 4; ++leg) {
    if (contact[leg]) u[3 * leg + 2] = share;
  }
}

}  // namespace fmppi
