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

#ifndef FMPPI_MODELS_QUADRUPED_H_
#define FMPPI_MODELS_QUADRUPED_H_

#include <array>
#include <cmath>
#include <numbers>
#include <optional>

#include "fmppi/model.h"
#include "fmppi/models/gait.h"
#include "fmppi/types.h"

namespace fmppi {

struct QuadrupedParams {
  double mass = 24.0;
  std::array<double, 3> inertia = {0.25, 1.0, 1.0};
  double gravity = 9.81;
  double friction = 0.5;
  double max_normal_force = 500.0;
  // CoM-to-foot offsets in the yaw-aligned body frame, leg order FL FR RL RR
  std::array<std::array<double, 3>, 4> foot_offsets = {{{0.24, 0.13, -0.33},
                                                         {0.24, -0.13, -0.33},
                                                         {-0.24, 0.13, -0.33},
                                                         {-0.24, -0.13, -0.33}}};
  double gait_period = 0.5;
  double gait_duty = 0.6;
  std::optional<ContactFlags> fixed_contacts;  // overrides the gait
  double max_pitch = 85.0 * std::numbers::pi / 180.0;

  void Validate() const;
  bool operator==(const QuadrupedParams&) const = default;
};

// Single rigid body trunk driven by four ground reaction forces:
//   r_dot   = v
//   v_dot   = 1/m sum_i d_i f_i + g
//   phi_dot = E'^-1(phi) w                      (ZYX roll-pitch-yaw)
//   w_dot   = I^-1 (-w x I w + R(phi)^T sum_i d_i p_i x f_i)
// with x = (r, v, phi, w) in R^12, u = (f_FL, f_FR, f_RL, f_RR) in world
// frame, d_i from the trot schedule and p_i the yaw-rotated foot offsets.
class SrbdQuadruped : public ModelBase<SrbdQuadruped, 12, 12> {
 public:
  static constexpr int kPosition = 0;
  static constexpr int kVelocity = 3;
  static constexpr int kEuler = 6;
  static constexpr int kAngularVelocity = 9;

  explicit SrbdQuadruped(QuadrupedParams params = {});

  std::string_view name() const override { return "srbd-quadruped"; }
  const QuadrupedParams& params() const { return params_; }

  ContactFlags Contacts(double t) const;

  InputBounds input_bounds() const override;

  // fz in [0, f_max], then |fx|, |fy| <= mu fz per leg
  void ClipInput(std::span<double> u) const override;

  // per-stance-leg share of the weight, zero on swing legs
  Vector GravityCompensation(double t) const;
  void GravityCompensation(double t, std::span<double> u) const;  // u has 12 entries

  template <typename T>
  void EulerStep(const T* x, const T* u, double t, double dt,
                 const Wrench* wrench, T* x_next) const {
    using std::cos;
    using std::sin;
    using std::tan;
    const QuadrupedParams& p = params_;
    const ContactFlags contact = Contacts(t);

    const T& roll = x[6];
    const T& pitch = x[7];
    const T& yaw = x[8];
    if (std::abs(Value(pitch)) > p.max_pitch) {
      throw SingularityError("pitch beyond Euler-rate singularity guard");
    }
    const T cr = cos(roll), sr = sin(roll);
    const T cp = cos(pitch), sp = sin(pitch);
    const T cy = cos(yaw), sy = sin(yaw);

    T force[3] = {0.0, 0.0, 0.0};
    T moment[3] = {0.0, 0.0, 0.0};  // world frame
    for (int leg = 0; leg < 4; ++leg) {
      if (!contact[leg]) continue;
      const auto& o = p.foot_offsets[leg];
      const T px = cy * o[0] - sy * o[1];
      const T py = sy * o[0] + cy * o[1];
      const double pz = o[2];
      const T& fx = u[3 * leg];
      const T& fy = u[3 * leg + 1];
      const T& fz = u[3 * leg + 2];
      force[0] += fx;
      force[1] += fy;
      force[2] += fz;
      moment[0] += py * fz - pz * fy;
      moment[1] += pz * fx - px * fz;
      moment[2] += px * fy - py * fx;
    }

    // R = Rz(yaw) Ry(pitch) Rx(roll); body torque = R^T moment
    const T r00 = cy * cp, r01 = cy * sp * sr - sy * cr,
            r02 = cy * sp * cr + sy * sr;
    const T r10 = sy * cp, r11 = sy * sp * sr + cy * cr,
            r12 = sy * sp * cr - cy * sr;
    const T r20 = -sp, r21 = cp * sr, r22 = cp * cr;
    T tau[3] = {r00 * moment[0] + r10 * moment[1] + r20 * moment[2],
                r01 * moment[0] + r11 * moment[1] + r21 * moment[2],
                r02 * moment[0] + r12 * moment[1] + r22 * moment[2]};

    T acc[3] = {force[0] / p.mass, force[1] / p.mass,
                force[2] / p.mass - p.gravity};
    if (wrench) {
      for (int i = 0; i < 3; ++i) {
        acc[i] = acc[i] + wrench->force[i] / p.mass;
        tau[i] = tau[i] + wrench->torque[i];
      }
    }

    const T& wx = x[9];
    const T& wy = x[10];
    const T& wz = x[11];
    const double ix = p.inertia[0], iy = p.inertia[1], iz = p.inertia[2];
    const T gyro[3] = {wy * (iz * wz) - wz * (iy * wy),
                       wz * (ix * wx) - wx * (iz * wz),
                       wx * (iy * wy) - wy * (ix * wx)};

    // body rates to ZYX Euler rates
    const T tp = tan(pitch);
    const T d_roll = wx + sr * tp * wy + cr * tp * wz;
    const T d_pitch = cr * wy - sr * wz;
    const T d_yaw = (sr * wy + cr * wz) / cp;

    for (int i = 0; i < 3; ++i) {
      x_next[i] = x[i] + dt * x[3 + i];
      x_next[3 + i] = x[3 + i] + dt * acc[i];
    }
    x_next[6] = roll + dt * d_roll;
    x_next[7] = pitch + dt * d_pitch;
    x_next[8] = yaw + dt * d_yaw;
    x_next[9] = wx + dt * ((tau[0] - gyro[0]) / ix);
    x_next[10] = wy + dt * ((tau[1] - gyro[1]) / iy);
    x_next[11] = wz + dt * ((tau[2] - gyro[2]) / iz);
  }

 private:
  QuadrupedParams params_;
};

}  // namespace fmppi

#endif  // FMPPI_MODELS_QUADRUPED_H_
