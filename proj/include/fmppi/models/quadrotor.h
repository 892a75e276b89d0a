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

#ifndef FMPPI_MODELS_QUADROTOR_H_
#define FMPPI_MODELS_QUADROTOR_H_

#include <array>
#include <cmath>

#include "fmppi/model.h"

namespace fmppi {

struct QuadrotorParams {
  double mass = 1.0;                                 // kg
  std::array<double, 3> inertia = {0.01, 0.01, 0.02};  // kg m^2, diagonal
  double arm_length = 0.17;                          // m
  double thrust_coefficient = 6.5e-4;                // N / Hz^2
  double moment_ratio = 0.016;                       // k_m / k_f, m
  double gravity = 9.81;
  double min_speed = 16.0;                           // Hz
  double max_speed = 100.0;                          // Hz

  double HoverSpeed() const {
    return std::sqrt(mass * gravity / (4.0 * thrust_coefficient));
  }
  void Validate() const;
  bool operator==(const QuadrotorParams&) const = default;
};

// Rigid-body quadrotor, x = (r, v, q, w) with q = (qw, qx, qy, qz) and w in
// body frame, inputs are the four rotor speeds. Rotors sit on the body axes
// in the order +x, +y, -x, -y with alternating spin:
//   f     = k_f sum s_i,          s_i = u_i^2
//   tau_x = l k_f (s_2 - s_4)
//   tau_y = l k_f (s_3 - s_1)
//   tau_z = k_m (s_1 - s_2 + s_3 - s_4)
// The quaternion is renormalized after every Euler step.
class Quadrotor : public ModelBase<Quadrotor, 13, 4> {
 public:
  static constexpr int kPosition = 0;
  static constexpr int kVelocity = 3;
  static constexpr int kQuaternion = 6;
  static constexpr int kAngularVelocity = 10;

  explicit Quadrotor(QuadrotorParams params = {});

  std::string_view name() const override { return "quadrotor"; }
  const QuadrotorParams& params() const { return params_; }

  InputBounds input_bounds() const override;
  void Normalize(std::span<double> x) const override;

  Vector HoverInput() const {
    return Vector::Constant(4, params_.HoverSpeed());
  }
  // level hover at position r
  static Vector HoverState(double x, double y, double z);

  // (f, tau) from rotor speeds
  template <typename T>
  void Allocation(const T* u, T* wrench) const {
    const double kf = params_.thrust_coefficient;
    const double km = params_.moment_ratio * kf;
    const double l = params_.arm_length;
    const T s1 = u[0] * u[0], s2 = u[1] * u[1], s3 = u[2] * u[2],
            s4 = u[3] * u[3];
    wrench[0] = kf * (s1 + s2 + s3 + s4);
    wrench[1] = l * kf * (s2 - s4);
    wrench[2] = l * kf * (s3 - s1);
    wrench[3] = km * (s1 - s2 + s3 - s4);
  }

  template <typename T>
  void EulerStep(const T* x, const T* u, double /*t*/, double dt,
                 const Wrench* wrench, T* x_next) const {
    using std::sqrt;
    const QuadrotorParams& p = params_;
    T ft[4];
    Allocation(u, ft);
    const T& qw = x[6];
    const T& qx = x[7];
    const T& qy = x[8];
    const T& qz = x[9];
    const T& wx = x[10];
    const T& wy = x[11];
    const T& wz = x[12];

    // R(q) e_z scaled by f / m
    const T fm = ft[0] / p.mass;
    T acc[3] = {2.0 * (qx * qz + qw * qy) * fm,
                2.0 * (qy * qz - qw * qx) * fm,
                (1.0 - 2.0 * (qx * qx + qy * qy)) * fm - p.gravity};
    if (wrench) {
      for (int i = 0; i < 3; ++i) acc[i] = acc[i] + wrench->force[i] / p.mass;
    }

    // q_dot = 1/2 q (x) (0, w)
    const T dqw = -0.5 * (qx * wx + qy * wy + qz * wz);
    const T dqx = 0.5 * (qw * wx + qy * wz - qz * wy);
    const T dqy = 0.5 * (qw * wy + qz * wx - qx * wz);
    const T dqz = 0.5 * (qw * wz + qx * wy - qy * wx);

    // w_dot = I^-1 (tau - w x I w)
    const double ix = p.inertia[0], iy = p.inertia[1], iz = p.inertia[2];
    T tau[3] = {ft[1] - (wy * (iz * wz) - wz * (iy * wy)),
                ft[2] - (wz * (ix * wx) - wx * (iz * wz)),
                ft[3] - (wx * (iy * wy) - wy * (ix * wx))};
    if (wrench) {
      for (int i = 0; i < 3; ++i) tau[i] = tau[i] + wrench->torque[i];
    }

    for (int i = 0; i < 3; ++i) {
      x_next[i] = x[i] + dt * x[3 + i];
      x_next[3 + i] = x[3 + i] + dt * acc[i];
    }
    const T nqw = qw + dt * dqw;
    const T nqx = qx + dt * dqx;
    const T nqy = qy + dt * dqy;
    const T nqz = qz + dt * dqz;
    const T norm = sqrt(nqw * nqw + nqx * nqx + nqy * nqy + nqz * nqz);
    x_next[6] = nqw / norm;
    x_next[7] = nqx / norm;
    x_next[8] = nqy / norm;
    x_next[9] = nqz / norm;
    x_next[10] = wx + dt * (tau[0] / ix);
    x_next[11] = wy + dt * (tau[1] / iy);
    x_next[12] = wz + dt * (tau[2] / iz);
  }

 private:
  QuadrotorParams params_;
};

}  // namespace fmppi

#endif  // FMPPI_MODELS_QUADROTOR_H_
