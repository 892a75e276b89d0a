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

#ifndef FMPPI_MODELS_DOUBLE_INTEGRATOR_H_
#define FMPPI_MODELS_DOUBLE_INTEGRATOR_H_

#include "fmppi/model.h"

namespace fmppi {

// State (p, v), input acceleration a. The Euler step gives
// A = [[1, dt], [0, 1]], B = [[0], [dt]].
class DoubleIntegrator : public ModelBase<DoubleIntegrator, 2, 1> {
 public:
  explicit DoubleIntegrator(double input_limit = 1e6, double mass = 1.0)
      : input_limit_(input_limit), mass_(mass) {}

  std::string_view name() const override { return "double-integrator"; }

  InputBounds input_bounds() const override {
    return {Vector::Constant(1, -input_limit_),
            Vector::Constant(1, input_limit_)};
  }

  // discrete matrices for a given step
  static Matrix A(double dt) {
    Matrix a(2, 2);
    a << 1.0, dt, 0.0, 1.0;
    return a;
  }
  static Matrix B(double dt) {
    Matrix b(2, 1);
    b << 0.0, dt;
    return b;
  }

  template <typename T>
  void EulerStep(const T* x, const T* u, double /*t*/, double dt,
                 const Wrench* wrench, T* x_next) const {
    T accel = u[0];
    if (wrench) accel = accel + wrench->force[0] / mass_;
    x_next[0] = x[0] + dt * x[1];
    x_next[1] = x[1] + dt * accel;
  }

 private:
  double input_limit_;
  double mass_;
};

}  // namespace fmppi

#endif  // FMPPI_MODELS_DOUBLE_INTEGRATOR_H_
