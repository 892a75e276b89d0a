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

#ifndef FMPPI_MODEL_H_
#define FMPPI_MODEL_H_

#include <algorithm>
#include <array>
#include <span>
#include <string_view>

#include "fmppi/dual.h"
#include "fmppi/types.h"

namespace fmppi {

// per-channel box [lower, upper]
struct InputBounds {
  Vector lower;
  Vector upper;

  void Validate(int input_dim) const;
  void Clip(std::span<double> u) const;
};

// external wrench applied by the plant simulator only
struct Wrench {
  std::array<double, 3> force{};   // world frame, N
  std::array<double, 3> torque{};  // body frame, N m
};

// Discrete-time plant x+ = f(x, u) realized as an explicit Euler step of a
// continuous model. All methods are pure and reentrant.
class Model {
 public:
  virtual ~Model() = default;

  virtual std::string_view name() const = 0;
  virtual int state_dim() const = 0;
  virtual int input_dim() const = 0;

  virtual void Step(std::span<const double> x, std::span<const double> u,
                    double t, double dt, std::span<double> x_next) const = 0;
  virtual void StepDisturbed(std::span<const double> x,
                             std::span<const double> u, double t, double dt,
                             const Wrench& wrench,
                             std::span<double> x_next) const = 0;

  // Steps the state and pushes the column-major n_x x n_x tangent matrix
  // through the state Jacobian: tangent_next = df/dx * tangent.
  virtual void StepTangent(std::span<const double> x,
                           std::span<const double> tangent,
                           std::span<const double> u, double t, double dt,
                           std::span<double> x_next,
                           std::span<double> tangent_next) const = 0;

  // Jacobians of the full step (including any renormalization).
  virtual void Jacobians(const Vector& x, const Vector& u, double t, double dt,
                         Matrix* fx, Matrix* fu) const = 0;

  virtual InputBounds input_bounds() const = 0;

  // Projects u onto the admissible input set. Default: box clip.
  virtual void ClipInput(std::span<double> u) const;

  // Projects x back onto the state manifold (e.g. unit quaternion).
  virtual void Normalize(std::span<double> /*x*/) const {}
};

// Implements the Model interface on top of a templated Euler kernel
//   template <typename T>
//   void EulerStep(const T* x, const T* u, double t, double dt,
//                  const Wrench* wrench, T* x_next) const;
// so that values, tangents and Jacobians all come from one definition.
template <class Derived, int NX, int NU>
class ModelBase : public Model {
 public:
  static constexpr int kStateDim = NX;
  static constexpr int kInputDim = NU;

  int state_dim() const override { return NX; }
  int input_dim() const override { return NU; }

  void Step(std::span<const double> x, std::span<const double> u, double t,
            double dt, std::span<double> x_next) const override {
    derived().template EulerStep<double>(x.data(), u.data(), t, dt, nullptr,
                                         x_next.data());
  }

  void StepDisturbed(std::span<const double> x, std::span<const double> u,
                     double t, double dt, const Wrench& wrench,
                     std::span<double> x_next) const override {
    derived().template EulerStep<double>(x.data(), u.data(), t, dt, &wrench,
                                         x_next.data());
  }

  void StepTangent(std::span<const double> x, std::span<const double> tangent,
                   std::span<const double> u, double t, double dt,
                   std::span<double> x_next,
                   std::span<double> tangent_next) const override {
    using D = Dual<NX>;
    std::array<D, NX> xd;
    for (int j = 0; j < NX; ++j) {
      xd[j].v = x[j];
      for (int k = 0; k < NX; ++k) xd[j].d[k] = tangent[k * NX + j];
    }
    std::array<D, NU> ud;
    for (int j = 0; j < NU; ++j) ud[j].v = u[j];
    std::array<D, NX> out;
    derived().template EulerStep<D>(xd.data(), ud.data(), t, dt, nullptr,
                                    out.data());
    for (int j = 0; j < NX; ++j) {
      x_next[j] = out[j].v;
      for (int k = 0; k < NX; ++k) tangent_next[k * NX + j] = out[j].d[k];
    }
  }

  void Jacobians(const Vector& x, const Vector& u, double t, double dt,
                 Matrix* fx, Matrix* fu) const override {
    using D = Dual<NX + NU>;
    std::array<D, NX> xd;
    std::array<D, NU> ud;
    for (int j = 0; j < NX; ++j) xd[j] = D::Variable(x[j], j);
    for (int j = 0; j < NU; ++j) ud[j] = D::Variable(u[j], NX + j);
    std::array<D, NX> out;
    derived().template EulerStep<D>(xd.data(), ud.data(), t, dt, nullptr,
                                    out.data());
    if (fx) fx->resize(NX, NX);
    if (fu) fu->resize(NX, NU);
    for (int j = 0; j < NX; ++j) {
      for (int k = 0; k < NX; ++k) {
        if (fx) (*fx)(j, k) = out[j].d[k];
      }
      for (int k = 0; k < NU; ++k) {
        if (fu) (*fu)(j, k) = out[j].d[NX + k];
      }
    }
  }

 private:
  const Derived& derived() const { return static_cast<const Derived&>(*this); }
};

}  // namespace fmppi

#endif  // FMPPI_MODEL_H_
