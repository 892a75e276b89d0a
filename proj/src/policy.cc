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

#include "fmppi/policy.h"

#include <algorithm>
#include <cmath>
#include <string>

namespace fmppi {

std::string_view ToString(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::kZeroOrder:
      return "zero-order";
    case PolicyKind::kLinearSpline:
      return "linear-spline";
    case PolicyKind::kCubicSpline:
      return "cubic-spline";
  }
  return "unknown";
}

PolicyKind ParsePolicyKind(std::string_view name) {
  if (name == "zero-order") return PolicyKind::kZeroOrder;
  if (name == "linear-spline") return PolicyKind::kLinearSpline;
  if (name == "cubic-spline") return PolicyKind::kCubicSpline;
  throw ConfigurationError("unknown parametrization '" + std::string(name) +
                           "'");
}

Parametrization::Parametrization(PolicyKind kind, int input_dim, int horizon,
                                 double dt, int num_knots)
    : kind_(kind),
      input_dim_(input_dim),
      horizon_(horizon),
      dt_(dt),
      num_knots_(num_knots) {
  if (input_dim < 1) throw ConfigurationError("input_dim must be >= 1");
  if (horizon < 1) throw ConfigurationError("horizon must be >= 1");
  if (!(dt > 0.0)) throw ConfigurationError("dt must be > 0");

  if (kind == PolicyKind::kZeroOrder) {
    num_knots_ = horizon;
    for (int i = 0; i < horizon; ++i) knot_times_.push_back(i * dt);
  } else {
    if (num_knots < 2) {
      throw ConfigurationError("splines need at least 2 knots");
    }
    if (horizon < 2) {
      throw ConfigurationError("splines need a horizon of at least 2 steps");
    }
    for (int j = 0; j < num_knots; ++j) {
      knot_times_.push_back(final_time() * j / (num_knots - 1));
    }
  }

  // natural end conditions: M_0 = M_{n-1} = 0, interior rows
  // M_{j-1} + 4 M_j + M_{j+1} = 6 / h^2 (y_{j-1} - 2 y_j + y_{j+1})
  moment_map_ = Matrix::Zero(num_knots_, num_knots_);
  if (kind == PolicyKind::kCubicSpline && num_knots_ > 2) {
    const int m = num_knots_ - 2;
    const double h = final_time() / (num_knots_ - 1);
    Matrix system = Matrix::Zero(m, m);
    Matrix rhs = Matrix::Zero(m, num_knots_);
    for (int r = 0; r < m; ++r) {
      system(r, r) = 4.0;
      if (r > 0) system(r, r - 1) = 1.0;
      if (r + 1 < m) system(r, r + 1) = 1.0;
      rhs(r, r) = 6.0 / (h * h);
      rhs(r, r + 1) = -12.0 / (h * h);
      rhs(r, r + 2) = 6.0 / (h * h);
    }
    moment_map_.middleRows(1, m) = system.partialPivLu().solve(rhs);
  }

  stage_weights_.resize(horizon_, num_knots_);
  for (int i = 0; i < horizon_; ++i) {
    const std::vector<double> w = Weights(i * dt_);
    for (int j = 0; j < num_knots_; ++j) stage_weights_(i, j) = w[j];
  }
}

std::vector<double> Parametrization::Weights(double t) const {
  const double tol = 1e-9 * std::max(1.0, final_time());
  if (!(t >= -tol && t <= final_time() + tol)) {
    throw DomainError("decode time " + std::to_string(t) +
                      " outside [0, " + std::to_string(final_time()) + "]");
  }
  t = std::clamp(t, 0.0, final_time());
  std::vector<double> w(num_knots_, 0.0);

  if (kind_ == PolicyKind::kZeroOrder) {
    const int i = std::min(static_cast<int>(std::floor(t / dt_ + 1e-9)),
                           horizon_ - 1);
    w[i] = 1.0;
    return w;
  }

  for (int j = 0; j < num_knots_; ++j) {
    if (std::abs(t - knot_times_[j]) <= 1e-12 * std::max(1.0, final_time())) {
      w[j] = 1.0;
      return w;
    }
  }

  const double h = final_time() / (num_knots_ - 1);
  const int j = std::min(static_cast<int>(std::floor(t / h)), num_knots_ - 2);
  const double b = (t - knot_times_[j]) / h;
  const double a = 1.0 - b;
  w[j] += a;
  w[j + 1] += b;
  if (kind_ == PolicyKind::kCubicSpline) {
    const double ca = (a * a * a - a) * h * h / 6.0;
    const double cb = (b * b * b - b) * h * h / 6.0;
    for (int k = 0; k < num_knots_; ++k) {
      w[k] += ca * moment_map_(j, k) + cb * moment_map_(j + 1, k);
    }
  }
  return w;
}

void Parametrization::CheckTheta(std::size_t size) const {
  if (static_cast<int>(size) != dim()) {
    throw ConfigurationError("theta has length " + std::to_string(size) +
                             ", parametrization expects " +
                             std::to_string(dim()));
  }
}

Vector Parametrization::Decode(const Vector& theta, double t) const {
  CheckTheta(theta.size());
  const std::vector<double> w = Weights(t);
  Vector u = Vector::Zero(input_dim_);
  for (int j = 0; j < num_knots_; ++j) {
    if (w[j] == 0.0) continue;
    u += w[j] * theta.segment(j * input_dim_, input_dim_);
  }
  return u;
}

void Parametrization::DecodeStage(std::span<const double> theta, int stage,
                                  std::span<double> u) const {
  for (int c = 0; c < input_dim_; ++c) u[c] = 0.0;
  if (kind_ == PolicyKind::kZeroOrder) {
    for (int c = 0; c < input_dim_; ++c) u[c] = theta[stage * input_dim_ + c];
    return;
  }
  for (int j = 0; j < num_knots_; ++j) {
    const double w = stage_weights_(stage, j);
    if (w == 0.0) continue;
    for (int c = 0; c < input_dim_; ++c) u[c] += w * theta[j * input_dim_ + c];
  }
}

Matrix Parametrization::DecodeJacobianTheta(double t0) const {
  const std::vector<double> w = Weights(t0);
  Matrix jac = Matrix::Zero(input_dim_, dim());
  for (int j = 0; j < num_knots_; ++j) {
    for (int c = 0; c < input_dim_; ++c) jac(c, j * input_dim_ + c) = w[j];
  }
  return jac;
}

Matrix Parametrization::DecodeJacobianState(int state_dim) const {
  return Matrix::Zero(input_dim_, state_dim);
}

Vector Parametrization::Constant(const Vector& u) const {
  if (u.size() != input_dim_) {
    throw ConfigurationError("constant input has wrong dimension");
  }
  Vector theta(dim());
  for (int j = 0; j < num_knots_; ++j) {
    theta.segment(j * input_dim_, input_dim_) = u;
  }
  return theta;
}

Vector Parametrization::WarmStartShift(const Vector& theta_star,
                                       double shift) const {
  CheckTheta(theta_star.size());
  Vector shifted(dim());
  if (kind_ == PolicyKind::kZeroOrder) {
    const int steps = static_cast<int>(std::lround(shift / dt_));
    for (int i = 0; i < horizon_; ++i) {
      const int src = std::min(i + steps, horizon_ - 1);
      shifted.segment(i * input_dim_, input_dim_) =
          theta_star.segment(src * input_dim_, input_dim_);
    }
    return shifted;
  }
  for (int j = 0; j < num_knots_; ++j) {
    const double t = std::min(knot_times_[j] + shift, final_time());
    shifted.segment(j * input_dim_, input_dim_) = Decode(theta_star, t);
  }
  return shifted;
}

}  // namespace fmppi
