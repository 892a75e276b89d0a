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

#include "fmppi/quadratic_cost.h"

#include <array>
#include <cmath>
#include <limits>

namespace fmppi {

void ObstacleField::Validate() const {
  if (!(inflation >= 0.0)) {
    throw ConfigurationError("obstacle inflation must be >= 0");
  }
  for (const Circle& c : circles) {
    if (!(c.radius > 0.0) || !std::isfinite(c.x) || !std::isfinite(c.y)) {
      throw ConfigurationError("obstacle radii must be > 0 and finite");
    }
  }
}

bool ObstacleField::Contains(double x, double y) const {
  for (const Circle& c : circles) {
    const double r = c.radius + inflation;
    const double dx = x - c.x, dy = y - c.y;
    if (dx * dx + dy * dy < r * r) return true;
  }
  return false;
}

double ObstacleField::Clearance(double x, double y) const {
  double best = std::numeric_limits<double>::infinity();
  for (const Circle& c : circles) {
    best = std::min(best, std::hypot(x - c.x, y - c.y) - c.radius - inflation);
  }
  return best;
}

QuadraticCost::QuadraticCost(Vector q_running, Vector q_terminal, Vector r,
                             Vector x_ref, Vector u_ref)
    : q_(std::move(q_running)),
      q_terminal_(std::move(q_terminal)),
      r_(std::move(r)),
      x_ref_(std::move(x_ref)),
      u_ref_(std::move(u_ref)) {
  if (q_terminal_.size() != q_.size() || x_ref_.size() != q_.size() ||
      u_ref_.size() != r_.size()) {
    throw ConfigurationError("quadratic cost dimensions are inconsistent");
  }
  if ((q_.array() < 0).any() || (q_terminal_.array() < 0).any() ||
      (r_.array() < 0).any()) {
    throw ConfigurationError("cost weights must be >= 0");
  }
  if (r_.size() > kMaxInputDim) {
    throw ConfigurationError("input dimension too large for quadratic cost");
  }
}

void QuadraticCost::set_terminal_matrix(Matrix s) {
  if (s.rows() != q_.size() || s.cols() != q_.size()) {
    throw ConfigurationError("terminal matrix has wrong shape");
  }
  s_ = std::move(s);
}

void QuadraticCost::set_state_reference(Vector x_ref) {
  if (x_ref.size() != q_.size()) {
    throw ConfigurationError("state reference has wrong length");
  }
  x_ref_ = std::move(x_ref);
}

void QuadraticCost::set_input_reference(Vector u_ref) {
  if (u_ref.size() != r_.size()) {
    throw ConfigurationError("input reference has wrong length");
  }
  u_ref_ = std::move(u_ref);
  input_reference_ = nullptr;
}

void QuadraticCost::set_input_reference(InputReference reference) {
  input_reference_ = std::move(reference);
}

void QuadraticCost::set_obstacles(ObstacleField field, double weight,
                                  int x_index, int y_index) {
  field.Validate();
  if (!(weight >= 0.0)) throw ConfigurationError("obstacle weight must be >= 0");
  if (x_index < 0 || y_index < 0 || x_index >= q_.size() ||
      y_index >= q_.size()) {
    throw ConfigurationError("obstacle position indices out of range");
  }
  obstacles_ = std::move(field);
  obstacle_weight_ = weight;
  x_index_ = x_index;
  y_index_ = y_index;
}

bool QuadraticCost::InCollision(std::span<const double> x) const {
  return obstacles_ && obstacles_->Contains(x[x_index_], x[y_index_]);
}

double QuadraticCost::Indicator(std::span<const double> x,
                                CostTerms terms) const {
  if (terms == CostTerms::kSmooth || !InCollision(x)) return 0.0;
  return obstacle_weight_;
}

double QuadraticCost::Stage(std::span<const double> x,
                            std::span<const double> u, double t,
                            CostTerms terms) const {
  double cost = 0.0;
  for (int i = 0; i < q_.size(); ++i) {
    const double e = x[i] - x_ref_[i];
    cost += q_[i] * e * e;
  }
  if (input_reference_) {
    std::array<double, kMaxInputDim> u_ref;
    input_reference_(t, std::span<double>(u_ref.data(), r_.size()));
    for (int i = 0; i < r_.size(); ++i) {
      const double e = u[i] - u_ref[i];
      cost += r_[i] * e * e;
    }
  } else {
    for (int i = 0; i < r_.size(); ++i) {
      const double e = u[i] - u_ref_[i];
      cost += r_[i] * e * e;
    }
  }
  return cost + Indicator(x, terms);
}

double QuadraticCost::Terminal(std::span<const double> x, double /*t*/,
                               CostTerms terms) const {
  const int n = static_cast<int>(q_.size());
  double cost = 0.0;
  if (s_) {
    for (int i = 0; i < n; ++i) {
      const double ei = x[i] - x_ref_[i];
      for (int j = 0; j < n; ++j) cost += ei * (*s_)(i, j) * (x[j] - x_ref_[j]);
    }
  } else {
    for (int i = 0; i < n; ++i) {
      const double e = x[i] - x_ref_[i];
      cost += q_terminal_[i] * e * e;
    }
  }
  return cost + Indicator(x, terms);
}

void QuadraticCost::StageGradient(std::span<const double> x,
                                  std::span<const double> /*u*/, double /*t*/,
                                  std::span<double> grad) const {
  for (int i = 0; i < q_.size(); ++i) grad[i] = 2.0 * q_[i] * (x[i] - x_ref_[i]);
}

void QuadraticCost::TerminalGradient(std::span<const double> x, double /*t*/,
                                     std::span<double> grad) const {
  const int n = static_cast<int>(q_.size());
  if (s_) {
    for (int i = 0; i < n; ++i) {
      double g = 0.0;
      for (int j = 0; j < n; ++j) {
        g += ((*s_)(i, j) + (*s_)(j, i)) * (x[j] - x_ref_[j]);
      }
      grad[i] = g;
    }
    return;
  }
  for (int i = 0; i < n; ++i) {
    grad[i] = 2.0 * q_terminal_[i] * (x[i] - x_ref_[i]);
  }
}

}  // namespace fmppi
