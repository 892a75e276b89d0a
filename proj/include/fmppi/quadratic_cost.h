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

#ifndef FMPPI_QUADRATIC_COST_H_
#define FMPPI_QUADRATIC_COST_H_

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "fmppi/cost.h"
#include "fmppi/types.h"

namespace fmppi {

struct Circle {
  double x = 0.0;
  double y = 0.0;
  double radius = 0.0;
};

// Planar circular obstacles, each inflated by the robot radius. The occupied
// set is the open interior of the inflated circles.
struct ObstacleField {
  std::vector<Circle> circles;
  double inflation = 0.0;

  void Validate() const;
  bool Contains(double x, double y) const;
  // signed distance to the closest inflated boundary (negative inside),
  // +inf for an empty field
  double Clearance(double x, double y) const;
};

// Weighted quadratic tracking cost with optional indicator obstacles:
//   l_i = ||x - x_ref||^2_Q + ||u - u_ref(t)||^2_R + w_obs 1{p(x) in O}
//   l_N = ||x - x_ref||^2_{Q_N or S} + w_obs 1{p(x) in O}
// Q, Q_N and R are diagonal; the terminal weight may be replaced by a dense
// symmetric matrix S.
class QuadraticCost : public Cost {
 public:
  // writes u_ref(t) into the output span
  using InputReference =
      std::function<void(double t, std::span<double> u_ref)>;
  static constexpr int kMaxInputDim = 32;

  QuadraticCost(Vector q_running, Vector q_terminal, Vector r,
                Vector x_ref, Vector u_ref);

  void set_terminal_matrix(Matrix s);
  void set_state_reference(Vector x_ref);
  void set_input_reference(Vector u_ref);
  void set_input_reference(InputReference reference);
  void set_obstacles(ObstacleField field, double weight, int x_index = 0,
                     int y_index = 1);
  void clear_obstacles() { obstacles_.reset(); }

  const Vector& state_reference() const { return x_ref_; }
  const std::optional<ObstacleField>& obstacles() const { return obstacles_; }
  double obstacle_weight() const { return obstacle_weight_; }

  // true if the planar position of x lies inside an inflated obstacle
  bool InCollision(std::span<const double> x) const;

  double Stage(std::span<const double> x, std::span<const double> u, double t,
               CostTerms terms) const override;
  double Terminal(std::span<const double> x, double t,
                  CostTerms terms) const override;
  void StageGradient(std::span<const double> x, std::span<const double> u,
                     double t, std::span<double> grad) const override;
  void TerminalGradient(std::span<const double> x, double t,
                        std::span<double> grad) const override;

 private:
  double Indicator(std::span<const double> x, CostTerms terms) const;

  Vector q_;
  Vector q_terminal_;
  Vector r_;
  Vector x_ref_;
  Vector u_ref_;
  InputReference input_reference_;
  std::optional<Matrix> s_;
  std::optional<ObstacleField> obstacles_;
  double obstacle_weight_ = 0.0;
  int x_index_ = 0;
  int y_index_ = 1;
};

}  // namespace fmppi

#endif  // FMPPI_QUADRATIC_COST_H_
