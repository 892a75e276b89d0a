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

#ifndef FMPPI_COST_H_
#define FMPPI_COST_H_

#include <span>

namespace fmppi {

// Which cost terms to evaluate. Indicator terms are locally constant and are
// never differentiated.
enum class CostTerms { kAll, kSmooth };

// Stage cost l_i(x, u) and terminal cost l_N(x). Time is absolute so that
// schedules and moving references can be expressed.
class Cost {
 public:
  virtual ~Cost() = default;

  virtual double Stage(std::span<const double> x, std::span<const double> u,
                       double t, CostTerms terms) const = 0;
  virtual double Terminal(std::span<const double> x, double t,
                          CostTerms terms) const = 0;

  // d l / d x of the smooth terms, written into grad (length n_x).
  virtual void StageGradient(std::span<const double> x,
                             std::span<const double> u, double t,
                             std::span<double> grad) const = 0;
  virtual void TerminalGradient(std::span<const double> x, double t,
                                std::span<double> grad) const = 0;
};

}  // namespace fmppi

#endif  // FMPPI_COST_H_
