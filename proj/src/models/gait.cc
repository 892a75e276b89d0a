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

#include "fmppi/models/gait.h"

#include <cmath>

#include "fmppi/types.h"

namespace fmppi {

ContactFlags TrotSchedule(double t, double period, double duty) {
  if (!(period > 0.0)) throw ConfigurationError("gait period must be > 0");
  if (!(duty > 0.0 && duty <= 1.0)) {
    throw ConfigurationError("gait duty must be in (0, 1]");
  }
  if (duty >= 1.0) return {true, true, true, true};
  const double cycles = t / period;
  double phase = cycles - std::floor(cycles);
  if (phase >= 1.0) phase = 0.0;
  double shifted = phase + 0.5;
  if (shifted >= 1.0) shifted -= 1.0;
  const bool first_pair = phase < duty;
  const bool second_pair = shifted < duty;
  ContactFlags flags{};
  flags[kFrontLeft] = first_pair;
  flags[kRearRight] = first_pair;
  flags[kFrontRight] = second_pair;
  flags[kRearLeft] = second_pair;
  return flags;
}

}  // namespace fmppi
