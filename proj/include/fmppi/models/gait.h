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

#ifndef FMPPI_MODELS_GAIT_H_
#define FMPPI_MODELS_GAIT_H_

#include <array>

namespace fmppi {

// Leg order used throughout: front-left, front-right, rear-left, rear-right.
enum Leg { kFrontLeft = 0, kFrontRight = 1, kRearLeft = 2, kRearRight = 3 };

using ContactFlags = std::array<bool, 4>;

// Periodic trot: (FL, RR) are in stance for phase in [0, duty), (FR, RL) for
// phase in [1/2, 1/2 + duty) modulo 1. duty = 1 keeps all legs down.
ContactFlags TrotSchedule(double t, double period, double duty);

}  // namespace fmppi

#endif  // FMPPI_MODELS_GAIT_H_
