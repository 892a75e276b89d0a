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

#ifndef FMPPI_FEEDBACK_H_
#define FMPPI_FEEDBACK_H_

#include <memory>
#include <mutex>

#include "fmppi/model.h"
#include "fmppi/types.h"

namespace fmppi {

// Immutable result of one outer-loop solve, consumed by the inner loop.
struct FeedbackPacket {
  Vector u_star;
  Matrix gain;  // n_u x n_x
  Vector x0;    // first two nominal states
  Vector x1;
  double dt = 0.0;
  double solve_time = 0.0;
};

// x_sp = x0 + min((now - solve_time) / dt, 1) (x1 - x0), projected back onto
// the model's state manifold.
Vector InterpolateSetpoint(const FeedbackPacket& packet, double now,
                           const Model& model);

// u = clip(u* + F (x_hat - x_sp(now)))
Vector ApplyFeedback(const FeedbackPacket& packet, const Vector& x_hat,
                     double now, const Model& model);

// Single-slot exchange between the solver and the inner loop. Readers get a
// shared snapshot and never see a partially written packet.
class PacketMailbox {
 public:
  void Publish(std::shared_ptr<const FeedbackPacket> packet);
  std::shared_ptr<const FeedbackPacket> Latest() const;

 private:
  mutable std::mutex mutex_;
  std::shared_ptr<const FeedbackPacket> packet_;
};

// High-rate side of the two-rate scheme. If the newest packet is older than
// stale_factor * dt, the last command is held and `stale` is raised.
class InnerLoopController {
 public:
  struct Command {
    Vector u;
    bool stale = false;
    double packet_age = 0.0;
  };

  InnerLoopController(std::shared_ptr<const Model> model,
                      const PacketMailbox* mailbox, bool use_feedback,
                      double stale_factor = 3.0);

  Command Update(const Vector& x_hat, double now);

 private:
  std::shared_ptr<const Model> model_;
  const PacketMailbox* mailbox_;
  bool use_feedback_;
  double stale_factor_;
  Vector last_u_;
};

}  // namespace fmppi

#endif  // FMPPI_FEEDBACK_H_
