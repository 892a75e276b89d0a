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

#include "fmppi/feedback.h"

#include <algorithm>
#include <utility>

namespace fmppi {

Vector InterpolateSetpoint(const FeedbackPacket& packet, double now,
                           const Model& model) {
  const double alpha =
      std::clamp((now - packet.solve_time) / packet.dt, 0.0, 1.0);
  Vector setpoint = packet.x0 + alpha * (packet.x1 - packet.x0);
  model.Normalize(AsSpan(setpoint));
  return setpoint;
}

Vector ApplyFeedback(const FeedbackPacket& packet, const Vector& x_hat,
                     double now, const Model& model) {
  Vector u = packet.u_star;
  if (packet.gain.size() > 0) {
    u += packet.gain * (x_hat - InterpolateSetpoint(packet, now, model));
  }
  model.ClipInput(AsSpan(u));
  return u;
}

void PacketMailbox::Publish(std::shared_ptr<const FeedbackPacket> packet) {
  std::lock_guard<std::mutex> lock(mutex_);
  packet_ = std::move(packet);
}

std::shared_ptr<const FeedbackPacket> PacketMailbox::Latest() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return packet_;
}

InnerLoopController::InnerLoopController(std::shared_ptr<const Model> model,
                                         const PacketMailbox* mailbox,
                                         bool use_feedback,
                                         double stale_factor)
    : model_(std::move(model)),
      mailbox_(mailbox),
      use_feedback_(use_feedback),
      stale_factor_(stale_factor) {}

InnerLoopController::Command InnerLoopController::Update(const Vector& x_hat,
                                                         double now) {
  Command cmd;
  const std::shared_ptr<const FeedbackPacket> packet = mailbox_->Latest();
  if (!packet) {
    cmd.u = last_u_.size() ? last_u_ : Vector::Zero(model_->input_dim());
    cmd.stale = true;
    return cmd;
  }
  cmd.packet_age = now - packet->solve_time;
  if (cmd.packet_age > stale_factor_ * packet->dt && last_u_.size() > 0) {
    cmd.u = last_u_;
    cmd.stale = true;
    return cmd;
  }
  if (use_feedback_) {
    cmd.u = ApplyFeedback(*packet, x_hat, now, *model_);
  } else {
    cmd.u = packet->u_star;
    model_->ClipInput(AsSpan(cmd.u));
  }
  last_u_ = cmd.u;
  return cmd;
}

}  // namespace fmppi
