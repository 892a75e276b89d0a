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

#include <atomic>
#include <cmath>
#include <memory>
#include <random>
#include <thread>

#include <gtest/gtest.h>

#include "fmppi/feedback.h"
#include "fmppi/lqr.h"
#include "test_util.h"

namespace fmppi {
namespace {

using testing::Vec;

FeedbackPacket Packet(Vector u, Matrix gain, Vector x0, Vector x1,
                      double dt = 0.05, double solve_time = 1.0) {
  FeedbackPacket p;
  p.u_star = std::move(u);
  p.gain = std::move(gain);
  p.x0 = std::move(x0);
  p.x1 = std::move(x1);
  p.dt = dt;
  p.solve_time = solve_time;
  return p;
}

TEST(InterpolateTest, EndpointsAndMidpoint) {
  const DoubleIntegrator model(10.0);
  const FeedbackPacket p = Packet(Vec({0.0}), Matrix::Zero(1, 2),
                                  Vec({0.0, 0.0}), Vec({1.0, 2.0}));
  EXPECT_EQ(InterpolateSetpoint(p, 1.0, model), Vec({0.0, 0.0}));
  EXPECT_EQ(InterpolateSetpoint(p, 1.05, model), Vec({1.0, 2.0}));
  const Vector mid = InterpolateSetpoint(p, 1.025, model);
  EXPECT_NEAR(mid[0], 0.5, 1e-12);
  EXPECT_NEAR(mid[1], 1.0, 1e-12);
  // held at x1 beyond one step
  EXPECT_EQ(InterpolateSetpoint(p, 1.3, model), Vec({1.0, 2.0}));
}

TEST(InterpolateTest, QuaternionRenormalized) {
  const Quadrotor model;
  Vector x0 = Quadrotor::HoverState(0, 0, 1);
  Vector x1 = x0;
  // 90 degree yaw
  x1[6] = std::sqrt(0.5);
  x1[9] = std::sqrt(0.5);
  const FeedbackPacket p = Packet(model.HoverInput(), Matrix::Zero(4, 13),
                                  x0, x1, 0.05, 0.0);
  const Vector mid = InterpolateSetpoint(p, 0.025, model);
  EXPECT_NEAR(mid.segment(6, 4).norm(), 1.0, 1e-15);
  const Vector raw = 0.5 * (x0 + x1);
  EXPECT_NEAR(mid[6], raw[6] / raw.segment(6, 4).norm(), 1e-15);
  EXPECT_NEAR(mid[9], raw[9] / raw.segment(6, 4).norm(), 1e-15);
}

TEST(ApplyFeedbackTest, ZeroCorrectionAtSetpoint) {
  const DoubleIntegrator model(1.0);
  Matrix f(1, 2);
  f << -3.0, -4.0;
  const FeedbackPacket p =
      Packet(Vec({1.5}), f, Vec({0.0, 0.0}), Vec({1.0, 2.0}));
  // u* is clipped to the limit
  EXPECT_EQ(ApplyFeedback(p, Vec({0.5, 1.0}), 1.025, model)[0], 1.0);
  const FeedbackPacket q =
      Packet(Vec({0.25}), f, Vec({0.0, 0.0}), Vec({1.0, 2.0}));
  const Vector x_sp = InterpolateSetpoint(q, 1.025, model);
  EXPECT_EQ(ApplyFeedback(q, x_sp, 1.025, model)[0], 0.25);
  EXPECT_NEAR(ApplyFeedback(q, Vec({0.5, 1.0}), 1.025, model)[0], 0.25, 1e-12);
}

TEST(ApplyFeedbackTest, ZeroGainIgnoresState) {
  const Quadrotor model;
  const FeedbackPacket p =
      Packet(Vec({50, 60, 70, 200}), Matrix::Zero(4, 13),
             Quadrotor::HoverState(0, 0, 1), Quadrotor::HoverState(0, 0, 1));
  std::mt19937_64 rng(1);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 20; ++trial) {
    Vector x_hat(13);
    for (int i = 0; i < 13; ++i) x_hat[i] = normal(rng);
    EXPECT_EQ(ApplyFeedback(p, x_hat, 1.01, model), Vec({50, 60, 70, 100}));
  }
}

TEST(ApplyFeedbackTest, MatchesRiccatiLaw) {
  const double dt = 0.05;
  const Matrix f = SolveDare({DoubleIntegrator::A(dt), DoubleIntegrator::B(dt),
                              Matrix::Identity(2, 2), Matrix::Identity(1, 1)})
                       .gain;
  const DoubleIntegrator model(1e6);
  const Vector x0 = Vec({0.5, 0.0});
  const Vector x1 = Vec({0.5, -0.024});
  const FeedbackPacket p = Packet(Vec({-0.48}), f, x0, x1, dt, 2.0);
  std::mt19937_64 rng(2);
  std::normal_distribution<double> normal(0.0, 0.1);
  for (int trial = 0; trial < 20; ++trial) {
    const double now = 2.0 + 0.0125 * (trial % 5);
    const Vector dx = Vec({normal(rng), normal(rng)});
    const Vector x_sp = x0 + std::min((now - 2.0) / dt, 1.0) * (x1 - x0);
    const Vector u = ApplyFeedback(p, x_sp + dx, now, model);
    const double expected = f(0, 0) * dx[0] + f(0, 1) * dx[1];
    EXPECT_NEAR(u[0] - (-0.48), expected, 1e-12);
  }
}

std::shared_ptr<const FeedbackPacket> MakeShared(FeedbackPacket p) {
  return std::make_shared<const FeedbackPacket>(std::move(p));
}

TEST(InnerLoopTest, HoldsCommandWhenStale) {
  auto model = std::make_shared<DoubleIntegrator>(10.0);
  PacketMailbox mailbox;
  InnerLoopController inner(model, &mailbox, true);

  const auto none = inner.Update(Vec({0.0, 0.0}), 0.0);
  EXPECT_TRUE(none.stale);
  EXPECT_EQ(none.u, Vec({0.0}));

  Matrix f(1, 2);
  f << -1.0, 0.0;
  mailbox.Publish(MakeShared(
      Packet(Vec({0.5}), f, Vec({0.0, 0.0}), Vec({0.0, 0.0}), 0.05, 0.0)));
  const auto fresh = inner.Update(Vec({0.1, 0.0}), 0.01);
  EXPECT_FALSE(fresh.stale);
  EXPECT_NEAR(fresh.u[0], 0.4, 1e-15);
  EXPECT_NEAR(fresh.packet_age, 0.01, 1e-15);

  // within 3 dt the law keeps running
  const auto aging = inner.Update(Vec({0.2, 0.0}), 0.15);
  EXPECT_FALSE(aging.stale);
  EXPECT_NEAR(aging.u[0], 0.3, 1e-15);

  // beyond 3 dt the last command is frozen
  const auto stale = inner.Update(Vec({5.0, 0.0}), 0.16);
  EXPECT_TRUE(stale.stale);
  EXPECT_EQ(stale.u, aging.u);

  mailbox.Publish(MakeShared(
      Packet(Vec({0.0}), f, Vec({0.0, 0.0}), Vec({0.0, 0.0}), 0.05, 0.16)));
  EXPECT_FALSE(inner.Update(Vec({0.0, 0.0}), 0.17).stale);
}

TEST(InnerLoopTest, WithoutFeedbackUsesClippedInput) {
  auto model = std::make_shared<DoubleIntegrator>(1.0);
  PacketMailbox mailbox;
  InnerLoopController inner(model, &mailbox, false);
  mailbox.Publish(MakeShared(Packet(Vec({3.0}), Matrix::Constant(1, 2, -5.0),
                                    Vec({0.0, 0.0}), Vec({0.0, 0.0}))));
  EXPECT_EQ(inner.Update(Vec({0.3, 0.3}), 1.0).u, Vec({1.0}));
  EXPECT_EQ(inner.Update(Vec({-0.3, 0.3}), 1.02).u, Vec({1.0}));
}

TEST(MailboxTest, ReadersSeeWholePackets) {
  PacketMailbox mailbox;
  std::atomic<bool> done{false};
  std::atomic<int> torn{0};
  std::atomic<long> reads{0};
  auto reader = [&] {
    while (!done.load()) {
      const auto p = mailbox.Latest();
      if (!p) continue;
      const double id = p->solve_time;
      if (p->u_star[0] != id || p->x0[0] != id || p->x1[0] != id ||
          p->gain(0, 0) != id) {
        ++torn;
      }
      ++reads;
    }
  };
  std::thread a(reader), b(reader);
  for (int i = 0; i < 20000; ++i) {
    const double id = i;
    mailbox.Publish(MakeShared(Packet(Vec({id}), Matrix::Constant(1, 2, id),
                                      Vec({id, id}), Vec({id, id}), 0.05,
                                      id)));
  }
  done = true;
  a.join();
  b.join();
  EXPECT_EQ(torn.load(), 0);
  EXPECT_EQ(mailbox.Latest()->solve_time, 19999.0);
}

}  // namespace
}  // namespace fmppi
