// Copyright 2026 The wearsafe Authors
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

#include "support/fusion_experiment.hpp"
#include "wearsafe/sensing.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

namespace ws = wearsafe;

TEST(SampleGps, ZeroNoiseIsExact)
{
  ws::RngStream rng(1, 2, "gps");
  ws::KinematicState s;
  s.position = {12.5, -7.25};
  const auto fix = ws::sample_gps(3.0, s, 0.0, rng);
  EXPECT_EQ(fix.measured_position, s.position);
  EXPECT_EQ(fix.time, 3.0);
}

TEST(SampleGps, MonteCarloRmse)
{
  ws::RngStream rng(42, 1, "gps");
  ws::KinematicState s;
  double sq = 0.0;
  const int n = 10000;
  for (int i = 0; i < n; ++i) {
    const auto e = ws::sample_gps(0.0, s, 3.0, rng).measured_position;
    sq += e.dot(e);
  }
  const double rmse = std::sqrt(sq / n);
  EXPECT_NEAR(rmse, 3.0 * std::sqrt(2.0), 0.05 * 3.0 * std::sqrt(2.0));
}

TEST(SampleGps, DeterministicPerSeed)
{
  ws::RngStream a(9, 4, "gps");
  ws::RngStream b(9, 4, "gps");
  ws::KinematicState s;
  for (int i = 0; i < 100; ++i) {
    EXPECT_EQ(ws::sample_gps(i, s, 3.0, a).measured_position, ws::sample_gps(i, s, 3.0, b).measured_position);
  }
  EXPECT_THROW(ws::sample_gps(0.0, s, -1.0, a), std::invalid_argument);
}

TEST(SampleImu, BiasAndNoise)
{
  ws::RngStream rng(5, 1, "imu");
  auto clean = ws::sample_imu(0.0, 1.0, 0.1, {}, {0.0, 0.0}, rng);
  EXPECT_EQ(clean.accel_meas, 1.0);
  EXPECT_EQ(clean.yaw_rate_meas, 0.1);
  auto biased = ws::sample_imu(0.0, 1.0, 0.0, {0.2, 0.0}, {0.0, 0.0}, rng);
  EXPECT_DOUBLE_EQ(biased.accel_meas, 1.2);

  double sum = 0.0;
  double sq = 0.0;
  const int n = 10000;
  for (int i = 0; i < n; ++i) {
    const double v = ws::sample_imu(0.0, 0.0, 0.0, {}, {0.1, 0.0}, rng).accel_meas;
    sum += v;
    sq += v * v;
  }
  const double mean = sum / n;
  const double sd = std::sqrt(sq / n - mean * mean);
  EXPECT_NEAR(sd, 0.1, 0.005);
}

TEST(FusePredict, StdGrowthLaw)
{
  ws::FusedEstimate est;
  est.pos_std = 1.0;
  est.mean.speed = 5.0;
  const auto lim = ws::default_limits(ws::TransportMode::Car);
  const auto out = ws::fuse_predict(est, {1.0, 0.0, 0.0}, 1.0, lim, {0.5, 0.05});
  EXPECT_NEAR(out.pos_std, std::sqrt(1.5), 1e-12);
  EXPECT_THROW(ws::fuse_predict(est, {}, 0.0, lim), std::invalid_argument);

  auto cur = est;
  for (int i = 0; i < 50; ++i) {
    const auto next = ws::fuse_predict(cur, {}, 0.1, lim);
    EXPECT_GT(next.pos_std, cur.pos_std);
    EXPECT_GT(next.speed_std, cur.speed_std);
    cur = next;
  }
}

TEST(FuseUpdate, GainCases)
{
  ws::FusedEstimate est;
  est.pos_std = 3.0;
  est.mean.position = {1.0, 2.0};
  const ws::GpsFix fix{0.0, {5.0, -2.0}};

  const auto symmetric = ws::fuse_update(est, fix, 3.0);
  EXPECT_NEAR(symmetric.pos_std, 3.0 * std::sqrt(0.5), 1e-12);
  EXPECT_NEAR(symmetric.mean.position.x, 3.0, 1e-12);
  EXPECT_NEAR(symmetric.mean.position.y, 0.0, 1e-12);

  const auto uninformative = ws::fuse_update(est, fix, 1e9);
  EXPECT_NEAR(uninformative.mean.position.x, 1.0, 1e-6);
  EXPECT_NEAR(uninformative.mean.position.y, 2.0, 1e-6);
  EXPECT_NEAR(uninformative.pos_std, 3.0, 1e-6);

  EXPECT_THROW(ws::fuse_update(est, {0.0, {NAN, 0.0}}, 3.0), std::invalid_argument);
}

TEST(FuseUpdate, NeverIncreasesStd)
{
  ws::RngStream rng(3);
  for (int i = 0; i < 1000; ++i) {
    ws::FusedEstimate est;
    est.pos_std = rng.uniform(0.01, 20.0);
    const double sigma = rng.uniform(0.01, 20.0);
    const auto out = ws::fuse_update(est, {0.0, {rng.normal(), rng.normal()}}, sigma);
    ASSERT_LE(out.pos_std, est.pos_std);
    ASSERT_LE(out.pos_std, sigma + 1e-12);
  }
}

TEST(Fusion, NoiselessTracksTruthExactly)
{
  const auto lim = ws::default_limits(ws::TransportMode::Car);
  ws::RngStream gps(1, 1, "gps");
  ws::RngStream imu(1, 1, "imu");
  ws::KinematicState truth;
  truth.speed = 8.0;
  auto est = ws::initial_estimate(ws::sample_gps(0.0, truth, 0.0, gps), truth, 0.0);
  for (int k = 1; k <= 300; ++k) {
    const ws::ControlInput u{k < 100 ? 1.0 : -0.5, k > 150 ? 0.2 : 0.0};
    truth = ws::step(truth, u, lim, 0.1);
    est = ws::fuse_predict(est, ws::sample_imu(k * 0.1, u.accel_cmd, u.yaw_rate_cmd, {}, {0.0, 0.0}, imu), 0.1,
                           lim, {0.0, 0.0});
    if (k % 10 == 0) {
      est = ws::fuse_update(est, ws::sample_gps(k * 0.1, truth, 0.0, gps), 1e-3);
    }
    ASSERT_LT(ws::distance(est.mean.position, truth.position), 1e-9);
    ASSERT_NEAR(est.mean.speed, truth.speed, 1e-9);
  }
}

TEST(Fusion, BeatsRawGpsOnStandardTrajectory)
{
  const auto r = ws::testing::run_straight_car_fusion(100, 2024);
  EXPECT_NEAR(r.raw_rmse, 3.0 * std::sqrt(2.0), 0.1);
  EXPECT_LE(r.fused_rmse / r.raw_rmse, 0.7) << "fused " << r.fused_rmse << " raw " << r.raw_rmse;
}

TEST(SampleCues, NeutralAndTurnProfiles)
{
  ws::RngStream rng(1);
  const ws::CueNoise off{0.0, 0.0};
  const auto neutral = ws::sample_cues(0.0, ws::Maneuver::MaintainCourse, 0.0, off, rng);
  EXPECT_EQ(neutral.head_yaw_delta, 0.0);
  EXPECT_EQ(neutral.wrist_flexion, 0.0);
  EXPECT_FALSE(neutral.decel_cue);

  const auto left = ws::sample_cues(0.0, ws::Maneuver::TurnLeft, 1.0, off, rng);
  EXPECT_EQ(left.head_yaw_delta, 0.3);
  EXPECT_EQ(left.wrist_flexion, 0.8);
  const auto right = ws::sample_cues(0.0, ws::Maneuver::TurnRight, 1.0, off, rng);
  EXPECT_EQ(right.head_yaw_delta, -left.head_yaw_delta);
  EXPECT_EQ(right.wrist_flexion, -left.wrist_flexion);

  EXPECT_TRUE(ws::sample_cues(0.0, ws::Maneuver::Brake, 0.5, off, rng).decel_cue);
  // Outside the lead window the cue is neutral.
  EXPECT_EQ(ws::sample_cues(0.0, ws::Maneuver::TurnLeft, 2.0, off, rng).head_yaw_delta, 0.0);
  EXPECT_THROW(ws::sample_cues(0.0, ws::Maneuver::TurnLeft, -0.1, off, rng), std::invalid_argument);
}

TEST(SampleCues, MirrorAntisymmetryWithNoise)
{
  for (double lead : {0.0, 0.7, 1.5, 3.0}) {
    ws::RngStream a(77, 1, "cue");
    ws::RngStream b(77, 1, "cue");
    for (int i = 0; i < 200; ++i) {
      const auto l = ws::sample_cues(i, ws::Maneuver::TurnLeft, lead, {0.05, 0.1}, a);
      const auto r = ws::sample_cues(i, ws::Maneuver::TurnRight, lead, {-0.05, -0.1}, b);
      ASSERT_DOUBLE_EQ(l.head_yaw_delta, -r.head_yaw_delta);
      ASSERT_DOUBLE_EQ(l.wrist_flexion, -r.wrist_flexion);
      ASSERT_GE(l.wrist_flexion, -1.0);
      ASSERT_LE(l.wrist_flexion, 1.0);
    }
  }
}

TEST(CueProfile, MatchesAsset)
{
  std::ifstream in(std::string(WEARSAFE_ASSET_DIR) + "/cue_profile.json");
  ASSERT_TRUE(in.good());
  const auto j = nlohmann::json::parse(in);
  const ws::CueProfile p;
  EXPECT_EQ(j.at("cue_lead").get<double>(), p.cue_lead);
  EXPECT_EQ(j.at("turn_left").at("head_yaw_delta").get<double>(), p.turn_head_yaw);
  EXPECT_EQ(j.at("turn_left").at("wrist_flexion").get<double>(), p.turn_wrist_flexion);
  EXPECT_EQ(j.at("turn_right").at("head_yaw_delta").get<double>(), -p.turn_head_yaw);
  EXPECT_EQ(j.at("turn_right").at("wrist_flexion").get<double>(), -p.turn_wrist_flexion);
}
