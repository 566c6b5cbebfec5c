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

#ifndef WEARSAFE__SENSING_HPP_
#define WEARSAFE__SENSING_HPP_

#include "wearsafe/rng.hpp"
#include "wearsafe/world.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace wearsafe
{

struct GpsFix
{
  double time{0.0};
  Vec2 measured_position{};
};

struct ImuSample
{
  double time{0.0};
  double accel_meas{0.0};
  double yaw_rate_meas{0.0};
};

struct ImuBias
{
  double accel{0.0};
  double yaw_rate{0.0};
};

struct ImuNoise
{
  double accel_std{0.02};
  double yaw_rate_std{0.002};
};

/// Body cues from the glasses (head) and the watch (wrist). Positive is left.
struct CueSample
{
  double time{0.0};
  double head_yaw_delta{0.0};
  double wrist_flexion{0.0};
  bool decel_cue{false};
  bool gaze_covers_conflict{false};
};

struct FusedEstimate
{
  double time{0.0};
  KinematicState mean{};
  double pos_std{1.0};  // per-axis, meters
  double speed_std{0.1};

  bool valid() const { return pos_std > 0.0 && speed_std > 0.0 && mean.valid(); }
};

struct FusionParams
{
  double q_proc{0.5};    // m^2/s added to the position variance
  double q_speed{0.05};  // (m/s)^2/s added to the speed variance
};

/// GPS standard deviation anchored to "a few meters" open-sky accuracy.
inline constexpr double kDefaultSigmaGps = 3.0;

inline GpsFix sample_gps(double time, const KinematicState & truth, double sigma_gps, RngStream & rng)
{
  if (!(sigma_gps >= 0.0)) {
    throw std::invalid_argument("sample_gps: sigma_gps must be >= 0");
  }
  const double nx = rng.normal();
  const double ny = rng.normal();
  return {time, {truth.position.x + sigma_gps * nx, truth.position.y + sigma_gps * ny}};
}

/// Samples the IMU given the applied (true) longitudinal accel and yaw rate.
inline ImuSample sample_imu(
  double time, double true_accel, double true_yaw_rate, const ImuBias & bias, const ImuNoise & noise,
  RngStream & rng)
{
  if (!(noise.accel_std >= 0.0) || !(noise.yaw_rate_std >= 0.0)) {
    throw std::invalid_argument("sample_imu: noise must be >= 0");
  }
  const double na = rng.normal();
  const double nw = rng.normal();
  return {
    time, true_accel + bias.accel + noise.accel_std * na,
    true_yaw_rate + bias.yaw_rate + noise.yaw_rate_std * nw};
}

/// Initial estimate from the first fix; heading and speed taken as known.
inline FusedEstimate initial_estimate(const GpsFix & fix, const KinematicState & truth, double sigma_gps)
{
  FusedEstimate est;
  est.time = fix.time;
  est.mean = truth;
  est.mean.position = fix.measured_position;
  est.pos_std = std::max(sigma_gps, 1e-6);
  est.speed_std = 0.1;
  return est;
}

/// Dead-reckons the estimate through the motion model with IMU-measured controls.
inline FusedEstimate fuse_predict(
  const FusedEstimate & est, const ImuSample & imu, double dt, const ModeLimits & limits,
  const FusionParams & params = {})
{
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw std::invalid_argument("fuse_predict: dt must be positive");
  }
  FusedEstimate out = est;
  out.mean = step(est.mean, {imu.accel_meas, imu.yaw_rate_meas}, limits, dt);
  out.pos_std = std::sqrt(est.pos_std * est.pos_std + params.q_proc * dt);
  out.speed_std = std::sqrt(est.speed_std * est.speed_std + params.q_speed * dt);
  out.time = est.time + dt;
  return out;
}

/// Decoupled scalar-gain Kalman update, identical gain on both axes.
inline FusedEstimate fuse_update(const FusedEstimate & est, const GpsFix & fix, double sigma_gps)
{
  if (!fix.measured_position.finite() || !std::isfinite(fix.time)) {
    throw std::invalid_argument("fuse_update: non-finite fix");
  }
  if (fix.time < est.time - 1e-9) {
    throw std::invalid_argument("fuse_update: fix older than estimate");
  }
  const double p = est.pos_std * est.pos_std;
  const double g = p / (p + sigma_gps * sigma_gps);
  FusedEstimate out = est;
  out.mean.position = est.mean.position + (fix.measured_position - est.mean.position) * g;
  out.pos_std = est.pos_std * std::sqrt(1.0 - g);
  out.time = std::max(est.time, fix.time);
  return out;
}

/// Cue levels shown ahead of a scripted maneuver (mirrored in assets/cue_profile.json).
struct CueProfile
{
  double cue_lead{1.5};
  double turn_head_yaw{0.3};
  double turn_wrist_flexion{0.8};
};

struct CueNoise
{
  double head_yaw_std{0.005};
  double wrist_std{0.01};
};

/// Body cues for an upcoming (or ongoing, lead_time = 0) maneuver.
inline CueSample sample_cues(
  double time, Maneuver scripted_intent, double lead_time, const CueNoise & noise, RngStream & rng,
  const CueProfile & profile = {})
{
  if (!(lead_time >= 0.0)) {
    throw std::invalid_argument("sample_cues: lead_time must be >= 0");
  }
  CueSample s;
  s.time = time;
  const bool active = lead_time <= profile.cue_lead;
  if (active) {
    if (scripted_intent == Maneuver::TurnLeft) {
      s.head_yaw_delta = profile.turn_head_yaw;
      s.wrist_flexion = profile.turn_wrist_flexion;
    } else if (scripted_intent == Maneuver::TurnRight) {
      s.head_yaw_delta = -profile.turn_head_yaw;
      s.wrist_flexion = -profile.turn_wrist_flexion;
    } else if (scripted_intent == Maneuver::Brake) {
      s.decel_cue = true;
    }
  }
  s.head_yaw_delta += noise.head_yaw_std * rng.normal();
  s.wrist_flexion = std::clamp(s.wrist_flexion + noise.wrist_std * rng.normal(), -1.0, 1.0);
  return s;
}

}  // namespace wearsafe

#endif  // WEARSAFE__SENSING_HPP_
