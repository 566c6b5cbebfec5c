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

#ifndef WEARSAFE__WORLD_HPP_
#define WEARSAFE__WORLD_HPP_

#include "wearsafe/geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace wearsafe
{

enum class TransportMode : std::uint8_t { Pedestrian = 0, Bicycle = 1, Motorcycle = 2, Car = 3 };

inline constexpr std::array<TransportMode, 4> kAllModes{
  TransportMode::Pedestrian, TransportMode::Bicycle, TransportMode::Motorcycle, TransportMode::Car};

/// Higher rank means more vulnerable. Pedestrian > Bicycle > Motorcycle > Car.
constexpr int vulnerability_rank(TransportMode m)
{
  switch (m) {
    case TransportMode::Pedestrian: return 3;
    case TransportMode::Bicycle: return 2;
    case TransportMode::Motorcycle: return 1;
    case TransportMode::Car: return 0;
  }
  return 0;
}

constexpr std::string_view to_string(TransportMode m)
{
  switch (m) {
    case TransportMode::Pedestrian: return "pedestrian";
    case TransportMode::Bicycle: return "bicycle";
    case TransportMode::Motorcycle: return "motorcycle";
    case TransportMode::Car: return "car";
  }
  return "?";
}

inline std::optional<TransportMode> parse_mode(std::string_view s)
{
  for (auto m : kAllModes) {
    if (to_string(m) == s) {
      return m;
    }
  }
  return std::nullopt;
}

/// Canonical ordering; serialization and intent vectors index by this value.
enum class Maneuver : std::uint8_t {
  MaintainCourse = 0,
  TurnLeft = 1,
  TurnRight = 2,
  Brake = 3,
  Accelerate = 4,
};

inline constexpr std::size_t kManeuverCount = 5;
inline constexpr std::array<Maneuver, kManeuverCount> kAllManeuvers{
  Maneuver::MaintainCourse, Maneuver::TurnLeft, Maneuver::TurnRight, Maneuver::Brake,
  Maneuver::Accelerate};

constexpr std::size_t index_of(Maneuver m) { return static_cast<std::size_t>(m); }

constexpr std::string_view to_string(Maneuver m)
{
  switch (m) {
    case Maneuver::MaintainCourse: return "maintain_course";
    case Maneuver::TurnLeft: return "turn_left";
    case Maneuver::TurnRight: return "turn_right";
    case Maneuver::Brake: return "brake";
    case Maneuver::Accelerate: return "accelerate";
  }
  return "?";
}

inline std::optional<Maneuver> parse_maneuver(std::string_view s)
{
  for (auto m : kAllManeuvers) {
    if (to_string(m) == s) {
      return m;
    }
  }
  return std::nullopt;
}

/// Left/right mirror of a maneuver; other maneuvers are their own mirror.
constexpr Maneuver mirror(Maneuver m)
{
  if (m == Maneuver::TurnLeft) return Maneuver::TurnRight;
  if (m == Maneuver::TurnRight) return Maneuver::TurnLeft;
  return m;
}

struct KinematicState
{
  Vec2 position{};
  double heading{0.0};   // rad, [-pi, pi)
  double speed{0.0};     // m/s, >= 0
  double yaw_rate{0.0};  // rad/s
  double accel{0.0};     // m/s^2 along heading

  bool valid() const
  {
    return position.finite() && std::isfinite(heading) && std::isfinite(speed) &&
           std::isfinite(yaw_rate) && std::isfinite(accel) && speed >= 0.0 &&
           heading >= -std::numbers::pi && heading < std::numbers::pi;
  }

  bool operator==(const KinematicState &) const = default;
};

struct ModeLimits
{
  double v_max{0.0};
  double a_max{0.0};
  double a_min{0.0};
  double yaw_rate_max{0.0};
  double footprint_radius{0.0};

  bool valid() const
  {
    return v_max > 0.0 && a_max > 0.0 && a_min < 0.0 && yaw_rate_max > 0.0 &&
           footprint_radius > 0.0 && std::isfinite(v_max) && std::isfinite(a_max) &&
           std::isfinite(a_min) && std::isfinite(yaw_rate_max) && std::isfinite(footprint_radius);
  }

  bool operator==(const ModeLimits &) const = default;
};

struct ControlInput
{
  double accel_cmd{0.0};
  double yaw_rate_cmd{0.0};

  bool operator==(const ControlInput &) const = default;
};

/// Fraction of the mode's yaw-rate limit used by a turn maneuver.
inline constexpr double kTurnFraction = 0.5;

/// The frozen per-mode parameter table (mirrored in assets/mode_limits.json).
constexpr ModeLimits default_limits(TransportMode mode)
{
  switch (mode) {
    case TransportMode::Pedestrian: return {2.5, 1.5, -2.0, 3.0, 0.4};
    case TransportMode::Bicycle: return {10.0, 2.0, -4.0, 0.8, 0.6};
    case TransportMode::Motorcycle: return {30.0, 4.0, -7.0, 0.6, 0.8};
    case TransportMode::Car: return {30.0, 3.0, -8.0, 0.5, 1.2};
  }
  return {};
}

inline ControlInput maneuver_to_control(Maneuver m, const KinematicState & /*state*/, const ModeLimits & limits)
{
  switch (m) {
    case Maneuver::MaintainCourse: return {0.0, 0.0};
    case Maneuver::Brake: return {limits.a_min, 0.0};
    case Maneuver::Accelerate: return {limits.a_max, 0.0};
    case Maneuver::TurnLeft: return {0.0, limits.yaw_rate_max * kTurnFraction};
    case Maneuver::TurnRight: return {0.0, -limits.yaw_rate_max * kTurnFraction};
  }
  return {};
}

namespace detail
{

// Exact displacement of a unicycle with constant accel a and yaw rate w over
// duration T, starting at heading th and speed v (no saturation inside).
inline Vec2 unicycle_displacement(double th, double v, double a, double w, double T)
{
  const double wt = w * T;
  if (std::abs(wt) < 1e-3) {
    // Fourth-order expansion of the closed form; avoids the a/w^2 cancellation.
    const double T2 = T * T;
    const double T3 = T2 * T;
    const double T4 = T3 * T;
    const double i0 = v * T + a * T2 / 2.0;
    const double i1 = v * T2 / 2.0 + a * T3 / 3.0;
    const double i2 = v * T3 / 3.0 + a * T4 / 4.0;
    const double i3 = v * T4 / 4.0 + a * T4 * T / 5.0;
    const double c = std::cos(th);
    const double s = std::sin(th);
    const double w2 = w * w / 2.0;
    const double w3 = w * w * w / 6.0;
    return {
      c * i0 - w * s * i1 - w2 * c * i2 + w3 * s * i3,
      s * i0 + w * c * i1 - w2 * s * i2 - w3 * c * i3};
  }
  const double th1 = th + wt;
  const double v1 = v + a * T;
  const double w_sq = w * w;
  return {
    (v1 * std::sin(th1) - v * std::sin(th)) / w + a * (std::cos(th1) - std::cos(th)) / w_sq,
    (v * std::cos(th) - v1 * std::cos(th1)) / w + a * (std::sin(th1) - std::sin(th)) / w_sq};
}

inline void require(bool cond, const char * what)
{
  if (!cond) {
    throw std::invalid_argument(what);
  }
}

}  // namespace detail

/// Exact-arc unicycle update. Speed saturates at [0, v_max]; the position is
/// integrated in closed form over the accelerating and the saturated segment.
inline KinematicState step(
  const KinematicState & state, const ControlInput & u, const ModeLimits & limits, double dt)
{
  detail::require(std::isfinite(dt) && dt > 0.0, "step: dt must be finite and positive");
  detail::require(state.valid(), "step: invalid kinematic state");
  detail::require(
    std::isfinite(u.accel_cmd) && std::isfinite(u.yaw_rate_cmd), "step: non-finite control");
  detail::require(limits.valid(), "step: invalid mode limits");

  const double v0 = std::min(state.speed, limits.v_max);
  const double a = u.accel_cmd;
  const double w = u.yaw_rate_cmd;

  // Duration of the unsaturated segment.
  double t_free = dt;
  if (a > 0.0) {
    t_free = std::min(dt, (limits.v_max - v0) / a);
  } else if (a < 0.0) {
    t_free = std::min(dt, v0 / -a);
  }
  t_free = std::max(t_free, 0.0);

  KinematicState out = state;
  out.position += detail::unicycle_displacement(state.heading, v0, a, w, t_free);
  double v1 = std::clamp(v0 + a * t_free, 0.0, limits.v_max);
  double th1 = state.heading + w * t_free;
  const double t_rest = dt - t_free;
  if (t_rest > 0.0) {
    out.position += detail::unicycle_displacement(th1, v1, 0.0, w, t_rest);
    th1 += w * t_rest;
  }
  out.heading = normalize_angle(th1);
  out.speed = std::clamp(v0 + a * dt, 0.0, limits.v_max);
  out.yaw_rate = w;
  out.accel = t_rest > 0.0 ? 0.0 : a;
  return out;
}

}  // namespace wearsafe

#endif  // WEARSAFE__WORLD_HPP_
