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

#ifndef WEARSAFE__EXPERIMENTS_HPP_
#define WEARSAFE__EXPERIMENTS_HPP_

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "wearsafe/rng.hpp"
#include "wearsafe/scenario.hpp"

namespace wearsafe::experiments
{

inline constexpr double kPi = std::numbers::pi;

inline AgentSpec agent(std::uint32_t id, TransportMode mode, Vec2 pos, double heading, double speed)
{
  AgentSpec a;
  a.id = AgentId{id};
  a.mode = mode;
  a.initial.position = pos;
  a.initial.heading = normalize_angle(heading);
  a.initial.speed = speed;
  return a;
}

/// Agent that reaches `meet` at time `t_meet` travelling straight on `heading`.
inline AgentSpec arriving(
  std::uint32_t id, TransportMode mode, Vec2 meet, double heading, double speed, double t_meet)
{
  return agent(id, mode, meet - unit_heading(heading) * (speed * t_meet), heading, speed);
}

inline double cruise_speed(TransportMode m, RngStream & rng)
{
  switch (m) {
    case TransportMode::Pedestrian: return rng.uniform(1.2, 1.8);
    case TransportMode::Bicycle: return rng.uniform(4.0, 7.0);
    case TransportMode::Motorcycle: return rng.uniform(9.0, 14.0);
    case TransportMode::Car: return rng.uniform(8.0, 14.0);
  }
  return 1.0;
}

inline std::pair<TransportMode, TransportMode> mode_pair(std::uint64_t k)
{
  using M = TransportMode;
  static constexpr std::pair<M, M> pairs[] = {
    {M::Car, M::Car},     {M::Car, M::Pedestrian}, {M::Car, M::Bicycle},
    {M::Bicycle, M::Pedestrian}, {M::Motorcycle, M::Car}, {M::Bicycle, M::Bicycle}};
  return pairs[k % std::size(pairs)];
}

/// Two agents on straight courses that meet at the same instant: head-on for
/// even indices, crossing at 60 to 120 degrees for odd ones.
inline Scenario collision_course(std::uint64_t index, double t_meet_lo = 9.0, double t_meet_hi = 12.0)
{
  RngStream rng(derive_stream_seed(0xC011, index, "collision_course"));
  const auto [ma, mb] = mode_pair(index / 2);
  const double t_meet = rng.uniform(t_meet_lo, t_meet_hi);
  const double base = rng.uniform(-kPi, kPi);
  const double rel = index % 2 == 0 ? kPi + rng.uniform(-0.05, 0.05) : rng.uniform(kPi / 3, 2 * kPi / 3);
  const Vec2 meet{rng.uniform(-50, 50), rng.uniform(-50, 50)};
  const Vec2 skew = unit_heading(rng.uniform(-kPi, kPi)) * rng.uniform(0.0, 0.2);
  Scenario s;
  s.name = std::string(index % 2 == 0 ? "head_on_" : "crossing_") + std::to_string(index);
  s.seed = 1000 + index;
  s.duration = std::round((t_meet + 8.0) * 10.0) / 10.0;
  s.agents.push_back(arriving(1, ma, meet, base, cruise_speed(ma, rng), t_meet));
  s.agents.push_back(arriving(2, mb, meet + skew, base + rel, cruise_speed(mb, rng), t_meet));
  return s;
}

/// Two agents whose straight courses never come within `clearance` meters:
/// opposite-direction lanes offset sideways, or crossings separated in time.
inline Scenario pass_by(std::uint64_t index, double clearance_lo = 20.0, double clearance_hi = 40.0)
{
  RngStream rng(derive_stream_seed(0xB1, index, "pass_by"));
  const auto [ma, mb] = mode_pair(index / 2);
  const double va = cruise_speed(ma, rng);
  const double vb = cruise_speed(mb, rng);
  const double base = rng.uniform(-kPi, kPi);
  const double clearance = rng.uniform(clearance_lo, clearance_hi);
  const Vec2 meet{rng.uniform(-50, 50), rng.uniform(-50, 50)};
  Scenario s;
  s.seed = 5000 + index;
  s.duration = 20.0;
  if (index % 2 == 0) {
    s.name = "pass_lanes_" + std::to_string(index);
    const Vec2 side = unit_heading(base + kPi / 2) * clearance;
    s.agents.push_back(arriving(1, ma, meet, base, va, 10.0));
    s.agents.push_back(arriving(2, mb, meet + side, base + kPi, vb, 10.0));
  } else {
    // Crossing: b reaches the intersection after a is `clearance` meters past it.
    s.name = "pass_crossing_" + std::to_string(index);
    const double rel = rng.uniform(kPi / 3, 2 * kPi / 3);
    const double t_a = 6.0;
    const double lag = (clearance + 4.0) / std::min(va, vb) + 2.0;
    s.agents.push_back(arriving(1, ma, meet, base, va, t_a));
    s.agents.push_back(arriving(2, mb, meet, base + rel, vb, t_a + lag));
    s.duration = std::ceil(t_a + lag + 8.0);
  }
  return s;
}

/// Conflicts that are already inside the imminence window when first seen.
inline Scenario imminent(std::uint64_t index)
{
  RngStream rng(derive_stream_seed(0x1A, index, "imminent"));
  using M = TransportMode;
  const M ma = index % 3 == 0 ? M::Bicycle : M::Car;
  const M mb = index % 2 == 0 ? M::Bicycle : M::Pedestrian;
  const double t_meet = rng.uniform(2.2, 2.8);
  const double base = rng.uniform(-kPi, kPi);
  const double rel = index % 2 == 0 ? kPi : rng.uniform(kPi / 3, 2 * kPi / 3);
  Scenario s;
  s.name = "imminent_" + std::to_string(index);
  s.seed = 9000 + index;
  s.duration = 6.0;
  s.agents.push_back(arriving(1, ma, {0, 0}, base, std::min(cruise_speed(ma, rng), 8.0), t_meet));
  s.agents.push_back(arriving(2, mb, {0, 0}, base + rel, cruise_speed(mb, rng), t_meet));
  return s;
}

/// Crossing cars where the agent told to brake (the lower id) ignores all advice.
inline Scenario reversal_canonical()
{
  Scenario s;
  s.name = "reversal";
  s.seed = 77;
  s.duration = 20.0;
  s.agents.push_back(arriving(1, TransportMode::Car, {0, 0}, 0.0, 10.0, 10.0));
  s.agents.push_back(arriving(2, TransportMode::Car, {0, 0}, kPi / 2, 10.0, 10.0));
  s.agents[0].compliance_prob = 0.0;
  return s;
}

/// A collision course plus a third agent that injects teleporting BSMs.
inline Scenario with_spoofer(Scenario s, std::uint64_t index)
{
  RngStream rng(derive_stream_seed(0x5900F, index, "spoofer"));
  auto spy = agent(
    99, TransportMode::Bicycle, {rng.uniform(-300, 300), rng.uniform(200, 300)}, rng.uniform(-kPi, kPi), 5.0);
  spy.spoof = SpoofSpec{};
  spy.spoof->start = 5.0;
  spy.spoof->period = 0.5;
  spy.spoof->offset = rng.uniform(150.0, 300.0);
  s.agents.push_back(spy);
  s.name += "_spoofed";
  return s;
}

inline Scenario without_spoofing(Scenario s)
{
  for (auto & a : s.agents) a.spoof.reset();
  return s;
}

/// Two cars in parallel lanes 12 m apart, same direction and speed, with
/// differential-GPS positioning (sigma 0.3 m). At 10 m the horizon-end
/// MaintainCourse discs overlap whenever a report falls between fixes.
inline Scenario parallel_lanes()
{
  Scenario s;
  s.name = "parallel_lanes";
  s.seed = 10;
  s.duration = 20.0;
  s.agents.push_back(agent(1, TransportMode::Car, {0, 0}, 0.0, 12.0));
  s.agents.push_back(agent(2, TransportMode::Car, {0, 12}, 0.0, 12.0));
  for (auto & a : s.agents) a.sensors.sigma_gps = 0.3;
  return s;
}

}  // namespace wearsafe::experiments

#endif  // WEARSAFE__EXPERIMENTS_HPP_
