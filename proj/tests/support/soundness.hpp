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

#ifndef WEARSAFE_TESTS__SOUNDNESS_HPP_
#define WEARSAFE_TESTS__SOUNDNESS_HPP_

#include "wearsafe/reachset.hpp"

#include <cstdint>

namespace wearsafe::testing
{

struct SoundnessResult
{
  int rollouts{0};
  int contained{0};
  double rate() const { return rollouts ? static_cast<double>(contained) / rollouts : 0.0; }
};

/// Rollouts: random mode, speed, heading and intent; the true state differs
/// from the estimate by Gaussian position error (per-axis std pos_std) and a
/// small speed error; the true maneuver is drawn from the intent and executed
/// through the motion model. A rollout counts as contained when the true
/// position is inside that maneuver's disc at every step.
inline SoundnessResult run_reach_soundness(
  int rollouts, std::uint64_t seed, double pos_std_lo = 0.5, double pos_std_hi = 3.0,
  double speed_err_std = 0.1, const ReachParams & params = {})
{
  RngStream rng(seed, 0, "soundness");
  SoundnessResult res;
  for (int i = 0; i < rollouts; ++i) {
    const auto mode = kAllModes[static_cast<std::size_t>(rng.uniform() * 4.0) % 4];
    const auto lim = default_limits(mode);
    FusedEstimate est;
    est.time = 0.0;
    est.mean.heading = normalize_angle(rng.uniform(-3.2, 3.2));
    est.mean.speed = rng.uniform(0.0, 0.8 * lim.v_max);
    est.pos_std = rng.uniform(pos_std_lo, pos_std_hi);

    std::array<double, kManeuverCount> scores{};
    for (auto & s : scores) s = rng.uniform();
    const auto intent = normalize_with_floor(scores);
    const auto set = compute_reachable_set(AgentId{1}, est, intent, lim, params);

    double u = rng.uniform();
    std::size_t mi = 0;
    while (mi + 1 < kManeuverCount && u >= intent.probs[mi]) {
      u -= intent.probs[mi];
      ++mi;
    }
    const Maneuver m = kAllManeuvers[mi];

    KinematicState truth = est.mean;
    truth.position.x += est.pos_std * rng.normal();
    truth.position.y += est.pos_std * rng.normal();
    truth.speed = std::clamp(truth.speed + speed_err_std * rng.normal(), 0.0, lim.v_max);
    const auto ctrl = maneuver_to_control(m, truth, lim);

    bool inside = true;
    for (std::size_t k = 0; k < set.steps.size(); ++k) {
      const auto & d = set.steps[k][mi];
      if (distance(d.center, truth.position) > d.radius) {
        inside = false;
        break;
      }
      truth = step(truth, ctrl, lim, params.dt_reach);
    }
    ++res.rollouts;
    res.contained += inside ? 1 : 0;
  }
  return res;
}

}  // namespace wearsafe::testing

#endif  // WEARSAFE_TESTS__SOUNDNESS_HPP_
