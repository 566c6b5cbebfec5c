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

#ifndef WEARSAFE_TESTS__WIRE_FUZZ_HPP_
#define WEARSAFE_TESTS__WIRE_FUZZ_HPP_

#include <cmath>
#include <numbers>
#include <vector>

#include "wearsafe/rng.hpp"
#include "wearsafe/wire.hpp"

namespace wearsafe::testing
{

/// Random BSM with every field inside its encodable range.
inline Bsm random_bsm(RngStream & rng)
{
  Bsm b;
  b.sender = AgentId{static_cast<std::uint32_t>(rng.next_u64())};
  b.seq = static_cast<std::uint32_t>(rng.next_u64());
  b.timestamp_ms = static_cast<SimMillis>(rng.uniform(0, 1e9));
  b.state.position = {rng.uniform(-19999, 19999), rng.uniform(-19999, 19999)};
  b.state.heading = normalize_angle(rng.uniform(-4, 4));
  b.state.speed = rng.uniform(0, 60);
  b.state.accel = rng.uniform(-10, 10);
  b.state.yaw_rate = rng.uniform(-3, 3);
  b.mode = kAllModes[rng.next_u64() % 4];
  b.gaze_covers_conflict = rng.bernoulli(0.5);
  std::array<double, kManeuverCount> s{};
  for (auto & v : s) v = rng.uniform();
  b.intent = normalize_with_floor(s);
  b.reach.agent = b.sender;
  b.reach.t0 = rng.uniform(0, 1e6);
  b.reach.dt_reach = 0.2;
  const auto n = 1 + rng.next_u64() % 31;
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<WeightedDisc> step;
    for (auto p : b.intent.probs) {
      step.push_back({{rng.uniform(-19000, 19000), rng.uniform(-19000, 19000)}, rng.uniform(0.1, 50), p});
    }
    b.reach.steps.push_back(step);
  }
  return b;
}

/// True when y decodes x up to the documented quantization steps.
inline bool within_quantization(const Bsm & x, const Bsm & y)
{
  constexpr double cm = 0.005 + 1e-9;
  constexpr double prob = 1.0 / 65535.0;
  auto near = [](double a, double b, double tol) { return std::abs(a - b) <= tol; };
  bool ok = x.sender == y.sender && x.seq == y.seq && x.timestamp_ms == y.timestamp_ms &&
            near(x.state.position.x, y.state.position.x, cm) && near(x.state.position.y, y.state.position.y, cm) &&
            near(normalize_angle(x.state.heading - y.state.heading), 0.0, std::numbers::pi / 65536 + 1e-12) &&
            near(x.state.speed, y.state.speed, cm) && near(x.state.accel, y.state.accel, cm) &&
            near(x.state.yaw_rate, y.state.yaw_rate, 0.0005 + 1e-12) && x.mode == y.mode &&
            x.gaze_covers_conflict == y.gaze_covers_conflict && near(x.reach.t0, y.reach.t0, 0.0005 + 1e-9) &&
            x.reach.steps.size() == y.reach.steps.size();
  for (std::size_t i = 0; ok && i < kManeuverCount; ++i) ok = near(x.intent.probs[i], y.intent.probs[i], prob);
  for (std::size_t k = 0; ok && k < x.reach.steps.size(); ++k) {
    ok = x.reach.steps[k].size() == y.reach.steps[k].size();
    for (std::size_t i = 0; ok && i < x.reach.steps[k].size(); ++i) {
      const auto & a = x.reach.steps[k][i];
      const auto & b = y.reach.steps[k][i];
      ok = near(a.center.x, b.center.x, cm) && near(a.center.y, b.center.y, cm) && near(a.radius, b.radius, cm) &&
           near(a.prob, b.prob, prob);
    }
  }
  return ok;
}

}  // namespace wearsafe::testing

#endif  // WEARSAFE_TESTS__WIRE_FUZZ_HPP_
