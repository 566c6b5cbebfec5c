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

#ifndef WEARSAFE__INTENT_HPP_
#define WEARSAFE__INTENT_HPP_

#include "wearsafe/sensing.hpp"
#include "wearsafe/world.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <deque>
#include <stdexcept>

namespace wearsafe
{

/// Probability per maneuver, indexed by the canonical maneuver order.
struct IntentDistribution
{
  std::array<double, kManeuverCount> probs{};

  double operator[](Maneuver m) const { return probs[index_of(m)]; }
  double & operator[](Maneuver m) { return probs[index_of(m)]; }

  Maneuver argmax() const
  {
    return kAllManeuvers[static_cast<std::size_t>(
      std::max_element(probs.begin(), probs.end()) - probs.begin())];
  }

  bool valid(double floor = 0.0, double tol = 1e-9) const
  {
    double sum = 0.0;
    for (double p : probs) {
      if (!(p >= floor - tol) || p > 1.0 + tol) {
        return false;
      }
      sum += p;
    }
    return std::abs(sum - 1.0) <= tol;
  }

  static IntentDistribution uniform()
  {
    IntentDistribution d;
    d.probs.fill(1.0 / kManeuverCount);
    return d;
  }

  bool operator==(const IntentDistribution &) const = default;
};

inline constexpr double kIntentFloor = 0.01;

namespace detail
{

// Sums with the turn pair added first, so mirroring left and right leaves the
// result bit-identical.
inline double mirror_stable_sum(const std::array<double, kManeuverCount> & v)
{
  return v[0] + (v[1] + v[2]) + v[3] + v[4];
}

}  // namespace detail

/// Normalizes non-negative scores and lifts every entry to at least `floor`,
/// rescaling the unfloored entries so the total stays 1.
inline IntentDistribution normalize_with_floor(
  const std::array<double, kManeuverCount> & scores, double floor = kIntentFloor)
{
  if (!(floor >= 0.0) || floor * kManeuverCount > 1.0) {
    throw std::invalid_argument("intent floor out of range");
  }
  for (double s : scores) {
    if (!(s >= 0.0) || !std::isfinite(s)) {
      throw std::invalid_argument("intent scores must be finite and non-negative");
    }
  }
  const double total = detail::mirror_stable_sum(scores);
  IntentDistribution d;
  if (total <= 0.0) {
    return IntentDistribution::uniform();
  }
  for (std::size_t i = 0; i < kManeuverCount; ++i) {
    d.probs[i] = scores[i] / total;
  }

  std::array<bool, kManeuverCount> pinned{};
  for (std::size_t iter = 0; iter < kManeuverCount; ++iter) {
    bool changed = false;
    for (std::size_t i = 0; i < kManeuverCount; ++i) {
      if (!pinned[i] && d.probs[i] < floor) {
        pinned[i] = true;
        changed = true;
      }
    }
    if (!changed) {
      break;
    }
    std::array<double, kManeuverCount> free{};
    std::size_t n_pinned = 0;
    for (std::size_t i = 0; i < kManeuverCount; ++i) {
      if (pinned[i]) {
        ++n_pinned;
      } else {
        free[i] = d.probs[i];
      }
    }
    const double free_mass = detail::mirror_stable_sum(free);
    const double target = 1.0 - static_cast<double>(n_pinned) * floor;
    for (std::size_t i = 0; i < kManeuverCount; ++i) {
      d.probs[i] = pinned[i] ? floor : d.probs[i] * (target / free_mass);
    }
  }
  return d;
}

/// Intent concentrated on one maneuver, every other entry at the floor.
inline IntentDistribution collapsed_intent(Maneuver m, double floor = kIntentFloor)
{
  IntentDistribution d;
  d.probs.fill(floor);
  d[m] = 1.0 - floor * (kManeuverCount - 1);
  return d;
}

/// Sliding window over the most recent cue samples.
class CueWindow
{
public:
  explicit CueWindow(double span = 0.5) : span_(span) {}

  void push(const CueSample & s)
  {
    if (!samples_.empty() && !(s.time > samples_.back().time)) {
      throw std::invalid_argument("CueWindow: timestamps must be strictly increasing");
    }
    samples_.push_back(s);
    while (samples_.front().time < s.time - span_ - 1e-9) {
      samples_.pop_front();
    }
  }

  bool empty() const { return samples_.empty(); }
  std::size_t size() const { return samples_.size(); }
  double span() const { return span_; }
  const std::deque<CueSample> & samples() const { return samples_; }
  const CueSample & latest() const { return samples_.back(); }

private:
  double span_;
  std::deque<CueSample> samples_;
};

struct IntentWeights
{
  double head{3.0};
  double wrist{2.0};
  double decel{2.5};
  double prior_maintain{1.0};
  double floor{kIntentFloor};
};

/// Pluggable intent model; a learned estimator can replace the rule-based one.
class IntentEstimator
{
public:
  virtual ~IntentEstimator() = default;
  virtual IntentDistribution estimate(const CueWindow & window, const FusedEstimate & est) const = 0;
};

/// Rule-based scoring: turn scores from mean head yaw and wrist flexion,
/// brake score from the fraction of deceleration cues, a fixed prior on
/// maintaining course, and a zero baseline for accelerating.
inline IntentDistribution estimate_intent(
  const CueWindow & window, const FusedEstimate & /*est*/, const IntentWeights & w = {})
{
  if (window.empty()) {
    throw std::invalid_argument("estimate_intent: empty cue window");
  }
  double head = 0.0;
  double wrist = 0.0;
  double decel = 0.0;
  for (const auto & s : window.samples()) {
    head += s.head_yaw_delta;
    wrist += s.wrist_flexion;
    decel += s.decel_cue ? 1.0 : 0.0;
  }
  const double n = static_cast<double>(window.size());
  head /= n;
  wrist /= n;
  decel /= n;

  std::array<double, kManeuverCount> scores{};
  scores[index_of(Maneuver::MaintainCourse)] = w.prior_maintain;
  scores[index_of(Maneuver::TurnLeft)] = w.head * std::max(head, 0.0) + w.wrist * std::max(wrist, 0.0);
  scores[index_of(Maneuver::TurnRight)] =
    w.head * std::max(-head, 0.0) + w.wrist * std::max(-wrist, 0.0);
  scores[index_of(Maneuver::Brake)] = w.decel * decel;
  scores[index_of(Maneuver::Accelerate)] = 0.0;
  return normalize_with_floor(scores, w.floor);
}

class RuleBasedIntentEstimator final : public IntentEstimator
{
public:
  explicit RuleBasedIntentEstimator(IntentWeights w = {}) : weights_(w) {}

  IntentDistribution estimate(const CueWindow & window, const FusedEstimate & est) const override
  {
    return estimate_intent(window, est, weights_);
  }

  const IntentWeights & weights() const { return weights_; }

private:
  IntentWeights weights_;
};

}  // namespace wearsafe

#endif  // WEARSAFE__INTENT_HPP_
