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

#ifndef WEARSAFE__NETSIM_HPP_
#define WEARSAFE__NETSIM_HPP_

#include "wearsafe/geometry.hpp"
#include "wearsafe/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <queue>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace wearsafe
{

enum class ChannelKind : std::uint8_t { Bluetooth = 0, Cellular = 1 };

constexpr std::string_view to_string(ChannelKind k)
{
  return k == ChannelKind::Bluetooth ? "bluetooth" : "cellular";
}

struct Channel
{
  ChannelKind kind{ChannelKind::Cellular};
  double latency_mean{150.0};  // ms
  double latency_std{50.0};
  double latency_floor{20.0};
  double loss_prob{0.02};
  double range{std::numeric_limits<double>::infinity()};  // meters

  bool valid() const
  {
    return latency_floor > 0.0 && latency_std >= 0.0 && loss_prob >= 0.0 && loss_prob < 1.0 &&
           range > 0.0;
  }
};

inline constexpr Channel default_bluetooth() { return {ChannelKind::Bluetooth, 30.0, 10.0, 5.0, 0.01, 50.0}; }
inline constexpr Channel default_cellular()
{
  return {ChannelKind::Cellular, 150.0, 50.0, 20.0, 0.02, std::numeric_limits<double>::infinity()};
}

struct ChannelSelectConfig
{
  double tau_imminent{3.0};    // s
  double bluetooth_range{50.0};  // m
  bool cellular_only{false};
};

/// Short-range link only when the conflict is imminent and the peers are in range.
inline ChannelKind select_channel(
  std::optional<double> t_conflict, double distance, const ChannelSelectConfig & cfg = {})
{
  if (!(distance >= 0.0)) {
    throw std::invalid_argument("select_channel: distance must be >= 0");
  }
  if (cfg.cellular_only) {
    return ChannelKind::Cellular;
  }
  if (t_conflict && *t_conflict <= cfg.tau_imminent && distance <= cfg.bluetooth_range) {
    return ChannelKind::Bluetooth;
  }
  return ChannelKind::Cellular;
}

/// A named pair of link models plus the selection policy.
struct ChannelProfile
{
  std::string name{"default"};
  Channel bluetooth{default_bluetooth()};
  Channel cellular{default_cellular()};
  ChannelSelectConfig select{};

  const Channel & channel(ChannelKind k) const { return k == ChannelKind::Bluetooth ? bluetooth : cellular; }
};

inline const std::vector<std::string> & channel_profile_names()
{
  static const std::vector<std::string> names{"default", "cellular-only", "lossless"};
  return names;
}

inline std::optional<ChannelProfile> channel_profile(std::string_view name)
{
  ChannelProfile p;
  p.name = std::string(name);
  if (name == "default") {
    return p;
  }
  if (name == "cellular-only") {
    p.select.cellular_only = true;
    return p;
  }
  if (name == "lossless") {
    p.bluetooth.loss_prob = 0.0;
    p.cellular.loss_prob = 0.0;
    return p;
  }
  return std::nullopt;
}

class EmptyQueueError : public std::logic_error
{
public:
  EmptyQueueError() : std::logic_error("pop from empty event queue") {}
};

template <typename Payload>
struct Event
{
  SimMillis due{0};
  std::uint64_t seq{0};
  Payload payload{};
};

/// Min-queue on (due, seq); seq is assigned in scheduling order, so events
/// due at the same time pop first-scheduled first.
template <typename Payload>
class EventQueue
{
public:
  std::uint64_t schedule(SimMillis due, Payload payload)
  {
    const std::uint64_t seq = next_seq_++;
    heap_.push(Event<Payload>{due, seq, std::move(payload)});
    return seq;
  }

  Event<Payload> pop()
  {
    if (heap_.empty()) {
      throw EmptyQueueError();
    }
    // priority_queue::top is const; the payload is copied out once.
    Event<Payload> e = heap_.top();
    heap_.pop();
    return e;
  }

  const Event<Payload> & peek() const
  {
    if (heap_.empty()) {
      throw EmptyQueueError();
    }
    return heap_.top();
  }

  bool empty() const { return heap_.empty(); }
  std::size_t size() const { return heap_.size(); }
  std::uint64_t scheduled_count() const { return next_seq_; }

private:
  struct Later
  {
    bool operator()(const Event<Payload> & a, const Event<Payload> & b) const
    {
      return a.due != b.due ? a.due > b.due : a.seq > b.seq;
    }
  };
  std::priority_queue<Event<Payload>, std::vector<Event<Payload>>, Later> heap_;
  std::uint64_t next_seq_{0};
};

struct TransmitOutcome
{
  bool dropped{false};
  SimMillis latency_ms{0};
  SimMillis due{0};
};

/// Draws loss then latency from the channel stream (both draws always happen).
inline TransmitOutcome draw_transmission(const Channel & channel, SimMillis now, RngStream & rng)
{
  // A loss probability of exactly 1 is accepted here to model a dead link.
  if (!(channel.latency_floor > 0.0) || !(channel.loss_prob >= 0.0 && channel.loss_prob <= 1.0)) {
    throw std::invalid_argument("transmit: invalid channel");
  }
  const double u = rng.uniform();
  const double lat = rng.normal(channel.latency_mean, channel.latency_std);
  TransmitOutcome out;
  out.dropped = u < channel.loss_prob;
  const auto floor_ms = static_cast<SimMillis>(std::ceil(channel.latency_floor));
  out.latency_ms = std::max(floor_ms, static_cast<SimMillis>(std::llround(lat)));
  out.due = now + out.latency_ms;
  return out;
}

/// Schedules a delivery unless the channel drops the message. `make_payload`
/// receives the outcome and returns the event payload.
template <typename Payload, typename MakePayload>
TransmitOutcome transmit(
  const Channel & channel, SimMillis now, RngStream & rng, EventQueue<Payload> & queue,
  MakePayload && make_payload)
{
  const TransmitOutcome out = draw_transmission(channel, now, rng);
  if (!out.dropped) {
    queue.schedule(out.due, make_payload(out));
  }
  return out;
}

}  // namespace wearsafe

#endif  // WEARSAFE__NETSIM_HPP_
