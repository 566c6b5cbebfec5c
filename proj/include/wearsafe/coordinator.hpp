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

#ifndef WEARSAFE__COORDINATOR_HPP_
#define WEARSAFE__COORDINATOR_HPP_

#include "wearsafe/reachset.hpp"
#include "wearsafe/rng.hpp"
#include "wearsafe/wire.hpp"
#include "wearsafe/world.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numbers>
#include <optional>
#include <set>
#include <stdexcept>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace wearsafe
{

// ---------------------------------------------------------------------------
// Plausibility

enum class RejectReason : std::uint8_t { None, Teleport, Overspeed, TimestampRegression, SeqRegression };

constexpr std::string_view to_string(RejectReason r)
{
  switch (r) {
    case RejectReason::None: return "none";
    case RejectReason::Teleport: return "teleport";
    case RejectReason::Overspeed: return "overspeed";
    case RejectReason::TimestampRegression: return "timestamp_regression";
    case RejectReason::SeqRegression: return "seq_regression";
  }
  return "?";
}

struct PlausibilityVerdict
{
  bool accept{true};
  RejectReason reason{RejectReason::None};
};

inline constexpr double kPlausibilitySpeedFactor = 1.5;
inline constexpr double kPlausibilitySlack = 5.0;  // m

/// Kinematic sanity check of a BSM against the sender's previous accepted one.
inline PlausibilityVerdict plausibility_filter(
  const std::optional<Bsm> & prev, const Bsm & next, const ModeLimits & limits)
{
  const double v_cap = kPlausibilitySpeedFactor * limits.v_max;
  if (next.state.speed > v_cap) {
    return {false, RejectReason::Overspeed};
  }
  if (prev) {
    if (next.timestamp_ms < prev->timestamp_ms) {
      return {false, RejectReason::TimestampRegression};
    }
    if (next.seq <= prev->seq) {
      return {false, RejectReason::SeqRegression};
    }
    const double dt = to_seconds(next.timestamp_ms - prev->timestamp_ms);
    const double moved = distance(next.state.position, prev->state.position);
    if (moved > v_cap * dt + kPlausibilitySlack) {
      return {false, RejectReason::Teleport};
    }
  }
  return {true, RejectReason::None};
}

// ---------------------------------------------------------------------------
// Registry

struct RegistryEntry
{
  Bsm bsm;
  SimMillis arrival{0};
};

class Registry
{
public:
  explicit Registry(double t_stale = 2.0) : t_stale_(t_stale) {}

  void upsert(const Bsm & b, SimMillis arrival) { entries_[b.sender] = RegistryEntry{b, arrival}; }

  const RegistryEntry * find(AgentId id) const
  {
    auto it = entries_.find(id);
    return it == entries_.end() ? nullptr : &it->second;
  }

  bool is_fresh(const RegistryEntry & e, SimMillis now) const
  {
    return now - e.bsm.timestamp_ms <= to_millis(t_stale_);
  }

  const RegistryEntry * fresh(AgentId id, SimMillis now) const
  {
    const auto * e = find(id);
    return e && is_fresh(*e, now) ? e : nullptr;
  }

  /// Fresh entries in agent-id order.
  std::vector<const RegistryEntry *> fresh_entries(SimMillis now) const
  {
    std::vector<const RegistryEntry *> out;
    for (const auto & [id, e] : entries_) {
      if (is_fresh(e, now)) {
        out.push_back(&e);
      }
    }
    return out;
  }

  const std::map<AgentId, RegistryEntry> & entries() const { return entries_; }
  double t_stale() const { return t_stale_; }
  std::size_t size() const { return entries_.size(); }

private:
  double t_stale_;
  std::map<AgentId, RegistryEntry> entries_;
};

/// Two reach sets can be scanned when their start times are within one grid step.
inline bool comparable(const ReachableSet & a, const ReachableSet & b)
{
  return std::abs(a.dt_reach - b.dt_reach) <= 1e-9 && std::abs(a.t0 - b.t0) <= a.dt_reach + 1e-9;
}

inline bool canonical_less(const Conflict & x, const Conflict & y)
{
  if (x.t_first != y.t_first) return x.t_first < y.t_first;
  if (x.agent_a != y.agent_a) return x.agent_a < y.agent_a;
  return x.agent_b < y.agent_b;
}

namespace detail
{

struct Box
{
  double x0, y0, x1, y1;
};

inline Box reach_bounds(const ReachableSet & r, double pad)
{
  Box b{1e300, 1e300, -1e300, -1e300};
  for (const auto & s : r.steps) {
    for (const auto & d : s) {
      b.x0 = std::min(b.x0, d.center.x - d.radius - pad);
      b.y0 = std::min(b.y0, d.center.y - d.radius - pad);
      b.x1 = std::max(b.x1, d.center.x + d.radius + pad);
      b.y1 = std::max(b.y1, d.center.y + d.radius + pad);
    }
  }
  return b;
}

}  // namespace detail

/// Candidate pairs (indices into `sets`) whose bounding boxes share a cell of
/// a uniform grid sized to the largest reach extent.
inline std::vector<std::pair<std::size_t, std::size_t>> grid_candidate_pairs(
  const std::vector<const ReachableSet *> & sets, double d_safe)
{
  std::vector<detail::Box> boxes;
  double cell = 1.0;
  for (const auto * s : sets) {
    boxes.push_back(detail::reach_bounds(*s, d_safe / 2.0));
    cell = std::max({cell, boxes.back().x1 - boxes.back().x0, boxes.back().y1 - boxes.back().y0});
  }
  std::map<std::pair<long long, long long>, std::vector<std::size_t>> grid;
  for (std::size_t i = 0; i < boxes.size(); ++i) {
    const auto & b = boxes[i];
    for (auto gx = static_cast<long long>(std::floor(b.x0 / cell));
         gx <= static_cast<long long>(std::floor(b.x1 / cell)); ++gx) {
      for (auto gy = static_cast<long long>(std::floor(b.y0 / cell));
           gy <= static_cast<long long>(std::floor(b.y1 / cell)); ++gy) {
        grid[{gx, gy}].push_back(i);
      }
    }
  }
  std::set<std::pair<std::size_t, std::size_t>> pairs;
  for (const auto & [key, members] : grid) {
    for (std::size_t i = 0; i < members.size(); ++i) {
      for (std::size_t j = i + 1; j < members.size(); ++j) {
        const auto & bi = boxes[members[i]];
        const auto & bj = boxes[members[j]];
        if (bi.x0 <= bj.x1 && bj.x0 <= bi.x1 && bi.y0 <= bj.y1 && bj.y0 <= bi.y1) {
          pairs.emplace(std::min(members[i], members[j]), std::max(members[i], members[j]));
        }
      }
    }
  }
  return {pairs.begin(), pairs.end()};
}

/// All pairwise conflicts among fresh, mutually comparable registry entries,
/// ordered by (t_first, agent pair).
inline std::vector<Conflict> detect_conflicts(
  const Registry & registry, SimMillis now, const ScanParams & scan = {}, bool use_prefilter = true)
{
  const auto fresh = registry.fresh_entries(now);
  std::vector<const ReachableSet *> sets;
  sets.reserve(fresh.size());
  for (const auto * e : fresh) {
    sets.push_back(&e->bsm.reach);
  }
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  if (use_prefilter) {
    pairs = grid_candidate_pairs(sets, scan.d_safe);
  } else {
    for (std::size_t i = 0; i < sets.size(); ++i) {
      for (std::size_t j = i + 1; j < sets.size(); ++j) {
        pairs.emplace_back(i, j);
      }
    }
  }
  std::vector<Conflict> out;
  for (const auto & [i, j] : pairs) {
    if (!comparable(*sets[i], *sets[j])) {
      continue;
    }
    if (auto c = conflict_scan(*sets[i], *sets[j], scan)) {
      out.push_back(*c);
    }
  }
  std::sort(out.begin(), out.end(), canonical_less);
  return out;
}

// ---------------------------------------------------------------------------
// Resolution

class StaleConflict : public std::runtime_error
{
public:
  StaleConflict() : std::runtime_error("conflict references a stale registry entry") {}
};

class AlreadyReversed : public std::logic_error
{
public:
  AlreadyReversed() : std::logic_error("conflict record is not in the Active state") {}
};

enum class RecordState : std::uint8_t { Active, Reversed, Cleared, Escalated };

constexpr std::string_view to_string(RecordState s)
{
  switch (s) {
    case RecordState::Active: return "active";
    case RecordState::Reversed: return "reversed";
    case RecordState::Cleared: return "cleared";
    case RecordState::Escalated: return "escalated";
  }
  return "?";
}

constexpr bool transition_allowed(RecordState from, RecordState to)
{
  if (from == RecordState::Active) {
    return to == RecordState::Reversed || to == RecordState::Cleared || to == RecordState::Escalated;
  }
  if (from == RecordState::Reversed) {
    return to == RecordState::Cleared || to == RecordState::Escalated;
  }
  return false;
}

struct CoordinatorConfig
{
  double t_stale{2.0};
  double t_grace{1.0};
  double tau_imminent{3.0};
  ScanParams scan{};
  ReachParams reach{};
  bool plausibility{true};
  bool advisories{true};
  bool gaze_suppression{true};
  bool spatial_prefilter{true};
  int clear_ticks{3};
  double resend_period{0.5};  // s; open records repeat their current pair, 0 disables
};

using LimitsOverrides = std::map<AgentId, ModeLimits>;

inline ModeLimits limits_for(const Bsm & b, const LimitsOverrides & overrides)
{
  auto it = overrides.find(b.sender);
  return it == overrides.end() ? default_limits(b.mode) : it->second;
}

/// Rebuilds a reach set from a registry entry under a fixed maneuver. The
/// position std is recovered from the step-0 disc radius.
inline ReachableSet advised_reach(
  const Bsm & b, Maneuver m, const ModeLimits & limits, const ReachParams & params)
{
  FusedEstimate est;
  est.time = b.reach.t0;
  est.mean = b.state;
  const double r0 = b.reach.steps.front().front().radius;
  est.pos_std = std::max((r0 - limits.footprint_radius) / params.sigma_scale, 1e-6);
  est.speed_std = 0.1;
  ReachParams p = params;
  p.dt_reach = b.reach.dt_reach;
  return compute_reachable_set(b.sender, est, collapsed_intent(m), limits, p);
}

struct Resolution
{
  std::array<Advisory, 2> advisories{};  // [0] targets conflict.agent_a
  bool lateral{false};
  bool escalated{false};
};

inline std::uint64_t conflict_id_for(AgentId a, AgentId b, SimMillis first_detection)
{
  const std::uint64_t pair = (static_cast<std::uint64_t>(a.value) << 32) | b.value;
  return splitmix64(splitmix64(pair) ^ static_cast<std::uint64_t>(first_detection));
}

/// Complementary advisory pair for a detected conflict: the less vulnerable
/// (or lower-id) agent brakes, then a lateral split, then an alarm, taking the
/// first option whose recomputed reach sets no longer conflict.
inline Resolution resolve(
  const Conflict & c, const Registry & registry, SimMillis now, std::uint64_t conflict_id,
  const CoordinatorConfig & cfg = {}, const LimitsOverrides & overrides = {})
{
  const auto * ea = registry.fresh(c.agent_a, now);
  const auto * eb = registry.fresh(c.agent_b, now);
  if (!ea || !eb) {
    throw StaleConflict();
  }
  const ModeLimits la = limits_for(ea->bsm, overrides);
  const ModeLimits lb = limits_for(eb->bsm, overrides);

  const int rank_a = vulnerability_rank(ea->bsm.mode);
  const int rank_b = vulnerability_rank(eb->bsm.mode);
  bool a_brakes;
  if (rank_a != rank_b) {
    a_brakes = rank_a < rank_b;
  } else {
    a_brakes = c.agent_a < c.agent_b;
  }

  auto clear_under = [&](Maneuver ma, Maneuver mb) {
    const auto ra = advised_reach(ea->bsm, ma, la, cfg.reach);
    const auto rb = advised_reach(eb->bsm, mb, lb, cfg.reach);
    return !conflict_scan(ra, rb, cfg.scan).has_value();
  };

  Resolution res;
  Maneuver ma = a_brakes ? Maneuver::Brake : Maneuver::MaintainCourse;
  Maneuver mb = a_brakes ? Maneuver::MaintainCourse : Maneuver::Brake;
  if (!clear_under(ma, mb)) {
    ma = Maneuver::TurnRight;
    mb = Maneuver::TurnRight;
    res.lateral = true;
    if (!clear_under(ma, mb)) {
      ma = Maneuver::Brake;
      mb = Maneuver::Brake;
      res.lateral = false;
      res.escalated = true;
    }
  }

  const double sep = distance(ea->bsm.state.position, eb->bsm.state.position);
  const SimMillis expiry = now + to_millis(cfg.reach.horizon);
  auto make = [&](AgentId target, Maneuver m, const RegistryEntry & self) {
    Advisory adv;
    adv.conflict_id = conflict_id;
    adv.target = target;
    adv.action = m;
    adv.issued_at = now;
    adv.alarm = res.escalated;
    adv.expiry = expiry;
    adv.t_first_ms = to_millis(c.t_first);
    adv.peer_distance = sep;
    if (cfg.gaze_suppression && !res.escalated && self.bsm.gaze_covers_conflict &&
        c.t_first - to_seconds(now) > cfg.tau_imminent) {
      adv.informational = true;
    }
    return adv;
  };
  res.advisories = {make(c.agent_a, ma, *ea), make(c.agent_b, mb, *eb)};
  return res;
}

// ---------------------------------------------------------------------------
// Compliance

enum class Compliance : std::uint8_t { Pending, Compliant, NonCompliant };

constexpr std::string_view to_string(Compliance c)
{
  switch (c) {
    case Compliance::Pending: return "pending";
    case Compliance::Compliant: return "compliant";
    case Compliance::NonCompliant: return "non_compliant";
  }
  return "?";
}

inline constexpr double kMaintainHeadingTolerance = 15.0 * std::numbers::pi / 180.0;
inline constexpr double kMaintainSpeedTolerance = 1.0;
inline constexpr double kTurnHeadingThreshold = 5.0 * std::numbers::pi / 180.0;

/// Compares the target's motion after the grace period with its state when the
/// advisory was issued. Pending until a BSM stamped after the grace period exists.
inline Compliance monitor_compliance(
  const Advisory & adv, const Bsm & baseline, const std::optional<Bsm> & latest,
  const ModeLimits & limits, double t_grace = 1.0)
{
  if (!latest || latest->timestamp_ms < adv.issued_at + to_millis(t_grace)) {
    return Compliance::Pending;
  }
  const double dv = latest->state.speed - baseline.state.speed;
  const double dh = normalize_angle(latest->state.heading - baseline.state.heading);
  bool ok = false;
  switch (adv.action) {
    case Maneuver::Brake: {
      // An agent already slower than the required drop complies by stopping.
      const double required = std::min(
        0.5 * std::abs(limits.a_min) * t_grace, std::max(baseline.state.speed - 0.2, 0.0));
      ok = -dv >= required;
      break;
    }
    case Maneuver::MaintainCourse:
      ok = std::abs(dh) <= kMaintainHeadingTolerance && std::abs(dv) <= kMaintainSpeedTolerance;
      break;
    case Maneuver::TurnLeft: ok = dh >= kTurnHeadingThreshold; break;
    case Maneuver::TurnRight: ok = dh <= -kTurnHeadingThreshold; break;
    case Maneuver::Accelerate: ok = dv >= 0.5 * limits.a_max * t_grace; break;
  }
  return ok ? Compliance::Compliant : Compliance::NonCompliant;
}

struct ConflictRecord
{
  std::uint64_t conflict_id{0};
  Conflict conflict{};
  RecordState state{RecordState::Active};
  std::array<Advisory, 2> advisories{};
  std::array<Bsm, 2> baselines{};  // sender states when the current pair was issued
  SimMillis grace_deadline{0};
  bool lateral{false};
  bool monitoring_done{false};
  int reversals{0};
  int advisory_pairs{0};  // resolution pairs: original plus at most one reversal
  int quiet_ticks{0};
  SimMillis last_sent{0};
};

/// Swaps senses: the formerly passive agent brakes, the formerly active one
/// maintains course. Only an Active record with a brake/maintain pair can reverse.
inline std::array<Advisory, 2> reverse(
  ConflictRecord & rec, const Registry & registry, SimMillis now, const CoordinatorConfig & cfg = {})
{
  if (rec.state != RecordState::Active || rec.reversals > 0) {
    throw AlreadyReversed();
  }
  const auto * ea = registry.find(rec.conflict.agent_a);
  const auto * eb = registry.find(rec.conflict.agent_b);
  if (!ea || !eb) {
    throw StaleConflict();
  }
  std::array<Advisory, 2> out = rec.advisories;
  for (auto & adv : out) {
    adv.action = adv.action == Maneuver::Brake ? Maneuver::MaintainCourse : Maneuver::Brake;
    adv.is_reversal = true;
    adv.informational = false;
    adv.issued_at = now;
    adv.expiry = now + to_millis(cfg.reach.horizon);
    adv.peer_distance = distance(ea->bsm.state.position, eb->bsm.state.position);
  }
  rec.advisories = out;
  rec.baselines = {ea->bsm, eb->bsm};
  rec.grace_deadline = now + to_millis(cfg.t_grace);
  rec.state = RecordState::Reversed;
  rec.reversals += 1;
  rec.advisory_pairs += 1;
  rec.monitoring_done = false;
  return out;
}

// ---------------------------------------------------------------------------
// Coordinator state machine

struct IngestResult
{
  bool accepted{true};
  RejectReason reason{RejectReason::None};
};

struct Transition
{
  std::uint64_t conflict_id{0};
  RecordState from{RecordState::Active};
  RecordState to{RecordState::Active};
};

struct TickOutput
{
  std::vector<Conflict> conflicts;
  std::vector<Advisory> advisories;
  std::vector<Transition> transitions;
  std::vector<std::uint64_t> new_records;
  std::vector<Advisory> resends;  // unchanged advisories repeated for lossy links
};

class Coordinator
{
public:
  explicit Coordinator(CoordinatorConfig cfg = {}, LimitsOverrides overrides = {})
  : cfg_(cfg), overrides_(std::move(overrides)), registry_(cfg.t_stale)
  {
  }

  IngestResult ingest(const Bsm & b, SimMillis arrival)
  {
    const auto * prev_entry = registry_.find(b.sender);
    if (cfg_.plausibility) {
      std::optional<Bsm> prev;
      if (prev_entry) {
        prev = prev_entry->bsm;
      }
      const auto v = plausibility_filter(prev, b, limits_for(b, overrides_));
      if (!v.accept) {
        return {false, v.reason};
      }
    } else if (prev_entry && b.timestamp_ms < prev_entry->bsm.timestamp_ms) {
      // Out-of-order delivery never replaces a newer entry.
      return {true, RejectReason::None};
    }
    registry_.upsert(b, arrival);
    return {true, RejectReason::None};
  }

  TickOutput tick(SimMillis now)
  {
    TickOutput out;
    out.conflicts = detect_conflicts(registry_, now, cfg_.scan, cfg_.spatial_prefilter);
    std::set<std::pair<AgentId, AgentId>> detected;
    for (const auto & c : out.conflicts) {
      detected.emplace(c.agent_a, c.agent_b);
    }

    // Hysteresis and expiry for open records.
    for (auto it = open_.begin(); it != open_.end();) {
      auto & rec = records_.at(it->second);
      const auto * ea = registry_.fresh(rec.conflict.agent_a, now);
      const auto * eb = registry_.fresh(rec.conflict.agent_b, now);
      if (detected.count(it->first)) {
        rec.quiet_ticks = 0;
      } else if (ea && eb && comparable(ea->bsm.reach, eb->bsm.reach)) {
        rec.quiet_ticks += 1;
      }
      const bool quiet = rec.quiet_ticks >= cfg_.clear_ticks;
      if (quiet && rec.state != RecordState::Escalated) {
        set_state(rec, RecordState::Cleared, out);
        it = open_.erase(it);
      } else if (rec.state == RecordState::Escalated && quiet && now >= rec.advisories[0].expiry) {
        it = open_.erase(it);
      } else if (now >= rec.advisories[0].expiry && rec.state != RecordState::Escalated) {
        // Advice lapsed without the pair clearing; a fresh detection opens a new record.
        set_state(rec, RecordState::Cleared, out);
        it = open_.erase(it);
      } else {
        ++it;
      }
    }

    if (cfg_.advisories) {
      for (const auto & c : out.conflicts) {
        const auto key = std::make_pair(c.agent_a, c.agent_b);
        if (open_.count(key)) {
          continue;
        }
        ConflictRecord rec;
        rec.conflict_id = conflict_id_for(c.agent_a, c.agent_b, now);
        rec.conflict = c;
        Resolution res;
        try {
          res = resolve(c, registry_, now, rec.conflict_id, cfg_, overrides_);
        } catch (const StaleConflict &) {
          continue;
        }
        rec.advisories = res.advisories;
        rec.baselines = {registry_.find(c.agent_a)->bsm, registry_.find(c.agent_b)->bsm};
        rec.grace_deadline = now + to_millis(cfg_.t_grace);
        rec.lateral = res.lateral;
        rec.state = res.escalated ? RecordState::Escalated : RecordState::Active;
        rec.advisory_pairs = 1;
        open_[key] = rec.conflict_id;
        out.new_records.push_back(rec.conflict_id);
        out.advisories.insert(out.advisories.end(), res.advisories.begin(), res.advisories.end());
        rec.last_sent = now;
        records_.emplace(rec.conflict_id, rec);
        order_.push_back(rec.conflict_id);
      }
      monitor(now, out);
      escalate_unresolved(now, out);
      resend(now, out);
    }
    return out;
  }

  const Registry & registry() const { return registry_; }
  const std::unordered_map<std::uint64_t, ConflictRecord> & records() const { return records_; }
  const std::vector<std::uint64_t> & record_order() const { return order_; }
  const CoordinatorConfig & config() const { return cfg_; }

  nlohmann::json dump(SimMillis now) const
  {
    nlohmann::json j;
    j["t_ms"] = now;
    auto & reg = j["registry"] = nlohmann::json::array();
    for (const auto & [id, e] : registry_.entries()) {
      reg.push_back({
        {"agent", id.value}, {"seq", e.bsm.seq}, {"timestamp_ms", e.bsm.timestamp_ms},
        {"arrival_ms", e.arrival}, {"fresh", registry_.is_fresh(e, now)},
        {"x", e.bsm.state.position.x}, {"y", e.bsm.state.position.y},
        {"speed", e.bsm.state.speed}});
    }
    auto & recs = j["records"] = nlohmann::json::array();
    for (auto id : order_) {
      const auto & r = records_.at(id);
      recs.push_back({
        {"conflict_id", r.conflict_id}, {"agent_a", r.conflict.agent_a.value},
        {"agent_b", r.conflict.agent_b.value}, {"state", to_string(r.state)},
        {"reversals", r.reversals}, {"quiet_ticks", r.quiet_ticks}});
    }
    return j;
  }

private:
  void set_state(ConflictRecord & rec, RecordState to, TickOutput & out)
  {
    if (!transition_allowed(rec.state, to)) {
      throw std::logic_error("illegal conflict record transition");
    }
    out.transitions.push_back({rec.conflict_id, rec.state, to});
    rec.state = to;
  }

  std::optional<Bsm> latest(AgentId id) const
  {
    if (const auto * e = registry_.find(id)) {
      return e->bsm;
    }
    return std::nullopt;
  }

  Compliance status_of(const ConflictRecord & rec, std::size_t i) const
  {
    const auto & b = rec.baselines[i];
    return monitor_compliance(
      rec.advisories[i], b, latest(rec.advisories[i].target), limits_for(b, overrides_), cfg_.t_grace);
  }

  void escalate(ConflictRecord & rec, SimMillis now, TickOutput & out)
  {
    set_state(rec, RecordState::Escalated, out);
    for (auto & adv : rec.advisories) {
      adv.action = Maneuver::Brake;
      adv.alarm = true;
      adv.informational = false;
      adv.issued_at = now;
      adv.expiry = now + to_millis(cfg_.reach.horizon);
      out.advisories.push_back(adv);
    }
    // An alarm is an escalation notice, not a resolution pair; advisory_pairs
    // stays bounded by the original plus one reversal.
    rec.monitoring_done = true;
  }

  /// Advice already given that has not removed the conflict by the time it
  /// becomes imminent is escalated, mirroring a failed verification.
  void escalate_unresolved(SimMillis now, TickOutput & out)
  {
    for (const auto & c : out.conflicts) {
      auto it = open_.find({c.agent_a, c.agent_b});
      if (it == open_.end()) continue;
      auto & rec = records_.at(it->second);
      if (rec.state != RecordState::Active && rec.state != RecordState::Reversed) continue;
      if (now < rec.grace_deadline || rec.last_sent == now) continue;
      if (c.t_first - to_seconds(now) <= cfg_.tau_imminent) {
        escalate(rec, now, out);
        rec.last_sent = now;
      }
    }
  }

  void resend(SimMillis now, TickOutput & out)
  {
    const SimMillis period = to_millis(cfg_.resend_period);
    if (period <= 0) return;
    for (const auto & [key, id] : open_) {
      auto & rec = records_.at(id);
      if (now - rec.last_sent < period || now >= rec.advisories[0].expiry) continue;
      out.resends.insert(out.resends.end(), rec.advisories.begin(), rec.advisories.end());
      rec.last_sent = now;
    }
  }

  void monitor(SimMillis now, TickOutput & out)
  {
    for (const auto & [key, id] : open_) {
      auto & rec = records_.at(id);
      if (rec.monitoring_done || now < rec.grace_deadline) {
        continue;
      }
      if (rec.state != RecordState::Active && rec.state != RecordState::Reversed) {
        continue;
      }
      // Informational advice carries no expectation of a maneuver.
      std::array<bool, 2> expect{};
      for (std::size_t i = 0; i < 2; ++i) {
        expect[i] = !rec.advisories[i].informational &&
                    (rec.lateral || rec.advisories[i].action == Maneuver::Brake);
      }
      bool pending = false;
      bool violated = false;
      for (std::size_t i = 0; i < 2; ++i) {
        if (!expect[i]) continue;
        const auto s = status_of(rec, i);
        pending |= s == Compliance::Pending;
        violated |= s == Compliance::NonCompliant;
      }
      if (violated) {
        if (rec.state == RecordState::Active && !rec.lateral) {
          const auto adv = reverse(rec, registry_, now, cfg_);
          rec.last_sent = now;
          out.transitions.push_back({rec.conflict_id, RecordState::Active, RecordState::Reversed});
          out.advisories.insert(out.advisories.end(), adv.begin(), adv.end());
        } else {
          escalate(rec, now, out);
          rec.last_sent = now;
        }
      } else if (!pending) {
        rec.monitoring_done = true;
      }
    }
  }

  CoordinatorConfig cfg_;
  LimitsOverrides overrides_;
  Registry registry_;
  std::unordered_map<std::uint64_t, ConflictRecord> records_;
  std::vector<std::uint64_t> order_;
  std::map<std::pair<AgentId, AgentId>, std::uint64_t> open_;
};

}  // namespace wearsafe

#endif  // WEARSAFE__COORDINATOR_HPP_
