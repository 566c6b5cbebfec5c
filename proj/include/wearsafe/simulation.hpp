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

#ifndef WEARSAFE__SIMULATION_HPP_
#define WEARSAFE__SIMULATION_HPP_

#include <nlohmann/json.hpp>
#include <openssl/evp.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "wearsafe/coordinator.hpp"
#include "wearsafe/intent.hpp"
#include "wearsafe/metrics.hpp"
#include "wearsafe/netsim.hpp"
#include "wearsafe/reachset.hpp"
#include "wearsafe/rng.hpp"
#include "wearsafe/scenario.hpp"
#include "wearsafe/sensing.hpp"
#include "wearsafe/wire.hpp"
#include "wearsafe/world.hpp"

namespace wearsafe
{

inline constexpr SimMillis kImuPeriodMs = 100;
inline constexpr SimMillis kGpsPeriodMs = 1000;
inline constexpr SimMillis kReachPeriodMs = 500;
inline constexpr SimMillis kCoordinatorPeriodMs = 100;
inline constexpr SimMillis kHandlingLatencyMs = 5;

/// A run aborted by an internal fault (codec or range error).
class SimulationFault : public std::runtime_error
{
public:
  explicit SimulationFault(const std::string & what) : std::runtime_error(what) {}
};

inline std::string sha256_hex(const std::string & data)
{
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 failed");
  }
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 0xF];
  }
  return out;
}

/// JSON-lines trace held in memory; every record also feeds the metrics.
class Trace
{
public:
  void add(const nlohmann::json & record)
  {
    text_ += record.dump();
    text_ += '\n';
    ++lines_;
    metrics_.consume(record);
  }

  const std::string & text() const { return text_; }
  std::size_t lines() const { return lines_; }
  const MetricsAccumulator & metrics() const { return metrics_; }

private:
  std::string text_;
  std::size_t lines_{0};
  MetricsAccumulator metrics_;
};

struct RunOptions
{
  bool dump_coordinator{false};
  /// Also run the advisories-off counterfactual to score false positives and lead times.
  bool paired_baseline{true};
  /// Per-tick ground-truth and estimate records.
  bool agent_records{true};
};

struct RunResult
{
  std::string trace;
  std::string sha256;
  RunMetrics metrics;
  std::vector<PairOutcome> pairs;
  std::vector<AdvisoryIssue> issued;
};

inline CoordinatorConfig coordinator_config(const Scenario & s)
{
  CoordinatorConfig c;
  c.t_grace = s.thresholds.t_grace;
  c.tau_imminent = s.thresholds.tau_imminent;
  c.scan.p_min = s.thresholds.p_min;
  c.scan.d_safe = s.thresholds.d_safe;
  c.reach.horizon = s.thresholds.horizon;
  c.plausibility = s.toggles.plausibility;
  c.advisories = s.toggles.advisories;
  c.gaze_suppression = s.toggles.gaze_suppression;
  return c;
}

namespace detail
{

struct WorldTick
{
};

struct BsmDelivery
{
  std::size_t from{0};
  std::vector<std::uint8_t> bytes;
  ChannelKind channel{ChannelKind::Cellular};
  SimMillis sent{0};
  bool spoof{false};
};

struct AdvisoryDelivery
{
  std::size_t to{0};
  std::vector<std::uint8_t> bytes;
  ChannelKind channel{ChannelKind::Cellular};
  SimMillis sent{0};
};

struct ApplyAdvisory
{
  std::size_t agent{0};
  Advisory advisory;
};

using SimEvent = std::variant<WorldTick, BsmDelivery, AdvisoryDelivery, ApplyAdvisory>;

struct AgentRuntime
{
  AgentSpec spec;
  ModeLimits limits;
  KinematicState truth;
  Maneuver active{Maneuver::MaintainCourse};
  std::optional<FusedEstimate> est;
  CueWindow window;
  IntentDistribution intent{IntentDistribution::uniform()};
  RngStream gps;
  RngStream imu;
  RngStream cues;
  RngStream compliance;
  RngStream uplink;
  RngStream downlink;
  RngStream spoof;
  std::uint32_t seq{0};
  std::optional<Advisory> advised;
  std::optional<Advisory> latest_info;
  std::set<std::pair<std::uint64_t, SimMillis>> seen;
};

struct PairState
{
  double min_gap{std::numeric_limits<double>::infinity()};
  bool in_contact{false};
  std::int64_t contacts{0};
  std::optional<SimMillis> first_contact;
};

/// Minimum distance between two points moving linearly from (p0, q0) to (p1, q1).
inline double min_distance_over_step(Vec2 p0, Vec2 p1, Vec2 q0, Vec2 q1)
{
  const Vec2 r0 = p0 - q0;
  const Vec2 dr = (p1 - q1) - r0;
  const double dd = dr.dot(dr);
  double s = dd > 0.0 ? -r0.dot(dr) / dd : 0.0;
  s = std::clamp(s, 0.0, 1.0);
  return (r0 + dr * s).norm();
}

class Simulation
{
public:
  Simulation(const Scenario & s, const RunOptions & opts, std::optional<BaselineSummary> baseline)
  : scenario_(s), opts_(opts), baseline_(std::move(baseline)),
    profile_(*channel_profile(s.channel_profile)), coordinator_(coordinator_config(s), overrides(s))
  {
    profile_.select.tau_imminent = s.thresholds.tau_imminent;
    reach_.horizon = s.thresholds.horizon;
    tick_ms_ = to_millis(s.tick);
    duration_ms_ = to_millis(s.duration);
    for (const auto & spec : s.agents) {
      AgentRuntime a;
      a.spec = spec;
      a.limits = spec.effective_limits();
      a.truth = spec.initial;
      a.active = scripted(spec, 0);
      const auto id = spec.id.value;
      a.gps = RngStream(s.seed, id, "gps");
      a.imu = RngStream(s.seed, id, "imu");
      a.cues = RngStream(s.seed, id, "cues");
      a.compliance = RngStream(s.seed, id, "compliance");
      a.uplink = RngStream(s.seed, id, "uplink");
      a.downlink = RngStream(s.seed, id, "downlink");
      a.spoof = RngStream(s.seed, id, "spoof");
      index_[spec.id] = agents_.size();
      agents_.push_back(std::move(a));
    }
    pairs_.resize(agents_.size() * agents_.size());
  }

  RunResult run()
  {
    if (duration_ms_ > 0) {
      header();
      queue_.schedule(0, WorldTick{});
    }
    while (!queue_.empty()) {
      auto ev = queue_.pop();
      std::visit([&](auto & payload) { handle(ev.due, payload); }, ev.payload);
    }
    RunResult res;
    if (duration_ms_ > 0) {
      finish(res);
    }
    res.trace = trace_.text();
    res.sha256 = sha256_hex(res.trace);
    res.metrics = trace_.metrics().finish();
    res.issued = trace_.metrics().issued();
    return res;
  }

private:
  static LimitsOverrides overrides(const Scenario & s)
  {
    LimitsOverrides o;
    for (const auto & a : s.agents) {
      if (a.limits) o[a.id] = *a.limits;
    }
    return o;
  }

  static Maneuver scripted(const AgentSpec & spec, SimMillis now)
  {
    Maneuver m = Maneuver::MaintainCourse;
    for (const auto & e : spec.timeline) {
      if (to_millis(e.t) <= now) m = e.maneuver;
    }
    return m;
  }

  static Maneuver maneuver_at(const AgentRuntime & a, SimMillis now)
  {
    if (a.advised && now < a.advised->expiry) {
      return a.advised->action;
    }
    return scripted(a.spec, now);
  }

  /// The maneuver the body cues announce: the next scripted change within the
  /// cue lead, else the maneuver being executed.
  static std::pair<Maneuver, double> cue_target(const AgentRuntime & a, SimMillis now)
  {
    const CueProfile profile;
    if (!(a.advised && now < a.advised->expiry)) {
      for (const auto & e : a.spec.timeline) {
        const SimMillis t = to_millis(e.t);
        if (t > now && to_seconds(t - now) <= profile.cue_lead && e.maneuver != a.active) {
          return {e.maneuver, to_seconds(t - now)};
        }
      }
    }
    return {a.active, 0.0};
  }

  void header()
  {
    nlohmann::json agents = nlohmann::json::array();
    for (const auto & a : agents_) {
      agents.push_back({
        {"id", a.spec.id.value}, {"mode", std::string(to_string(a.spec.mode))},
        {"footprint", a.limits.footprint_radius}, {"spoof", a.spec.spoof.has_value()}});
    }
    trace_.add({
      {"type", "header"}, {"scenario", scenario_.name}, {"seed", scenario_.seed},
      {"duration_ms", duration_ms_}, {"tick_ms", tick_ms_},
      {"channel_profile", scenario_.channel_profile}, {"advisories", scenario_.toggles.advisories},
      {"plausibility", scenario_.toggles.plausibility}, {"agents", agents}});
    if (baseline_) {
      for (const auto & p : baseline_->pairs) {
        trace_.add({
          {"type", "baseline_pair"}, {"seed", baseline_->seed}, {"a", p.a}, {"b", p.b},
          {"min_gap", p.min_gap},
          {"contact_ms", p.first_contact_ms ? nlohmann::json(*p.first_contact_ms) : nlohmann::json(nullptr)}});
      }
    }
  }

  void handle(SimMillis now, WorldTick &)
  {
    const double dt = to_seconds(tick_ms_);
    std::vector<Vec2> before;
    before.reserve(agents_.size());
    for (auto & a : agents_) {
      before.push_back(a.truth.position);
      if (now > 0) {
        a.truth = step(a.truth, maneuver_to_control(a.active, a.truth, a.limits), a.limits, dt);
      }
      a.active = maneuver_at(a, now);
    }
    for (std::size_t i = 0; i < agents_.size(); ++i) {
      agent_tick(i, now);
    }
    check_contacts(now, before);
    if (now % kCoordinatorPeriodMs == 0) {
      coordinator_tick(now);
    }
    if (now + tick_ms_ < duration_ms_) {
      queue_.schedule(now + tick_ms_, WorldTick{});
    }
  }

  void agent_tick(std::size_t i, SimMillis now)
  {
    auto & a = agents_[i];
    const double t = to_seconds(now);
    if (now % kImuPeriodMs == 0) {
      const auto imu = sample_imu(t, a.truth.accel, a.truth.yaw_rate, a.spec.sensors.imu_bias, a.spec.sensors.imu_noise, a.imu);
      if (a.est && a.est->time < t - 1e-9) {
        a.est = fuse_predict(*a.est, imu, t - a.est->time, a.limits);
      }
    }
    if (now % kGpsPeriodMs == 0) {
      const auto fix = sample_gps(t, a.truth, a.spec.sensors.sigma_gps, a.gps);
      a.est = a.est ? fuse_update(*a.est, fix, a.spec.sensors.sigma_gps)
                    : initial_estimate(fix, a.truth, a.spec.sensors.sigma_gps);
    }
    if (now % kImuPeriodMs == 0) {
      const auto [m, lead] = cue_target(a, now);
      auto cue = sample_cues(t, m, lead, a.spec.sensors.cue_noise, a.cues);
      cue.gaze_covers_conflict = a.spec.gaze_covers_conflict;
      a.window.push(cue);
      a.intent = estimate_intent(a.window, *a.est);
    }
    if (opts_.agent_records) {
      trace_.add({
        {"type", "agent"}, {"t", now}, {"id", a.spec.id.value}, {"x", a.truth.position.x},
        {"y", a.truth.position.y}, {"heading", a.truth.heading}, {"speed", a.truth.speed},
        {"maneuver", std::string(to_string(a.active))}, {"est_x", a.est->mean.position.x},
        {"est_y", a.est->mean.position.y}, {"pos_std", a.est->pos_std},
        {"intent", a.intent.probs}});
    }
    if (now % kReachPeriodMs == 0) {
      send_bsm(i, now);
    }
    if (a.spec.spoof && now >= to_millis(a.spec.spoof->start) &&
        (now - to_millis(a.spec.spoof->start)) % std::max<SimMillis>(to_millis(a.spec.spoof->period), 1) == 0) {
      send_spoof(i, now);
    }
  }

  Bsm build_bsm(const AgentRuntime & a, SimMillis now, const FusedEstimate & est) const
  {
    Bsm b;
    b.sender = a.spec.id;
    b.seq = a.seq;
    b.timestamp_ms = now;
    b.state = est.mean;
    b.mode = a.spec.mode;
    b.gaze_covers_conflict = a.spec.gaze_covers_conflict;
    b.intent = a.intent;
    b.reach = compute_reachable_set(a.spec.id, est, a.intent, a.limits, reach_);
    return b;
  }

  ChannelKind uplink_kind(const AgentRuntime & a, SimMillis now) const
  {
    if (a.latest_info && now < a.latest_info->expiry) {
      const double t_conflict = std::max(0.0, to_seconds(a.latest_info->t_first_ms - now));
      return select_channel(t_conflict, a.latest_info->peer_distance, profile_.select);
    }
    return select_channel(std::nullopt, 0.0, profile_.select);
  }

  void send_bsm(std::size_t i, SimMillis now)
  {
    auto & a = agents_[i];
    a.seq += 1;
    auto est = *a.est;
    est.time = to_seconds(now);
    const Bsm b = build_bsm(a, now, est);
    transmit_bsm(i, now, encode(b), b.seq, uplink_kind(a, now), false, a.uplink);
  }

  void send_spoof(std::size_t i, SimMillis now)
  {
    auto & a = agents_[i];
    auto est = *a.est;
    est.time = to_seconds(now);
    const double angle = a.spoof.uniform(-std::numbers::pi, std::numbers::pi);
    est.mean.position += unit_heading(angle) * a.spec.spoof->offset;
    Bsm b = build_bsm(a, now, est);
    b.seq = a.seq + 1;
    transmit_bsm(i, now, encode(b), b.seq, ChannelKind::Cellular, true, a.spoof);
  }

  template <typename Msg>
  static std::vector<std::uint8_t> encode(const Msg & m)
  {
    try {
      if constexpr (std::is_same_v<Msg, Bsm>) {
        return encode_bsm(m);
      } else {
        return encode_advisory(m);
      }
    } catch (const WireException & e) {
      throw SimulationFault(std::string("encode failed: ") + e.what());
    }
  }

  void transmit_bsm(
    std::size_t i, SimMillis now, std::vector<std::uint8_t> bytes, std::uint32_t seq, ChannelKind kind,
    bool spoof, RngStream & rng)
  {
    const auto size = static_cast<std::int64_t>(bytes.size());
    const auto out = transmit(profile_.channel(kind), now, rng, queue_, [&](const TransmitOutcome &) {
      return SimEvent{BsmDelivery{i, std::move(bytes), kind, now, spoof}};
    });
    trace_.add({
      {"type", "bsm_tx"}, {"t", now}, {"from", agents_[i].spec.id.value}, {"seq", seq},
      {"bytes", size}, {"channel", std::string(to_string(kind))}, {"dropped", out.dropped},
      {"due", out.due}, {"spoof", spoof}});
  }

  void handle(SimMillis now, BsmDelivery & d)
  {
    Bsm b;
    try {
      b = decode_bsm(d.bytes);
    } catch (const WireException & e) {
      throw SimulationFault(std::string("decode failed: ") + e.what());
    }
    const auto res = coordinator_.ingest(b, now);
    trace_.add({
      {"type", "bsm_rx"}, {"t", now}, {"from", b.sender.value}, {"seq", b.seq},
      {"channel", std::string(to_string(d.channel))}, {"latency", now - d.sent},
      {"accepted", res.accepted}, {"reason", std::string(to_string(res.reason))}, {"spoof", d.spoof}});
  }

  void coordinator_tick(SimMillis now)
  {
    const auto out = coordinator_.tick(now);
    for (auto id : out.new_records) {
      const auto & rec = coordinator_.records().at(id);
      trace_.add({
        {"type", "record"}, {"t", now}, {"conflict_id", id}, {"a", rec.conflict.agent_a.value},
        {"b", rec.conflict.agent_b.value}, {"t_first", rec.conflict.t_first},
        {"prob", rec.conflict.prob}, {"lateral", rec.lateral}, {"state", std::string(to_string(rec.state))}});
    }
    for (const auto & tr : out.transitions) {
      trace_.add({
        {"type", "transition"}, {"t", now}, {"conflict_id", tr.conflict_id},
        {"from", std::string(to_string(tr.from))}, {"to", std::string(to_string(tr.to))}});
    }
    for (const auto & adv : out.advisories) {
      send_advisory(now, adv, false);
    }
    for (const auto & adv : out.resends) {
      send_advisory(now, adv, true);
    }
    if (opts_.dump_coordinator) {
      auto dump = coordinator_.dump(now);
      dump["type"] = "coordinator";
      trace_.add(dump);
    }
  }

  void send_advisory(SimMillis now, const Advisory & adv, bool resend)
  {
    const auto it = index_.find(adv.target);
    if (it == index_.end()) {
      throw SimulationFault("advisory for unknown agent " + std::to_string(adv.target.value));
    }
    const std::size_t to = it->second;
    const auto & rec = coordinator_.records().at(adv.conflict_id);
    const double t_conflict = std::max(0.0, to_seconds(adv.t_first_ms - now));
    const auto kind = select_channel(t_conflict, adv.peer_distance, profile_.select);
    auto bytes = encode(adv);
    const auto size = static_cast<std::int64_t>(bytes.size());
    const SimMillis sent = now + kHandlingLatencyMs;
    const auto out = transmit(profile_.channel(kind), sent, agents_[to].downlink, queue_, [&](const TransmitOutcome &) {
      return SimEvent{AdvisoryDelivery{to, std::move(bytes), kind, sent}};
    });
    trace_.add({
      {"type", "adv_tx"}, {"t", now}, {"conflict_id", adv.conflict_id},
      {"a", rec.conflict.agent_a.value}, {"b", rec.conflict.agent_b.value}, {"target", adv.target.value},
      {"action", std::string(to_string(adv.action))}, {"reversal", adv.is_reversal},
      {"informational", adv.informational}, {"alarm", adv.alarm}, {"resend", resend}, {"bytes", size},
      {"channel", std::string(to_string(kind))}, {"dropped", out.dropped}, {"due", out.due}});
  }

  void handle(SimMillis now, AdvisoryDelivery & d)
  {
    Advisory adv;
    try {
      adv = decode_advisory(d.bytes);
    } catch (const WireException & e) {
      throw SimulationFault(std::string("decode failed: ") + e.what());
    }
    auto & a = agents_[d.to];
    a.latest_info = adv;
    bool comply = false;
    // Repeated copies of one advisory are shown once; the first copy decides.
    const bool duplicate = !a.seen.insert({adv.conflict_id, adv.issued_at}).second;
    if (!adv.informational && !duplicate) {
      comply = a.compliance.bernoulli(a.spec.compliance_prob);
      if (comply) {
        queue_.schedule(now + to_millis(a.spec.reaction_delay), SimEvent{ApplyAdvisory{d.to, adv}});
      }
    }
    trace_.add({
      {"type", "adv_rx"}, {"t", now}, {"target", adv.target.value}, {"conflict_id", adv.conflict_id},
      {"channel", std::string(to_string(d.channel))}, {"latency", now - d.sent}, {"duplicate", duplicate}, {"comply", comply}});
  }

  void handle(SimMillis now, ApplyAdvisory & e)
  {
    auto & a = agents_[e.agent];
    if (now >= e.advisory.expiry || (a.advised && e.advisory.issued_at < a.advised->issued_at)) {
      return;
    }
    a.advised = e.advisory;
    trace_.add({
      {"type", "adv_apply"}, {"t", now}, {"agent", a.spec.id.value},
      {"action", std::string(to_string(e.advisory.action))}, {"until", e.advisory.expiry}});
  }

  PairState & pair(std::size_t i, std::size_t j) { return pairs_[i * agents_.size() + j]; }

  void check_contacts(SimMillis now, const std::vector<Vec2> & before)
  {
    for (std::size_t i = 0; i < agents_.size(); ++i) {
      for (std::size_t j = i + 1; j < agents_.size(); ++j) {
        const auto & a = agents_[i];
        const auto & b = agents_[j];
        const double d = now > 0 ? min_distance_over_step(before[i], a.truth.position, before[j], b.truth.position)
                                 : distance(a.truth.position, b.truth.position);
        const double gap = d - a.limits.footprint_radius - b.limits.footprint_radius;
        auto & p = pair(i, j);
        p.min_gap = std::min(p.min_gap, gap);
        const bool touching = gap < 0.0;
        if (touching && !p.in_contact) {
          ++p.contacts;
          if (!p.first_contact) p.first_contact = now;
          const auto [lo, hi] = std::minmax(a.spec.id.value, b.spec.id.value);
          trace_.add({{"type", "contact"}, {"t", now}, {"a", lo}, {"b", hi}});
        }
        p.in_contact = touching;
      }
    }
  }

  void finish(RunResult & res)
  {
    std::vector<std::pair<std::size_t, std::size_t>> order;
    for (std::size_t i = 0; i < agents_.size(); ++i) {
      for (std::size_t j = i + 1; j < agents_.size(); ++j) order.emplace_back(i, j);
    }
    std::vector<PairOutcome> outcomes;
    for (const auto & [i, j] : order) {
      const auto & p = pair(i, j);
      PairOutcome o;
      o.a = std::min(agents_[i].spec.id.value, agents_[j].spec.id.value);
      o.b = std::max(agents_[i].spec.id.value, agents_[j].spec.id.value);
      o.min_gap = p.min_gap;
      o.contacts = p.contacts;
      if (p.first_contact) o.first_contact_ms = *p.first_contact;
      outcomes.push_back(o);
    }
    std::sort(outcomes.begin(), outcomes.end(), [](const auto & x, const auto & y) {
      return std::pair(x.a, x.b) < std::pair(y.a, y.b);
    });
    for (const auto & o : outcomes) {
      trace_.add({
        {"type", "pair"}, {"a", o.a}, {"b", o.b}, {"min_gap", o.min_gap}, {"contacts", o.contacts},
        {"first_contact_ms", o.first_contact_ms ? nlohmann::json(*o.first_contact_ms) : nlohmann::json(nullptr)}});
    }
    trace_.add({{"type", "end"}, {"t", duration_ms_}});
    res.pairs = std::move(outcomes);
  }

  Scenario scenario_;
  RunOptions opts_;
  std::optional<BaselineSummary> baseline_;
  ChannelProfile profile_;
  Coordinator coordinator_;
  ReachParams reach_{};
  SimMillis tick_ms_{100};
  SimMillis duration_ms_{0};
  std::vector<AgentRuntime> agents_;
  std::map<AgentId, std::size_t> index_;
  std::vector<PairState> pairs_;
  EventQueue<SimEvent> queue_;
  Trace trace_;
};

}  // namespace detail

/// Ground-truth pair outcomes of the scenario with advisories switched off.
inline BaselineSummary run_baseline(const Scenario & scenario)
{
  Scenario off = scenario;
  off.toggles.advisories = false;
  RunOptions opts;
  opts.paired_baseline = false;
  opts.agent_records = false;
  auto res = detail::Simulation(off, opts, std::nullopt).run();
  return {scenario.seed, std::move(res.pairs)};
}

/// Runs a validated scenario. With advisories enabled and `paired_baseline`
/// set, the counterfactual run is executed first and embedded in the trace.
inline RunResult run_scenario(const Scenario & scenario, const RunOptions & opts = {})
{
  std::optional<BaselineSummary> baseline;
  if (scenario.toggles.advisories && opts.paired_baseline && scenario.duration > 0.0) {
    baseline = run_baseline(scenario);
  }
  try {
    return detail::Simulation(scenario, opts, std::move(baseline)).run();
  } catch (const std::invalid_argument & e) {
    throw SimulationFault(e.what());
  }
}

/// Writes trace.jsonl, summary.csv, summary.json and the canonical scenario.
inline void write_run_outputs(
  const std::filesystem::path & dir, const Scenario & scenario, const RunResult & res)
{
  std::filesystem::create_directories(dir);
  {
    std::ofstream out(dir / "trace.jsonl", std::ios::binary);
    out << res.trace;
  }
  {
    std::ofstream out(dir / "summary.csv", std::ios::binary);
    out << summary_csv_header() << '\n' << summary_csv_row(scenario.name, res.metrics) << '\n';
  }
  {
    nlohmann::json j;
    j["scenario"] = scenario.name;
    j["seed"] = scenario.seed;
    j["trace_sha256"] = res.sha256;
    for (const auto & [name, value] : metric_fields(res.metrics)) {
      j["metrics"][name] = value;
    }
    std::ofstream out(dir / "summary.json", std::ios::binary);
    out << j.dump(2) << '\n';
  }
  {
    std::ofstream out(dir / "scenario.json", std::ios::binary);
    out << to_json(scenario).dump(2) << '\n';
  }
}

}  // namespace wearsafe

#endif  // WEARSAFE__SIMULATION_HPP_
