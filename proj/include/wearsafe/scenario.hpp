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

#ifndef WEARSAFE__SCENARIO_HPP_
#define WEARSAFE__SCENARIO_HPP_

#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdint>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "wearsafe/geometry.hpp"
#include "wearsafe/netsim.hpp"
#include "wearsafe/sensing.hpp"
#include "wearsafe/world.hpp"

namespace wearsafe
{

inline constexpr int kScenarioSchemaVersion = 1;

/// Invalid scenario input. `where` is "line:col" for syntax errors and a JSON
/// pointer (e.g. /agents/1/mode) for schema errors.
class ScenarioError : public std::runtime_error
{
public:
  ScenarioError(std::string source, std::string where, const std::string & what)
  : std::runtime_error(source + ":" + where + ": " + what), source_(std::move(source)),
    where_(std::move(where))
  {
  }

  const std::string & source() const { return source_; }
  const std::string & where() const { return where_; }

private:
  std::string source_;
  std::string where_;
};

struct TimelineEntry
{
  double t{0.0};
  Maneuver maneuver{Maneuver::MaintainCourse};

  bool operator==(const TimelineEntry &) const = default;
};

struct SensorSpec
{
  double sigma_gps{kDefaultSigmaGps};
  ImuNoise imu_noise{};
  ImuBias imu_bias{};
  CueNoise cue_noise{};
};

/// Adversarial sender: between genuine BSMs it emits frames whose position is
/// displaced by `offset` meters in a random direction.
struct SpoofSpec
{
  double start{5.0};
  double period{0.5};
  double offset{200.0};
};

struct AgentSpec
{
  AgentId id{};
  TransportMode mode{TransportMode::Pedestrian};
  KinematicState initial{};
  std::vector<TimelineEntry> timeline{};
  double compliance_prob{1.0};
  double reaction_delay{0.5};
  SensorSpec sensors{};
  std::optional<SpoofSpec> spoof{};
  bool gaze_covers_conflict{false};
  std::optional<ModeLimits> limits{};

  ModeLimits effective_limits() const { return limits.value_or(default_limits(mode)); }
};

struct Thresholds
{
  double tau_imminent{3.0};
  double p_min{0.05};
  double d_safe{0.5};
  double t_grace{1.0};
  double horizon{6.0};
};

struct Toggles
{
  bool advisories{true};
  bool plausibility{true};
  bool gaze_suppression{true};
};

struct Scenario
{
  std::string name{"scenario"};
  std::uint64_t seed{0};
  double duration{0.0};
  double tick{0.1};
  std::string channel_profile{"default"};
  Thresholds thresholds{};
  Toggles toggles{};
  std::vector<AgentSpec> agents{};
};

namespace detail
{

/// Strict object reader: every key must be consumed, and types are checked.
class ObjectReader
{
public:
  ObjectReader(const nlohmann::json & j, std::string path, const std::string & source)
  : j_(j), path_(std::move(path)), source_(source)
  {
    if (!j_.is_object()) {
      fail(path_, "expected an object");
    }
  }

  [[noreturn]] void fail(const std::string & where, const std::string & what) const
  {
    throw ScenarioError(source_, where.empty() ? "/" : where, what);
  }

  std::string at(const std::string & key) const { return path_ + "/" + key; }

  bool has(const std::string & key) const { return j_.contains(key); }

  const nlohmann::json & raw(const std::string & key)
  {
    seen_.insert(key);
    return j_.at(key);
  }

  double number(const std::string & key, std::optional<double> fallback = std::nullopt)
  {
    if (!has(key)) {
      if (!fallback) fail(at(key), "missing required number");
      return *fallback;
    }
    const auto & v = raw(key);
    if (!v.is_number()) fail(at(key), "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) fail(at(key), "expected a finite number");
    return d;
  }

  std::uint64_t unsigned_int(const std::string & key, std::optional<std::uint64_t> fallback = std::nullopt)
  {
    if (!has(key)) {
      if (!fallback) fail(at(key), "missing required integer");
      return *fallback;
    }
    const auto & v = raw(key);
    if (!v.is_number_unsigned()) fail(at(key), "expected a non-negative integer");
    return v.get<std::uint64_t>();
  }

  bool boolean(const std::string & key, bool fallback)
  {
    if (!has(key)) return fallback;
    const auto & v = raw(key);
    if (!v.is_boolean()) fail(at(key), "expected true or false");
    return v.get<bool>();
  }

  std::string string(const std::string & key, std::optional<std::string> fallback = std::nullopt)
  {
    if (!has(key)) {
      if (!fallback) fail(at(key), "missing required string");
      return *fallback;
    }
    const auto & v = raw(key);
    if (!v.is_string()) fail(at(key), "expected a string");
    return v.get<std::string>();
  }

  void finish() const
  {
    for (const auto & [key, value] : j_.items()) {
      if (!seen_.count(key)) fail(at(key), "unknown field");
    }
  }

private:
  const nlohmann::json & j_;
  std::string path_;
  const std::string & source_;
  std::set<std::string> seen_;
};

inline std::string line_col(const std::string & text, std::size_t byte)
{
  std::size_t line = 1;
  std::size_t col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return std::to_string(line) + ":" + std::to_string(col);
}

inline ModeLimits read_limits(ObjectReader & r)
{
  ModeLimits l;
  l.v_max = r.number("v_max");
  l.a_max = r.number("a_max");
  l.a_min = r.number("a_min");
  l.yaw_rate_max = r.number("yaw_rate_max");
  l.footprint_radius = r.number("footprint_radius");
  r.finish();
  return l;
}

inline AgentSpec read_agent(const nlohmann::json & j, const std::string & path, const std::string & src)
{
  ObjectReader r(j, path, src);
  AgentSpec a;
  const auto id = r.unsigned_int("id");
  if (id > UINT32_MAX) r.fail(r.at("id"), "agent id exceeds 32 bits");
  a.id = AgentId{static_cast<std::uint32_t>(id)};
  const auto mode = parse_mode(r.string("mode"));
  if (!mode) r.fail(r.at("mode"), "unknown transport mode");
  a.mode = *mode;

  {
    ObjectReader s(r.raw("initial"), r.at("initial"), src);
    a.initial.position = {s.number("x"), s.number("y")};
    a.initial.heading = normalize_angle(s.number("heading", 0.0));
    a.initial.speed = s.number("speed", 0.0);
    if (a.initial.speed < 0.0) s.fail(s.at("speed"), "speed must be >= 0");
    s.finish();
  }

  if (r.has("timeline")) {
    const auto & tl = r.raw("timeline");
    if (!tl.is_array()) r.fail(r.at("timeline"), "expected an array");
    for (std::size_t i = 0; i < tl.size(); ++i) {
      const std::string p = r.at("timeline") + "/" + std::to_string(i);
      ObjectReader e(tl[i], p, src);
      TimelineEntry entry;
      entry.t = e.number("t");
      const auto m = parse_maneuver(e.string("maneuver"));
      if (!m) e.fail(e.at("maneuver"), "unknown maneuver");
      entry.maneuver = *m;
      e.finish();
      if (entry.t < 0.0) e.fail(e.at("t"), "time must be >= 0");
      if (!a.timeline.empty() && !(entry.t > a.timeline.back().t)) {
        e.fail(e.at("t"), "timeline times must be strictly increasing");
      }
      a.timeline.push_back(entry);
    }
  }

  a.compliance_prob = r.number("compliance_prob", 1.0);
  if (!(a.compliance_prob >= 0.0 && a.compliance_prob <= 1.0)) {
    r.fail(r.at("compliance_prob"), "must be in [0, 1]");
  }
  a.reaction_delay = r.number("reaction_delay", 0.5);
  if (a.reaction_delay < 0.0) r.fail(r.at("reaction_delay"), "must be >= 0");

  if (r.has("sensors")) {
    ObjectReader s(r.raw("sensors"), r.at("sensors"), src);
    a.sensors.sigma_gps = s.number("sigma_gps", kDefaultSigmaGps);
    a.sensors.imu_noise.accel_std = s.number("imu_accel_std", ImuNoise{}.accel_std);
    a.sensors.imu_noise.yaw_rate_std = s.number("imu_yaw_rate_std", ImuNoise{}.yaw_rate_std);
    a.sensors.imu_bias.accel = s.number("imu_accel_bias", 0.0);
    a.sensors.imu_bias.yaw_rate = s.number("imu_yaw_rate_bias", 0.0);
    a.sensors.cue_noise.head_yaw_std = s.number("cue_head_yaw_std", CueNoise{}.head_yaw_std);
    a.sensors.cue_noise.wrist_std = s.number("cue_wrist_std", CueNoise{}.wrist_std);
    for (const char * k : {"sigma_gps", "imu_accel_std", "imu_yaw_rate_std", "cue_head_yaw_std", "cue_wrist_std"}) {
      if (s.has(k) && s.number(k) < 0.0) s.fail(s.at(k), "noise must be >= 0");
    }
    if (!(a.sensors.sigma_gps > 0.0)) s.fail(s.at("sigma_gps"), "must be > 0");
    s.finish();
  }

  if (r.has("spoof")) {
    ObjectReader s(r.raw("spoof"), r.at("spoof"), src);
    SpoofSpec sp;
    sp.start = s.number("start", sp.start);
    sp.period = s.number("period", sp.period);
    sp.offset = s.number("offset", sp.offset);
    if (sp.start < 0.0) s.fail(s.at("start"), "must be >= 0");
    if (!(sp.period > 0.0)) s.fail(s.at("period"), "must be > 0");
    if (!(sp.offset > 0.0)) s.fail(s.at("offset"), "must be > 0");
    s.finish();
    a.spoof = sp;
  }

  a.gaze_covers_conflict = r.boolean("gaze_covers_conflict", false);

  if (r.has("limits")) {
    ObjectReader s(r.raw("limits"), r.at("limits"), src);
    a.limits = read_limits(s);
    if (!a.limits->valid()) r.fail(r.at("limits"), "invalid mode limits");
  }
  if (a.initial.speed > a.effective_limits().v_max) {
    r.fail(r.at("initial") + "/speed", "initial speed exceeds the mode's v_max");
  }
  r.finish();
  return a;
}

/// True when `period` is an integer multiple of `tick` (millisecond grid).
inline bool divides(double tick, double period)
{
  const auto t = to_millis(tick);
  const auto p = to_millis(period);
  return t > 0 && p % t == 0;
}

}  // namespace detail

/// Parses and validates a scenario document; throws ScenarioError on the first
/// problem found.
inline Scenario parse_scenario(const std::string & text, const std::string & source = "<scenario>")
{
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error & e) {
    throw ScenarioError(source, detail::line_col(text, e.byte > 0 ? e.byte - 1 : 0), "malformed JSON");
  }
  detail::ObjectReader r(j, "", source);
  const auto version = r.unsigned_int("schema_version");
  if (version != static_cast<std::uint64_t>(kScenarioSchemaVersion)) {
    r.fail("/schema_version", "unsupported schema version " + std::to_string(version));
  }
  Scenario s;
  s.name = r.string("name", s.name);
  s.seed = r.unsigned_int("seed", 0);
  s.duration = r.number("duration");
  if (s.duration < 0.0) r.fail("/duration", "must be >= 0");
  s.tick = r.number("tick", 0.1);
  if (!(s.tick > 0.0)) r.fail("/tick", "must be > 0");
  // The tick must divide the 0.1 s IMU/cue period, the 1 s GPS period and the reach period.
  if (std::abs(to_seconds(to_millis(s.tick)) - s.tick) > 1e-9 || !detail::divides(s.tick, 0.1)) {
    r.fail("/tick", "tick must be a whole number of milliseconds dividing 0.1 s");
  }
  if (std::abs(to_seconds(to_millis(s.duration)) - s.duration) > 1e-9) {
    r.fail("/duration", "duration must be a whole number of milliseconds");
  }
  s.channel_profile = r.string("channel_profile", "default");
  if (!channel_profile(s.channel_profile)) r.fail("/channel_profile", "unknown channel profile");

  if (r.has("thresholds")) {
    detail::ObjectReader t(r.raw("thresholds"), "/thresholds", source);
    s.thresholds.tau_imminent = t.number("tau_imminent", 3.0);
    s.thresholds.p_min = t.number("p_min", 0.05);
    s.thresholds.d_safe = t.number("d_safe", 0.5);
    s.thresholds.t_grace = t.number("t_grace", 1.0);
    s.thresholds.horizon = t.number("horizon", 6.0);
    if (!(s.thresholds.tau_imminent >= 0.0)) t.fail("/thresholds/tau_imminent", "must be >= 0");
    if (!(s.thresholds.p_min > 0.0 && s.thresholds.p_min <= 1.0)) t.fail("/thresholds/p_min", "must be in (0, 1]");
    if (!(s.thresholds.d_safe >= 0.0)) t.fail("/thresholds/d_safe", "must be >= 0");
    if (!(s.thresholds.t_grace > 0.0)) t.fail("/thresholds/t_grace", "must be > 0");
    if (!(s.thresholds.horizon > 0.0) || !detail::divides(0.2, s.thresholds.horizon)) {
      t.fail("/thresholds/horizon", "must be a positive multiple of 0.2 s");
    }
    t.finish();
  }
  if (r.has("toggles")) {
    detail::ObjectReader t(r.raw("toggles"), "/toggles", source);
    s.toggles.advisories = t.boolean("advisories", true);
    s.toggles.plausibility = t.boolean("plausibility", true);
    s.toggles.gaze_suppression = t.boolean("gaze_suppression", true);
    t.finish();
  }

  const auto & agents = r.raw("agents");
  if (!agents.is_array()) r.fail("/agents", "expected an array");
  if (agents.empty()) r.fail("/agents", "at least one agent is required");
  std::set<AgentId> ids;
  for (std::size_t i = 0; i < agents.size(); ++i) {
    const std::string p = "/agents/" + std::to_string(i);
    auto a = detail::read_agent(agents[i], p, source);
    if (!ids.insert(a.id).second) {
      throw ScenarioError(source, p + "/id", "duplicate agent id");
    }
    s.agents.push_back(std::move(a));
  }
  r.finish();
  return s;
}

inline Scenario load_scenario(const std::string & path)
{
  std::ifstream in(path);
  if (!in) {
    throw ScenarioError(path, "0:0", "cannot open file");
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str(), path);
}

/// Canonical JSON form; parse_scenario(to_json(s).dump()) reproduces `s`.
inline nlohmann::json to_json(const Scenario & s)
{
  nlohmann::json j;
  j["schema_version"] = kScenarioSchemaVersion;
  j["name"] = s.name;
  j["seed"] = s.seed;
  j["duration"] = s.duration;
  j["tick"] = s.tick;
  j["channel_profile"] = s.channel_profile;
  j["thresholds"] = {
    {"tau_imminent", s.thresholds.tau_imminent}, {"p_min", s.thresholds.p_min},
    {"d_safe", s.thresholds.d_safe}, {"t_grace", s.thresholds.t_grace},
    {"horizon", s.thresholds.horizon}};
  j["toggles"] = {
    {"advisories", s.toggles.advisories}, {"plausibility", s.toggles.plausibility},
    {"gaze_suppression", s.toggles.gaze_suppression}};
  auto & agents = j["agents"] = nlohmann::json::array();
  for (const auto & a : s.agents) {
    nlohmann::json ja;
    ja["id"] = a.id.value;
    ja["mode"] = std::string(to_string(a.mode));
    ja["initial"] = {
      {"x", a.initial.position.x}, {"y", a.initial.position.y}, {"heading", a.initial.heading},
      {"speed", a.initial.speed}};
    auto & tl = ja["timeline"] = nlohmann::json::array();
    for (const auto & e : a.timeline) {
      tl.push_back({{"t", e.t}, {"maneuver", std::string(to_string(e.maneuver))}});
    }
    ja["compliance_prob"] = a.compliance_prob;
    ja["reaction_delay"] = a.reaction_delay;
    ja["sensors"] = {
      {"sigma_gps", a.sensors.sigma_gps}, {"imu_accel_std", a.sensors.imu_noise.accel_std},
      {"imu_yaw_rate_std", a.sensors.imu_noise.yaw_rate_std},
      {"imu_accel_bias", a.sensors.imu_bias.accel}, {"imu_yaw_rate_bias", a.sensors.imu_bias.yaw_rate},
      {"cue_head_yaw_std", a.sensors.cue_noise.head_yaw_std},
      {"cue_wrist_std", a.sensors.cue_noise.wrist_std}};
    if (a.spoof) {
      ja["spoof"] = {{"start", a.spoof->start}, {"period", a.spoof->period}, {"offset", a.spoof->offset}};
    }
    ja["gaze_covers_conflict"] = a.gaze_covers_conflict;
    if (a.limits) {
      ja["limits"] = {
        {"v_max", a.limits->v_max}, {"a_max", a.limits->a_max}, {"a_min", a.limits->a_min},
        {"yaw_rate_max", a.limits->yaw_rate_max}, {"footprint_radius", a.limits->footprint_radius}};
    }
    agents.push_back(std::move(ja));
  }
  return j;
}

}  // namespace wearsafe

#endif  // WEARSAFE__SCENARIO_HPP_
