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

#ifndef WEARSAFE__WIRE_HPP_
#define WEARSAFE__WIRE_HPP_

#include "wearsafe/intent.hpp"
#include "wearsafe/reachset.hpp"
#include "wearsafe/world.hpp"

#include <zlib.h>

#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace wearsafe
{

// Frame layout (all little-endian):
//   magic 0xB5 0x53 | version u8 | msg_type u8 | body | crc32 u32
// BSM body (msg_type 0):
//   sender u32, seq u32, timestamp_ms u64, pos_x i32 cm, pos_y i32 cm,
//   heading u16 (2pi/65536 rad), speed u16 cm/s, accel i16 cm/s^2,
//   yaw_rate i16 mrad/s, mode u8 (bit 7 = gaze covers conflict),
//   intent 5 x u16 (p * 65535), reach t0_ms u64, dt_reach_ms u16, n_steps u8,
//   per step: n_discs u8, per disc: cx i32 cm, cy i32 cm, r u16 cm, p u16
// Advisory body (msg_type 1):
//   conflict_id u64, target u32, action u8, issued_at_ms u64,
//   flags u8 (bit0 reversal, bit1 informational, bit2 alarm), expiry_ms u64,
//   t_first_ms u64, peer_distance u32 cm

inline constexpr std::uint8_t kMagic0 = 0xB5;
inline constexpr std::uint8_t kMagic1 = 0x53;
inline constexpr std::uint8_t kWireVersion = 1;
inline constexpr std::uint8_t kMsgBsm = 0;
inline constexpr std::uint8_t kMsgAdvisory = 1;
inline constexpr double kMaxAbsPosition = 20000.0;  // meters
inline constexpr std::size_t kBsmFixedSize = 58;      // through n_steps
inline constexpr std::size_t kAdvisoryFrameSize = 50;
inline constexpr std::size_t kCrcSize = 4;

enum class WireError { TruncatedFrame, BadMagic, BadVersion, BadCrc, RangeViolation };

inline const char * to_string(WireError e)
{
  switch (e) {
    case WireError::TruncatedFrame: return "TruncatedFrame";
    case WireError::BadMagic: return "BadMagic";
    case WireError::BadVersion: return "BadVersion";
    case WireError::BadCrc: return "BadCrc";
    case WireError::RangeViolation: return "RangeViolation";
  }
  return "?";
}

class WireException : public std::runtime_error
{
public:
  WireException(WireError code, const std::string & what)
  : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code)
  {
  }
  WireError code() const noexcept { return code_; }

private:
  WireError code_;
};

struct Bsm
{
  AgentId sender{};
  std::uint32_t seq{0};
  SimMillis timestamp_ms{0};
  KinematicState state{};
  TransportMode mode{TransportMode::Pedestrian};
  bool gaze_covers_conflict{false};
  IntentDistribution intent{};
  ReachableSet reach{};
};

struct Advisory
{
  std::uint64_t conflict_id{0};
  AgentId target{};
  Maneuver action{Maneuver::MaintainCourse};
  SimMillis issued_at{0};
  bool is_reversal{false};
  bool informational{false};
  bool alarm{false};
  SimMillis expiry{0};
  SimMillis t_first_ms{0};
  double peer_distance{0.0};

  bool operator==(const Advisory &) const = default;
};

using Frame = std::variant<Bsm, Advisory>;

inline std::uint32_t crc32_of(std::span<const std::uint8_t> bytes)
{
  uLong c = crc32(0L, Z_NULL, 0);
  c = crc32(c, bytes.data(), static_cast<uInt>(bytes.size()));
  return static_cast<std::uint32_t>(c);
}

namespace detail
{

class Writer
{
public:
  template <typename T>
  void put(T v)
  {
    using U = std::make_unsigned_t<T>;
    const auto u = static_cast<U>(v);
    for (std::size_t i = 0; i < sizeof(T); ++i) {
      buf_.push_back(static_cast<std::uint8_t>((u >> (8 * i)) & 0xFF));
    }
  }
  std::vector<std::uint8_t> finish()
  {
    const std::uint32_t c = crc32_of(buf_);
    put<std::uint32_t>(c);
    return std::move(buf_);
  }
  void reserve(std::size_t n) { buf_.reserve(n); }

private:
  std::vector<std::uint8_t> buf_;
};

class Reader
{
public:
  explicit Reader(std::span<const std::uint8_t> b) : b_(b) {}
  template <typename T>
  T get()
  {
    using U = std::make_unsigned_t<T>;
    if (pos_ + sizeof(T) > b_.size()) {
      throw WireException(WireError::TruncatedFrame, "frame shorter than declared layout");
    }
    U u = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) {
      u |= static_cast<U>(static_cast<U>(b_[pos_ + i]) << (8 * i));
    }
    pos_ += sizeof(T);
    return static_cast<T>(u);
  }
  std::size_t pos() const { return pos_; }

private:
  std::span<const std::uint8_t> b_;
  std::size_t pos_{0};
};

[[noreturn]] inline void range_error(const std::string & what)
{
  throw WireException(WireError::RangeViolation, what);
}

inline std::int64_t quantize(double v, double scale, std::int64_t lo, std::int64_t hi, const char * field)
{
  if (!std::isfinite(v)) {
    range_error(std::string(field) + " not finite");
  }
  const double q = std::round(v * scale);
  if (q < static_cast<double>(lo) || q > static_cast<double>(hi)) {
    range_error(std::string(field) + " out of range");
  }
  return static_cast<std::int64_t>(q);
}

inline std::int32_t quantize_position(double v, const char * field)
{
  if (!(std::abs(v) <= kMaxAbsPosition)) {
    range_error(std::string(field) + " beyond 20 km");
  }
  return static_cast<std::int32_t>(quantize(v, 100.0, -2'000'000, 2'000'000, field));
}

inline double dequantize_position(std::int32_t cm, const char * field)
{
  if (cm < -2'000'000 || cm > 2'000'000) {
    range_error(std::string(field) + " beyond 20 km");
  }
  return cm / 100.0;
}

inline std::uint16_t quantize_heading(double h)
{
  if (!std::isfinite(h)) {
    range_error("heading not finite");
  }
  double hp = normalize_angle(h);
  if (hp < 0.0) {
    hp += 2.0 * std::numbers::pi;
  }
  const auto q = static_cast<std::int64_t>(std::llround(hp / (2.0 * std::numbers::pi) * 65536.0));
  return static_cast<std::uint16_t>(q & 0xFFFF);
}

inline double dequantize_heading(std::uint16_t q)
{
  return normalize_angle(static_cast<double>(q) * (2.0 * std::numbers::pi / 65536.0));
}

inline std::uint16_t quantize_prob(double p)
{
  return static_cast<std::uint16_t>(quantize(p, 65535.0, 0, 65535, "probability"));
}

inline void check_header(std::span<const std::uint8_t> bytes, std::size_t min_size)
{
  if (bytes.size() < min_size) {
    throw WireException(WireError::TruncatedFrame, "frame too short");
  }
  if (bytes[0] != kMagic0 || bytes[1] != kMagic1) {
    throw WireException(WireError::BadMagic, "bad magic");
  }
  if (bytes[2] != kWireVersion) {
    throw WireException(WireError::BadVersion, "unsupported version " + std::to_string(bytes[2]));
  }
  const auto body = bytes.first(bytes.size() - kCrcSize);
  Reader trailer(bytes.subspan(bytes.size() - kCrcSize));
  if (crc32_of(body) != trailer.get<std::uint32_t>()) {
    throw WireException(WireError::BadCrc, "checksum mismatch");
  }
}

}  // namespace detail

/// Frame length as a function of the reach-set shape.
inline std::size_t bsm_frame_size(const ReachableSet & reach)
{
  std::size_t n = kBsmFixedSize + kCrcSize;
  for (const auto & s : reach.steps) {
    n += 1 + s.size() * 12;
  }
  return n;
}

inline std::vector<std::uint8_t> encode_bsm(const Bsm & b)
{
  using detail::quantize;
  using detail::range_error;
  if (b.timestamp_ms < 0) range_error("negative timestamp");
  if (b.reach.steps.empty() || b.reach.steps.size() > 255) range_error("reach step count");

  detail::Writer w;
  w.reserve(bsm_frame_size(b.reach));
  w.put<std::uint8_t>(kMagic0);
  w.put<std::uint8_t>(kMagic1);
  w.put<std::uint8_t>(kWireVersion);
  w.put<std::uint8_t>(kMsgBsm);
  w.put<std::uint32_t>(b.sender.value);
  w.put<std::uint32_t>(b.seq);
  w.put<std::uint64_t>(static_cast<std::uint64_t>(b.timestamp_ms));
  w.put<std::int32_t>(detail::quantize_position(b.state.position.x, "pos_x"));
  w.put<std::int32_t>(detail::quantize_position(b.state.position.y, "pos_y"));
  w.put<std::uint16_t>(detail::quantize_heading(b.state.heading));
  w.put<std::uint16_t>(static_cast<std::uint16_t>(quantize(b.state.speed, 100.0, 0, 65535, "speed")));
  w.put<std::int16_t>(static_cast<std::int16_t>(quantize(b.state.accel, 100.0, -32768, 32767, "accel")));
  w.put<std::int16_t>(
    static_cast<std::int16_t>(quantize(b.state.yaw_rate, 1000.0, -32768, 32767, "yaw_rate")));
  w.put<std::uint8_t>(
    static_cast<std::uint8_t>(static_cast<std::uint8_t>(b.mode) | (b.gaze_covers_conflict ? 0x80 : 0)));
  for (double p : b.intent.probs) {
    w.put<std::uint16_t>(detail::quantize_prob(p));
  }
  const auto t0 = quantize(b.reach.t0, 1000.0, 0, INT64_MAX / 2, "reach t0");
  w.put<std::uint64_t>(static_cast<std::uint64_t>(t0));
  w.put<std::uint16_t>(static_cast<std::uint16_t>(quantize(b.reach.dt_reach, 1000.0, 1, 65535, "dt_reach")));
  w.put<std::uint8_t>(static_cast<std::uint8_t>(b.reach.steps.size()));
  for (const auto & step : b.reach.steps) {
    if (step.empty() || step.size() > 255) range_error("disc count");
    w.put<std::uint8_t>(static_cast<std::uint8_t>(step.size()));
    for (const auto & d : step) {
      w.put<std::int32_t>(detail::quantize_position(d.center.x, "disc cx"));
      w.put<std::int32_t>(detail::quantize_position(d.center.y, "disc cy"));
      if (!(d.radius > 0.0)) range_error("disc radius");
      w.put<std::uint16_t>(
        static_cast<std::uint16_t>(std::max<std::int64_t>(1, quantize(d.radius, 100.0, 0, 65535, "radius"))));
      w.put<std::uint16_t>(detail::quantize_prob(d.prob));
    }
  }
  return w.finish();
}

inline Bsm decode_bsm_body(std::span<const std::uint8_t> bytes)
{
  using detail::range_error;
  detail::Reader r(bytes);
  r.get<std::uint16_t>();  // magic
  r.get<std::uint8_t>();   // version
  if (r.get<std::uint8_t>() != kMsgBsm) range_error("not a BSM frame");
  Bsm b;
  b.sender = AgentId{r.get<std::uint32_t>()};
  b.seq = r.get<std::uint32_t>();
  const auto ts = r.get<std::uint64_t>();
  if (ts > static_cast<std::uint64_t>(INT64_MAX / 2)) range_error("timestamp");
  b.timestamp_ms = static_cast<SimMillis>(ts);
  b.state.position.x = detail::dequantize_position(r.get<std::int32_t>(), "pos_x");
  b.state.position.y = detail::dequantize_position(r.get<std::int32_t>(), "pos_y");
  b.state.heading = detail::dequantize_heading(r.get<std::uint16_t>());
  b.state.speed = r.get<std::uint16_t>() / 100.0;
  b.state.accel = r.get<std::int16_t>() / 100.0;
  b.state.yaw_rate = r.get<std::int16_t>() / 1000.0;
  const auto mode_byte = r.get<std::uint8_t>();
  if ((mode_byte & 0x7F) > 3) range_error("transport mode");
  b.mode = static_cast<TransportMode>(mode_byte & 0x7F);
  b.gaze_covers_conflict = (mode_byte & 0x80) != 0;
  for (auto & p : b.intent.probs) {
    p = r.get<std::uint16_t>() / 65535.0;
  }
  const auto t0 = r.get<std::uint64_t>();
  if (t0 > static_cast<std::uint64_t>(INT64_MAX / 2)) range_error("reach t0");
  b.reach.agent = b.sender;
  b.reach.t0 = static_cast<double>(t0) / 1000.0;
  const auto dt_ms = r.get<std::uint16_t>();
  if (dt_ms == 0) range_error("dt_reach zero");
  b.reach.dt_reach = dt_ms / 1000.0;
  const auto n_steps = r.get<std::uint8_t>();
  if (n_steps == 0) range_error("empty reach set");
  b.reach.steps.resize(n_steps);
  for (auto & step : b.reach.steps) {
    const auto n_discs = r.get<std::uint8_t>();
    if (n_discs == 0) range_error("empty reach step");
    step.resize(n_discs);
    for (auto & d : step) {
      d.center.x = detail::dequantize_position(r.get<std::int32_t>(), "disc cx");
      d.center.y = detail::dequantize_position(r.get<std::int32_t>(), "disc cy");
      const auto rad = r.get<std::uint16_t>();
      if (rad == 0) range_error("zero disc radius");
      d.radius = rad / 100.0;
      d.prob = r.get<std::uint16_t>() / 65535.0;
    }
  }
  if (r.pos() + kCrcSize != bytes.size()) {
    range_error("trailing bytes after declared layout");
  }
  return b;
}

/// Validates magic, version and CRC first, then walks the declared layout.
inline Bsm decode_bsm(std::span<const std::uint8_t> bytes)
{
  detail::check_header(bytes, 4 + kCrcSize);
  return decode_bsm_body(bytes.first(bytes.size()));
}

inline std::vector<std::uint8_t> encode_advisory(const Advisory & a)
{
  using detail::range_error;
  if (a.issued_at < 0 || a.expiry <= a.issued_at) range_error("advisory expiry must follow issue time");
  if (a.t_first_ms < 0) range_error("negative conflict time");
  detail::Writer w;
  w.reserve(kAdvisoryFrameSize);
  w.put<std::uint8_t>(kMagic0);
  w.put<std::uint8_t>(kMagic1);
  w.put<std::uint8_t>(kWireVersion);
  w.put<std::uint8_t>(kMsgAdvisory);
  w.put<std::uint64_t>(a.conflict_id);
  w.put<std::uint32_t>(a.target.value);
  w.put<std::uint8_t>(static_cast<std::uint8_t>(a.action));
  w.put<std::uint64_t>(static_cast<std::uint64_t>(a.issued_at));
  w.put<std::uint8_t>(static_cast<std::uint8_t>(
    (a.is_reversal ? 1 : 0) | (a.informational ? 2 : 0) | (a.alarm ? 4 : 0)));
  w.put<std::uint64_t>(static_cast<std::uint64_t>(a.expiry));
  w.put<std::uint64_t>(static_cast<std::uint64_t>(a.t_first_ms));
  w.put<std::uint32_t>(static_cast<std::uint32_t>(
    detail::quantize(a.peer_distance, 100.0, 0, UINT32_MAX, "peer distance")));
  return w.finish();
}

inline Advisory decode_advisory(std::span<const std::uint8_t> bytes)
{
  using detail::range_error;
  detail::check_header(bytes, 4 + kCrcSize);
  detail::Reader r(bytes);
  r.get<std::uint16_t>();
  r.get<std::uint8_t>();
  if (r.get<std::uint8_t>() != kMsgAdvisory) range_error("not an advisory frame");
  Advisory a;
  a.conflict_id = r.get<std::uint64_t>();
  a.target = AgentId{r.get<std::uint32_t>()};
  const auto action = r.get<std::uint8_t>();
  if (action >= kManeuverCount) range_error("advisory action");
  a.action = static_cast<Maneuver>(action);
  a.issued_at = static_cast<SimMillis>(r.get<std::uint64_t>());
  const auto flags = r.get<std::uint8_t>();
  if (flags & ~0x07) range_error("advisory flags");
  a.is_reversal = flags & 1;
  a.informational = flags & 2;
  a.alarm = flags & 4;
  a.expiry = static_cast<SimMillis>(r.get<std::uint64_t>());
  a.t_first_ms = static_cast<SimMillis>(r.get<std::uint64_t>());
  a.peer_distance = r.get<std::uint32_t>() / 100.0;
  if (a.issued_at < 0 || a.expiry <= a.issued_at || a.t_first_ms < 0) range_error("advisory times");
  if (r.pos() + kCrcSize != bytes.size()) range_error("trailing bytes after declared layout");
  return a;
}

/// Decodes either message type.
inline Frame decode_frame(std::span<const std::uint8_t> bytes)
{
  detail::check_header(bytes, 4 + kCrcSize);
  switch (bytes[3]) {
    case kMsgBsm: return decode_bsm_body(bytes);
    case kMsgAdvisory: return decode_advisory(bytes);
    default: detail::range_error("unknown msg_type");
  }
}

}  // namespace wearsafe

#endif  // WEARSAFE__WIRE_HPP_
