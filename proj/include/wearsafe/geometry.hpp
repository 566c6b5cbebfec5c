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

#ifndef WEARSAFE__GEOMETRY_HPP_
#define WEARSAFE__GEOMETRY_HPP_

#include <cmath>
#include <compare>
#include <cstdint>
#include <numbers>

namespace wearsafe
{

struct Vec2
{
  double x{0.0};
  double y{0.0};

  constexpr Vec2 operator+(const Vec2 & o) const { return {x + o.x, y + o.y}; }
  constexpr Vec2 operator-(const Vec2 & o) const { return {x - o.x, y - o.y}; }
  constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
  constexpr Vec2 & operator+=(const Vec2 & o)
  {
    x += o.x;
    y += o.y;
    return *this;
  }
  constexpr bool operator==(const Vec2 &) const = default;

  double norm() const { return std::hypot(x, y); }
  constexpr double dot(const Vec2 & o) const { return x * o.x + y * o.y; }
  bool finite() const { return std::isfinite(x) && std::isfinite(y); }
};

inline double distance(const Vec2 & a, const Vec2 & b) { return (a - b).norm(); }

/// Wraps an angle into [-pi, pi).
inline double normalize_angle(double a)
{
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double r = std::fmod(a + std::numbers::pi, two_pi);
  if (r < 0.0) {
    r += two_pi;
  }
  r -= std::numbers::pi;
  // fmod can land exactly on +pi after the shift for tiny negative inputs.
  if (r >= std::numbers::pi) {
    r -= two_pi;
  }
  return r;
}

inline Vec2 unit_heading(double heading) { return {std::cos(heading), std::sin(heading)}; }

/// Agent identifier. Totally ordered; the wire carries it as u32.
struct AgentId
{
  std::uint32_t value{0};
  constexpr auto operator<=>(const AgentId &) const = default;
};

/// Simulation time in integer milliseconds since the start of a run.
using SimMillis = std::int64_t;

inline SimMillis to_millis(double seconds) { return static_cast<SimMillis>(std::llround(seconds * 1000.0)); }
inline double to_seconds(SimMillis ms) { return static_cast<double>(ms) / 1000.0; }

}  // namespace wearsafe

#endif  // WEARSAFE__GEOMETRY_HPP_
