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

#ifndef WEARSAFE__REACHSET_HPP_
#define WEARSAFE__REACHSET_HPP_

#include "wearsafe/intent.hpp"
#include "wearsafe/sensing.hpp"
#include "wearsafe/world.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <vector>

namespace wearsafe
{

struct WeightedDisc
{
  Vec2 center{};
  double radius{0.0};
  double prob{0.0};

  bool operator==(const WeightedDisc &) const = default;
};

/// Time-indexed discs bounding an agent's future occupancy. Step k covers
/// time t0 + k * dt_reach and holds one disc per maneuver.
struct ReachableSet
{
  AgentId agent{};
  double t0{0.0};
  double dt_reach{0.2};
  std::vector<std::vector<WeightedDisc>> steps;

  double time_at(std::size_t k) const { return t0 + static_cast<double>(k) * dt_reach; }

  bool valid(double tol = 1e-9) const
  {
    if (steps.empty() || !(dt_reach > 0.0)) {
      return false;
    }
    for (const auto & step : steps) {
      if (step.empty()) {
        return false;
      }
      double sum = 0.0;
      for (const auto & d : step) {
        if (!(d.radius > 0.0) || !(d.prob > 0.0) || d.prob > 1.0) {
          return false;
        }
        sum += d.prob;
      }
      if (std::abs(sum - 1.0) > tol) {
        return false;
      }
    }
    return true;
  }
};

struct ReachParams
{
  double horizon{6.0};
  double dt_reach{0.2};
  double beta{0.3};  // m/s of radius growth per second of lookahead
  // Radius multiple of the per-axis position std: the 99% radial quantile of
  // an isotropic 2-D Gaussian, sqrt(-2 ln 0.01).
  double sigma_scale{3.0348542587702925};
};

inline std::size_t reach_step_count(const ReachParams & p)
{
  return static_cast<std::size_t>(std::ceil(p.horizon / p.dt_reach - 1e-9));
}

/// Forward-simulates every maneuver from the estimate and inflates the
/// resulting centers by footprint, position uncertainty and lookahead dispersion.
inline ReachableSet compute_reachable_set(
  AgentId agent, const FusedEstimate & est, const IntentDistribution & intent,
  const ModeLimits & limits, const ReachParams & params = {})
{
  if (!(params.horizon > 0.0) || !std::isfinite(params.horizon)) {
    throw std::invalid_argument("compute_reachable_set: horizon must be positive");
  }
  if (!(params.dt_reach > 0.0) || !std::isfinite(params.dt_reach)) {
    throw std::invalid_argument("compute_reachable_set: dt_reach must be positive");
  }
  const std::size_t n = reach_step_count(params);
  ReachableSet set;
  set.agent = agent;
  set.t0 = est.time;
  set.dt_reach = params.dt_reach;
  set.steps.assign(n + 1, {});
  for (auto & s : set.steps) {
    s.reserve(kManeuverCount);
  }
  const double base = limits.footprint_radius + params.sigma_scale * est.pos_std;
  for (Maneuver m : kAllManeuvers) {
    KinematicState s = est.mean;
    const ControlInput u = maneuver_to_control(m, s, limits);
    for (std::size_t k = 0; k <= n; ++k) {
      const double r = base + params.beta * static_cast<double>(k) * params.dt_reach;
      set.steps[k].push_back({s.position, r, intent[m]});
      if (k < n) {
        s = step(s, u, limits, params.dt_reach);
      }
    }
  }
  return set;
}

struct Conflict
{
  AgentId agent_a{};
  AgentId agent_b{};
  double t_first{0.0};
  double prob{0.0};
  double separation_at_t{0.0};

  bool operator==(const Conflict &) const = default;
};

struct ScanParams
{
  double p_min{0.05};
  double d_safe{0.5};
};

/// Earliest common grid step at which some disc pair (inflated by d_safe)
/// intersects with joint probability at least p_min. Sets are aligned to the
/// later t0 by nearest-step resampling.
inline std::optional<Conflict> conflict_scan(
  const ReachableSet & a_in, const ReachableSet & b_in, const ScanParams & params = {})
{
  if (std::abs(a_in.dt_reach - b_in.dt_reach) > 1e-9) {
    throw std::invalid_argument("conflict_scan: mismatched dt_reach");
  }
  const bool swap = b_in.agent < a_in.agent;
  const ReachableSet & a = swap ? b_in : a_in;
  const ReachableSet & b = swap ? a_in : b_in;
  const double dt = a.dt_reach;
  const double t_common = std::max(a.t0, b.t0);
  const auto off_a = static_cast<std::size_t>(std::llround((t_common - a.t0) / dt));
  const auto off_b = static_cast<std::size_t>(std::llround((t_common - b.t0) / dt));

  for (std::size_t j = 0; j + off_a < a.steps.size() && j + off_b < b.steps.size(); ++j) {
    const auto & da = a.steps[j + off_a];
    const auto & db = b.steps[j + off_b];
    double best = -1.0;
    double best_sep = 0.0;
    for (const auto & x : da) {
      for (const auto & y : db) {
        const double sep = distance(x.center, y.center);
        if (sep < x.radius + y.radius + params.d_safe) {
          const double joint = x.prob * y.prob;
          if (joint > best) {
            best = joint;
            best_sep = sep;
          }
        }
      }
    }
    if (best >= params.p_min) {
      return Conflict{
        a.agent, b.agent, t_common + static_cast<double>(j) * dt, std::min(best, 1.0), best_sep};
    }
  }
  return std::nullopt;
}

/// Exact area of a union of discs (boundary integral over uncovered arcs).
inline double union_area(const std::vector<WeightedDisc> & discs)
{
  constexpr double two_pi = 2.0 * std::numbers::pi;
  // Drop duplicates and discs contained in another one.
  std::vector<WeightedDisc> cs;
  for (std::size_t i = 0; i < discs.size(); ++i) {
    const auto & d = discs[i];
    bool covered = false;
    for (std::size_t j = 0; j < discs.size() && !covered; ++j) {
      if (i == j) continue;
      const auto & o = discs[j];
      const double dist = distance(d.center, o.center);
      if (dist + d.radius <= o.radius + 1e-12) {
        // Equal discs: keep the one with the lowest index.
        const bool same = dist <= 1e-12 && std::abs(d.radius - o.radius) <= 1e-12;
        covered = !same || j < i;
      }
    }
    if (!covered) {
      cs.push_back(d);
    }
  }

  double area = 0.0;
  for (std::size_t i = 0; i < cs.size(); ++i) {
    const auto & c = cs[i];
    std::vector<std::pair<double, double>> covered;  // angular intervals in [0, 2pi)
    bool fully_covered = false;
    for (std::size_t j = 0; j < cs.size(); ++j) {
      if (i == j) continue;
      const auto & o = cs[j];
      const Vec2 dv = o.center - c.center;
      const double d = dv.norm();
      if (d >= c.radius + o.radius) continue;
      if (d + c.radius <= o.radius) {
        fully_covered = true;
        break;
      }
      if (d + o.radius <= c.radius) continue;
      const double base = std::atan2(dv.y, dv.x);
      const double cos_half =
        (c.radius * c.radius + d * d - o.radius * o.radius) / (2.0 * c.radius * d);
      const double half = std::acos(std::clamp(cos_half, -1.0, 1.0));
      double lo = base - half;
      double hi = base + half;
      lo = std::fmod(lo + 2.0 * two_pi, two_pi);
      hi = lo + 2.0 * half;
      if (hi > two_pi) {
        covered.emplace_back(lo, two_pi);
        covered.emplace_back(0.0, hi - two_pi);
      } else {
        covered.emplace_back(lo, hi);
      }
    }
    if (fully_covered) continue;
    std::sort(covered.begin(), covered.end());
    auto arc = [&](double t0, double t1) {
      return c.center.x * c.radius * (std::sin(t1) - std::sin(t0)) -
             c.center.y * c.radius * (std::cos(t1) - std::cos(t0)) + c.radius * c.radius * (t1 - t0);
    };
    double cursor = 0.0;
    for (const auto & [lo, hi] : covered) {
      if (lo > cursor) {
        area += arc(cursor, lo);
      }
      cursor = std::max(cursor, hi);
    }
    if (cursor < two_pi) {
      area += arc(cursor, two_pi);
    }
  }
  return 0.5 * area;
}

/// Area, summed over steps, of the union of discs whose own probability is at
/// least `p_credible`. Low-probability maneuvers drop out, so a concentrated
/// intent yields a smaller footprint than the uniform one.
inline double credible_area(const ReachableSet & set, double p_credible = 0.05)
{
  double total = 0.0;
  for (const auto & step : set.steps) {
    std::vector<WeightedDisc> kept;
    for (const auto & d : step) {
      if (d.prob >= p_credible) {
        kept.push_back(d);
      }
    }
    total += union_area(kept);
  }
  return total;
}

/// Probability-weighted disc area summed over steps, sum of p * pi * r^2.
inline double probability_weighted_area(const ReachableSet & set)
{
  double total = 0.0;
  for (const auto & step : set.steps) {
    for (const auto & d : step) {
      total += d.prob * std::numbers::pi * d.radius * d.radius;
    }
  }
  return total;
}

/// Line-of-sight time to collision under straight-line extrapolation.
/// Empty when the agents are not closing.
inline std::optional<double> extended_ttc(
  const KinematicState & sa, const KinematicState & sb, double ra, double rb)
{
  const Vec2 d = sb.position - sa.position;
  const Vec2 v = unit_heading(sb.heading) * sb.speed - unit_heading(sa.heading) * sa.speed;
  const double dist = d.norm();
  if (dist <= ra + rb) {
    // Already in contact; closing or not, there is no time left.
    if (dist == 0.0 || -d.dot(v) / dist > 0.0) {
      return 0.0;
    }
    return std::nullopt;
  }
  const double closing = -d.dot(v) / dist;
  if (!(closing > 0.0)) {
    return std::nullopt;
  }
  return std::max(0.0, (dist - (ra + rb)) / closing);
}

}  // namespace wearsafe

#endif  // WEARSAFE__REACHSET_HPP_
