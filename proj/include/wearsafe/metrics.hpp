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

#ifndef WEARSAFE__METRICS_HPP_
#define WEARSAFE__METRICS_HPP_

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace wearsafe
{

/// Baseline clearance above which an advised pair counts as a false positive.
inline constexpr double kFalsePositiveGap = 10.0;  // m
inline constexpr double kNearMissGap = 2.0;        // m

/// Per-run outcome counters; every field is recomputable from the trace.
struct RunMetrics
{
  std::int64_t collisions{0};
  std::int64_t near_misses{0};
  std::int64_t advisories_issued{0};
  std::int64_t advisories_informational{0};
  std::int64_t reversals{0};
  std::int64_t escalations{0};
  std::int64_t records{0};
  std::int64_t false_positives{0};
  double false_positive_rate{0.0};
  std::int64_t lead_count{0};
  double lead_mean{0.0};
  double lead_min{0.0};
  std::int64_t bsm_sent{0};
  std::int64_t bsm_delivered{0};
  std::int64_t bsm_dropped{0};
  std::int64_t bsm_rejected{0};
  std::int64_t spoof_sent{0};
  std::int64_t spoof_delivered{0};
  std::int64_t spoof_rejected{0};
  std::int64_t adv_sent{0};
  std::int64_t adv_delivered{0};
  std::int64_t adv_dropped{0};
  std::int64_t adv_resent{0};
  std::int64_t bytes_sent{0};
  std::int64_t bt_sent{0};
  std::int64_t bt_delivered{0};
  std::int64_t bt_dropped{0};
  double bt_latency_median{0.0};
  std::int64_t cell_sent{0};
  std::int64_t cell_delivered{0};
  std::int64_t cell_dropped{0};
  double cell_latency_median{0.0};
  double adv_latency_median{0.0};
};

/// Column order of summary CSV files and report tables.
inline std::vector<std::pair<std::string, double>> metric_fields(const RunMetrics & m)
{
  auto d = [](std::int64_t v) { return static_cast<double>(v); };
  return {
    {"collisions", d(m.collisions)},
    {"near_misses", d(m.near_misses)},
    {"advisories_issued", d(m.advisories_issued)},
    {"advisories_informational", d(m.advisories_informational)},
    {"reversals", d(m.reversals)},
    {"escalations", d(m.escalations)},
    {"records", d(m.records)},
    {"false_positives", d(m.false_positives)},
    {"false_positive_rate", m.false_positive_rate},
    {"lead_count", d(m.lead_count)},
    {"lead_mean_s", m.lead_mean},
    {"lead_min_s", m.lead_min},
    {"bsm_sent", d(m.bsm_sent)},
    {"bsm_delivered", d(m.bsm_delivered)},
    {"bsm_dropped", d(m.bsm_dropped)},
    {"bsm_rejected", d(m.bsm_rejected)},
    {"spoof_sent", d(m.spoof_sent)},
    {"spoof_delivered", d(m.spoof_delivered)},
    {"spoof_rejected", d(m.spoof_rejected)},
    {"adv_sent", d(m.adv_sent)},
    {"adv_delivered", d(m.adv_delivered)},
    {"adv_dropped", d(m.adv_dropped)},
    {"adv_resent", d(m.adv_resent)},
    {"bytes_sent", d(m.bytes_sent)},
    {"bt_sent", d(m.bt_sent)},
    {"bt_delivered", d(m.bt_delivered)},
    {"bt_dropped", d(m.bt_dropped)},
    {"bt_latency_median_ms", m.bt_latency_median},
    {"cell_sent", d(m.cell_sent)},
    {"cell_delivered", d(m.cell_delivered)},
    {"cell_dropped", d(m.cell_dropped)},
    {"cell_latency_median_ms", m.cell_latency_median},
    {"adv_latency_median_ms", m.adv_latency_median},
  };
}

/// Shortest text that parses back to the same double; whole counts print without a fraction.
inline std::string format_number(double v)
{
  if (std::abs(v) < 1e15 && v == std::trunc(v)) {
    return nlohmann::json(static_cast<std::int64_t>(v)).dump();
  }
  return nlohmann::json(v).dump();
}

inline std::string summary_csv_header()
{
  std::string out = "run";
  for (const auto & [name, value] : metric_fields(RunMetrics{})) {
    out += "," + name;
  }
  return out;
}

inline std::string summary_csv_row(const std::string & run, const RunMetrics & m)
{
  std::string out = run;
  for (const auto & [name, value] : metric_fields(m)) {
    out += "," + format_number(value);
  }
  return out;
}

inline double median_of(std::vector<double> v)
{
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

/// Outcome of one agent pair over a run, measured on ground truth.
struct PairOutcome
{
  std::uint32_t a{0};
  std::uint32_t b{0};
  double min_gap{0.0};
  std::int64_t contacts{0};
  std::optional<std::int64_t> first_contact_ms{};
};

/// Ground-truth pair outcomes of the counterfactual run with advisories off.
struct BaselineSummary
{
  std::uint64_t seed{0};
  std::vector<PairOutcome> pairs{};
};

class MismatchedRuns : public std::invalid_argument
{
public:
  MismatchedRuns() : std::invalid_argument("paired runs must share the scenario seed") {}
};

struct AdvisoryIssue
{
  std::int64_t t{0};
  std::uint32_t a{0};
  std::uint32_t b{0};
  bool informational{false};
};

/// Advisories whose pair stayed more than 10 m apart in the baseline, over
/// all advisories issued; informational notices are not warnings.
inline std::pair<std::int64_t, double> false_positive_rate(
  std::uint64_t enabled_seed, const std::vector<AdvisoryIssue> & issued, const BaselineSummary & baseline)
{
  if (enabled_seed != baseline.seed) {
    throw MismatchedRuns();
  }
  std::map<std::pair<std::uint32_t, std::uint32_t>, double> gap;
  for (const auto & p : baseline.pairs) {
    gap[{p.a, p.b}] = p.min_gap;
  }
  std::int64_t total = 0;
  std::int64_t fp = 0;
  for (const auto & adv : issued) {
    if (adv.informational) continue;
    ++total;
    auto it = gap.find({std::min(adv.a, adv.b), std::max(adv.a, adv.b)});
    if (it != gap.end() && it->second > kFalsePositiveGap) ++fp;
  }
  return {fp, total == 0 ? 0.0 : static_cast<double>(fp) / static_cast<double>(total)};
}

/// Folds trace records into RunMetrics. The simulator feeds it live and the
/// report command feeds it from trace files, so both agree by construction.
class MetricsAccumulator
{
public:
  void consume(const nlohmann::json & r)
  {
    const auto & type = r.at("type").get_ref<const std::string &>();
    if (type == "header") {
      seed_ = r.at("seed").get<std::uint64_t>();
    } else if (type == "baseline_pair") {
      PairOutcome p;
      p.a = r.at("a").get<std::uint32_t>();
      p.b = r.at("b").get<std::uint32_t>();
      p.min_gap = r.at("min_gap").get<double>();
      if (!r.at("contact_ms").is_null()) p.first_contact_ms = r.at("contact_ms").get<std::int64_t>();
      baseline_.seed = r.at("seed").get<std::uint64_t>();
      baseline_.pairs.push_back(p);
      has_baseline_ = true;
    } else if (type == "bsm_tx") {
      const bool dropped = r.at("dropped").get<bool>();
      tx(r, dropped);
      ++m_.bsm_sent;
      if (dropped) ++m_.bsm_dropped;
      if (r.at("spoof").get<bool>()) ++m_.spoof_sent;
    } else if (type == "bsm_rx") {
      rx(r);
      ++m_.bsm_delivered;
      if (r.at("spoof").get<bool>()) ++m_.spoof_delivered;
      if (!r.at("accepted").get<bool>()) {
        ++m_.bsm_rejected;
        if (r.at("spoof").get<bool>()) ++m_.spoof_rejected;
      }
    } else if (type == "adv_tx") {
      const bool dropped = r.at("dropped").get<bool>();
      tx(r, dropped);
      ++m_.adv_sent;
      if (dropped) ++m_.adv_dropped;
      if (r.at("resend").get<bool>()) {
        ++m_.adv_resent;
        return;
      }
      const bool info = r.at("informational").get<bool>();
      if (info) {
        ++m_.advisories_informational;
      } else {
        ++m_.advisories_issued;
      }
      issued_.push_back(
        {r.at("t").get<std::int64_t>(), r.at("a").get<std::uint32_t>(), r.at("b").get<std::uint32_t>(), info});
    } else if (type == "adv_rx") {
      rx(r);
      ++m_.adv_delivered;
      adv_latency_.push_back(r.at("latency").get<double>());
    } else if (type == "record") {
      ++m_.records;
      if (r.at("state").get_ref<const std::string &>() == "escalated") ++m_.escalations;
    } else if (type == "transition") {
      const auto & to = r.at("to").get_ref<const std::string &>();
      if (to == "reversed") ++m_.reversals;
      if (to == "escalated") ++m_.escalations;
    } else if (type == "contact") {
      ++m_.collisions;
    } else if (type == "pair") {
      if (r.at("contacts").get<std::int64_t>() == 0 && r.at("min_gap").get<double>() < kNearMissGap) {
        ++m_.near_misses;
      }
    }
  }

  RunMetrics finish() const
  {
    RunMetrics m = m_;
    m.bt_latency_median = median_of(bt_latency_);
    m.cell_latency_median = median_of(cell_latency_);
    m.adv_latency_median = median_of(adv_latency_);
    if (has_baseline_) {
      const auto [fp, rate] = false_positive_rate(seed_, issued_, baseline_);
      m.false_positives = fp;
      m.false_positive_rate = rate;
      // Lead time: first warning for a pair versus its counterfactual contact.
      std::vector<double> leads;
      for (const auto & p : baseline_.pairs) {
        if (!p.first_contact_ms) continue;
        for (const auto & adv : issued_) {
          if (adv.informational || adv.a != p.a || adv.b != p.b) continue;
          if (adv.t <= *p.first_contact_ms) {
            leads.push_back(static_cast<double>(*p.first_contact_ms - adv.t) / 1000.0);
          }
          break;
        }
      }
      m.lead_count = static_cast<std::int64_t>(leads.size());
      if (!leads.empty()) {
        double sum = 0.0;
        for (double l : leads) sum += l;
        m.lead_mean = sum / static_cast<double>(leads.size());
        m.lead_min = *std::min_element(leads.begin(), leads.end());
      }
    }
    return m;
  }

  const std::vector<AdvisoryIssue> & issued() const { return issued_; }

private:
  void tx(const nlohmann::json & r, bool dropped)
  {
    m_.bytes_sent += r.at("bytes").get<std::int64_t>();
    if (r.at("channel").get_ref<const std::string &>() == "bluetooth") {
      ++m_.bt_sent;
      if (dropped) ++m_.bt_dropped;
    } else {
      ++m_.cell_sent;
      if (dropped) ++m_.cell_dropped;
    }
  }

  void rx(const nlohmann::json & r)
  {
    const double lat = r.at("latency").get<double>();
    if (r.at("channel").get_ref<const std::string &>() == "bluetooth") {
      ++m_.bt_delivered;
      bt_latency_.push_back(lat);
    } else {
      ++m_.cell_delivered;
      cell_latency_.push_back(lat);
    }
  }

  RunMetrics m_{};
  std::uint64_t seed_{0};
  bool has_baseline_{false};
  BaselineSummary baseline_{};
  std::vector<AdvisoryIssue> issued_{};
  std::vector<double> bt_latency_{};
  std::vector<double> cell_latency_{};
  std::vector<double> adv_latency_{};
};

}  // namespace wearsafe

#endif  // WEARSAFE__METRICS_HPP_
