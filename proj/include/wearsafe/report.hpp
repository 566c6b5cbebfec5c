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

#ifndef WEARSAFE__REPORT_HPP_
#define WEARSAFE__REPORT_HPP_

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "wearsafe/metrics.hpp"

namespace wearsafe
{

/// Unreadable or corrupt trace input, located by file and line.
class ReportError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

struct TraceSummary
{
  std::string run;
  RunMetrics metrics;
};

/// Recomputes a run's metrics from its JSON-lines trace.
inline TraceSummary summarize_trace(std::istream & in, const std::string & source, std::string run)
{
  MetricsAccumulator acc;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (line.empty()) continue;
    try {
      const auto record = nlohmann::json::parse(line);
      if (record.at("type") == "header") {
        run = record.at("scenario").get<std::string>();
      }
      acc.consume(record);
    } catch (const nlohmann::json::exception & e) {
      throw ReportError(source + ":" + std::to_string(n) + ": corrupt trace record (" + e.what() + ")");
    }
  }
  return {std::move(run), acc.finish()};
}

inline TraceSummary summarize_trace_file(const std::filesystem::path & path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ReportError(path.string() + ":0: cannot open trace");
  }
  return summarize_trace(in, path.string(), path.parent_path().filename().string());
}

/// Records of one type from an in-memory trace, in trace order.
inline std::vector<nlohmann::json> records_of_type(const std::string & trace, const std::string & type)
{
  std::vector<nlohmann::json> out;
  std::istringstream in(trace);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto r = nlohmann::json::parse(line);
    if (r.at("type") == type) out.push_back(std::move(r));
  }
  return out;
}

/// All trace.jsonl files under `dir`, in path order.
inline std::vector<std::filesystem::path> find_traces(const std::filesystem::path & dir)
{
  std::vector<std::filesystem::path> out;
  if (!std::filesystem::is_directory(dir)) {
    throw ReportError(dir.string() + ":0: not a directory");
  }
  for (const auto & e : std::filesystem::recursive_directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().filename() == "trace.jsonl") {
      out.push_back(e.path());
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

struct AggregateRow
{
  std::string metric;
  std::size_t n{0};
  double mean{0.0};
  double std{0.0};
  double min{0.0};
  double max{0.0};
};

/// Mean, sample standard deviation, min and max of every metric across runs.
inline std::vector<AggregateRow> aggregate(const std::vector<TraceSummary> & runs)
{
  if (runs.empty()) {
    throw ReportError("no traces to report");
  }
  std::vector<AggregateRow> rows;
  const auto names = metric_fields(RunMetrics{});
  for (std::size_t k = 0; k < names.size(); ++k) {
    AggregateRow row;
    row.metric = names[k].first;
    row.n = runs.size();
    std::vector<double> v;
    for (const auto & r : runs) v.push_back(metric_fields(r.metrics)[k].second);
    double sum = 0.0;
    for (double x : v) sum += x;
    row.mean = sum / static_cast<double>(v.size());
    double ss = 0.0;
    for (double x : v) ss += (x - row.mean) * (x - row.mean);
    row.std = v.size() > 1 ? std::sqrt(ss / static_cast<double>(v.size() - 1)) : 0.0;
    row.min = *std::min_element(v.begin(), v.end());
    row.max = *std::max_element(v.begin(), v.end());
    rows.push_back(row);
  }
  return rows;
}

inline std::string report_csv(const std::vector<AggregateRow> & rows)
{
  std::ostringstream out;
  out << "metric,n,mean,std,min,max\n";
  for (const auto & r : rows) {
    out << r.metric << ',' << r.n << ',' << format_number(r.mean) << ',' << format_number(r.std) << ','
        << format_number(r.min) << ',' << format_number(r.max) << '\n';
  }
  return out.str();
}

inline std::string report_text(const std::vector<AggregateRow> & rows)
{
  std::ostringstream out;
  out << "runs: " << (rows.empty() ? 0 : rows.front().n) << '\n';
  out << std::left << std::setw(28) << "metric" << std::right << std::setw(14) << "mean" << std::setw(14)
      << "std" << std::setw(14) << "min" << std::setw(14) << "max" << '\n';
  out << std::fixed << std::setprecision(4);
  for (const auto & r : rows) {
    out << std::left << std::setw(28) << r.metric << std::right << std::setw(14) << r.mean << std::setw(14)
        << r.std << std::setw(14) << r.min << std::setw(14) << r.max << '\n';
  }
  return out.str();
}

}  // namespace wearsafe

#endif  // WEARSAFE__REPORT_HPP_
