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

#ifndef WEARSAFE__BATCH_HPP_
#define WEARSAFE__BATCH_HPP_

#include <glob.h>

#include <algorithm>
#include <atomic>
#include <exception>
#include <filesystem>
#include <fstream>
#include <string>
#include <thread>
#include <vector>

#include "wearsafe/scenario.hpp"
#include "wearsafe/simulation.hpp"

namespace wearsafe
{

/// Sorted paths matching a shell glob pattern.
inline std::vector<std::string> expand_glob(const std::string & pattern)
{
  glob_t g{};
  std::vector<std::string> out;
  const int rc = ::glob(pattern.c_str(), 0, nullptr, &g);
  if (rc == 0) {
    for (std::size_t i = 0; i < g.gl_pathc; ++i) out.emplace_back(g.gl_pathv[i]);
  }
  ::globfree(&g);
  std::sort(out.begin(), out.end());
  return out;
}

struct BatchEntry
{
  std::string file;
  std::string dir;
  Scenario scenario;
  RunResult result;
};

/// Loads every scenario first (so schema errors surface before any run), then
/// runs them on `jobs` threads. Runs share nothing; results keep input order.
inline std::vector<BatchEntry> run_batch(
  const std::vector<std::string> & files, const std::filesystem::path & out_dir, unsigned jobs,
  const RunOptions & opts = {})
{
  std::vector<BatchEntry> entries;
  std::vector<std::string> used;
  for (const auto & f : files) {
    BatchEntry e;
    e.file = f;
    e.scenario = load_scenario(f);
    std::string dir = std::filesystem::path(f).stem().string();
    const std::string base = dir;
    for (int k = 2; std::find(used.begin(), used.end(), dir) != used.end(); ++k) {
      dir = base + "_" + std::to_string(k);
    }
    used.push_back(dir);
    e.dir = dir;
    entries.push_back(std::move(e));
  }

  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(entries.size());
  auto worker = [&] {
    for (std::size_t i = next++; i < entries.size(); i = next++) {
      try {
        entries[i].result = run_scenario(entries[i].scenario, opts);
        write_run_outputs(out_dir / entries[i].dir, entries[i].scenario, entries[i].result);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned n = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(entries.size())));
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < n; ++t) pool.emplace_back(worker);
  for (auto & t : pool) t.join();
  for (const auto & e : errors) {
    if (e) std::rethrow_exception(e);
  }

  std::filesystem::create_directories(out_dir);
  std::ofstream csv(out_dir / "summary.csv", std::ios::binary);
  csv << summary_csv_header() << '\n';
  for (const auto & e : entries) {
    csv << summary_csv_row(e.dir, e.result.metrics) << '\n';
  }
  return entries;
}

}  // namespace wearsafe

#endif  // WEARSAFE__BATCH_HPP_
