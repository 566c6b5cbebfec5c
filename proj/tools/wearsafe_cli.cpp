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

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <string>
#include <thread>

#include "wearsafe/batch.hpp"
#include "wearsafe/report.hpp"
#include "wearsafe/scenario.hpp"
#include "wearsafe/simulation.hpp"

namespace
{

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitFault = 3;

}  // namespace

int main(int argc, char ** argv)
{
  CLI::App app{"wearsafe: wearable-network traffic safety simulator"};
  app.require_subcommand(1);

  std::string scenario_path;
  std::uint64_t seed = 0;
  std::string out_dir;
  bool disable_advisories = false;
  bool disable_plausibility = false;
  std::string profile;
  bool dump_coordinator = false;
  auto * run = app.add_subcommand("run", "simulate one scenario");
  run->add_option("--scenario", scenario_path, "scenario JSON file")->required();
  auto * seed_opt = run->add_option("--seed", seed, "master seed (overrides the scenario's)");
  run->add_option("--out", out_dir, "output directory")->required();
  run->add_flag("--disable-advisories", disable_advisories, "detect only, never advise");
  run->add_flag("--disable-plausibility", disable_plausibility, "accept every decoded BSM");
  run->add_option("--channel-profile", profile, "channel profile name");
  run->add_flag("--dump-coordinator", dump_coordinator, "add coordinator state to the trace every tick");

  std::string pattern;
  std::string batch_out;
  unsigned jobs = std::max(1u, std::thread::hardware_concurrency());
  auto * batch = app.add_subcommand("batch", "simulate every scenario matching a glob");
  batch->add_option("--scenarios", pattern, "glob of scenario files")->required();
  batch->add_option("--out", batch_out, "output directory")->required();
  batch->add_option("--jobs", jobs, "parallel runs")->check(CLI::PositiveNumber);

  std::string in_dir;
  std::string format = "text";
  auto * report = app.add_subcommand("report", "aggregate run traces");
  report->add_option("--in", in_dir, "directory containing run outputs")->required();
  report->add_option("--format", format, "csv or text")->check(CLI::IsMember({"csv", "text"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError & e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*run) {
      auto scenario = wearsafe::load_scenario(scenario_path);
      if (*seed_opt) scenario.seed = seed;
      if (disable_advisories) scenario.toggles.advisories = false;
      if (disable_plausibility) scenario.toggles.plausibility = false;
      if (!profile.empty()) {
        if (!wearsafe::channel_profile(profile)) {
          std::cerr << "error: unknown channel profile '" << profile << "'\n";
          return kExitConfig;
        }
        scenario.channel_profile = profile;
      }
      wearsafe::RunOptions opts;
      opts.dump_coordinator = dump_coordinator;
      const auto res = wearsafe::run_scenario(scenario, opts);
      wearsafe::write_run_outputs(out_dir, scenario, res);
      std::cout << wearsafe::summary_csv_header() << '\n'
                << wearsafe::summary_csv_row(scenario.name, res.metrics) << '\n'
                << "trace_sha256 " << res.sha256 << '\n';
    } else if (*batch) {
      const auto files = wearsafe::expand_glob(pattern);
      if (files.empty()) {
        std::cerr << "error: no scenario files match '" << pattern << "'\n";
        return kExitConfig;
      }
      const auto entries = wearsafe::run_batch(files, batch_out, jobs);
      std::cout << "ran " << entries.size() << " scenarios into " << batch_out << '\n';
    } else if (*report) {
      std::vector<wearsafe::TraceSummary> runs;
      for (const auto & p : wearsafe::find_traces(in_dir)) {
        runs.push_back(wearsafe::summarize_trace_file(p));
      }
      const auto rows = wearsafe::aggregate(runs);
      std::cout << (format == "csv" ? wearsafe::report_csv(rows) : wearsafe::report_text(rows));
    }
  } catch (const wearsafe::ScenarioError & e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const wearsafe::ReportError & e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception & e) {
    std::cerr << "runtime fault: " << e.what() << '\n';
    return kExitFault;
  }
  return kExitOk;
}
