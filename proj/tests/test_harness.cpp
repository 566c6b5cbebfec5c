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

#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <unistd.h>

#include "wearsafe/batch.hpp"
#include "wearsafe/experiments.hpp"
#include "wearsafe/report.hpp"
#include "wearsafe/scenario.hpp"
#include "wearsafe/simulation.hpp"

namespace ws = wearsafe;
namespace ex = wearsafe::experiments;
namespace fs = std::filesystem;

namespace
{

std::string head_on_path() { return std::string(WEARSAFE_SCENARIO_DIR) + "/head_on.json"; }

fs::path scratch(const std::string & name)
{
  const auto dir = fs::temp_directory_path() / ("wearsafe_" + std::to_string(::getpid())) / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string read_file(const fs::path & p)
{
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string where_of(const std::string & text)
{
  try {
    ws::parse_scenario(text, "t.json");
  } catch (const ws::ScenarioError & e) {
    return e.where();
  }
  return "accepted";
}

ws::Scenario single_agent(double duration)
{
  ws::Scenario s;
  s.name = "solo";
  s.seed = 5;
  s.duration = duration;
  s.agents.push_back(ex::agent(1, ws::TransportMode::Pedestrian, {0, 0}, 0.0, 1.2));
  return s;
}

int run_cli(const std::string & args)
{
  const int rc = std::system((std::string(WEARSAFE_CLI) + " " + args + " >/dev/null 2>&1").c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

}  // namespace

TEST(ScenarioSchema, LoadsSampleAndRoundTrips)
{
  const auto s = ws::load_scenario(head_on_path());
  EXPECT_EQ(s.name, "head_on");
  EXPECT_EQ(s.seed, 42u);
  ASSERT_EQ(s.agents.size(), 2u);
  EXPECT_EQ(s.agents[1].id, ws::AgentId{7});
  const auto again = ws::parse_scenario(ws::to_json(s).dump());
  EXPECT_EQ(ws::to_json(again), ws::to_json(s));
}

TEST(ScenarioSchema, ReportsLocations)
{
  const std::string ok_agent = R"({"id":1,"mode":"car","initial":{"x":0,"y":0,"heading":0,"speed":1}})";
  auto doc = [&](const std::string & extra, const std::string & agents) {
    return R"({"schema_version":1,"name":"x","seed":1,"duration":5)" + extra + R"(,"agents":[)" + agents + "]}";
  };
  EXPECT_EQ(where_of(doc("", ok_agent)), "accepted");
  EXPECT_EQ(where_of(doc(R"(,"colour":1)", ok_agent)), "/colour");
  EXPECT_EQ(where_of(doc("", R"({"id":1,"mode":"tram","initial":{"x":0,"y":0,"heading":0,"speed":1}})")),
            "/agents/0/mode");
  EXPECT_EQ(where_of(doc("", ok_agent + "," + ok_agent)), "/agents/1/id");
  EXPECT_EQ(where_of(doc(R"(,"tick":0.03)", ok_agent)), "/tick");
  // Syntax errors carry line:col of the offending byte.
  EXPECT_EQ(where_of("{\n  \"name\": ,\n}"), "2:11");
}

TEST(ScenarioSchema, RejectsWrongSchemaVersion)
{
  EXPECT_THROW(ws::parse_scenario(R"({"schema_version":2,"name":"x","seed":1,"duration":1,"agents":[]})"),
               ws::ScenarioError);
}

TEST(Simulation, SingleAgentBsmCount)
{
  for (double d : {0.5, 2.0, 2.3, 7.1}) {
    const auto r = ws::run_scenario(single_agent(d));
    const auto expected = static_cast<std::int64_t>(std::ceil(d / 0.5 - 1e-9));
    EXPECT_EQ(static_cast<std::int64_t>(ws::records_of_type(r.trace, "bsm_tx").size()), expected) << d;
    EXPECT_EQ(r.metrics.bsm_sent, expected) << d;
  }
}

TEST(Simulation, ZeroDurationIsEmpty)
{
  const auto r = ws::run_scenario(single_agent(0.0));
  EXPECT_TRUE(r.trace.empty());
  for (const auto & [name, v] : ws::metric_fields(r.metrics)) EXPECT_EQ(v, 0.0) << name;
}

TEST(Simulation, NonCompliantAgentsMatchBaselineTruth)
{
  auto s = ws::load_scenario(head_on_path());
  for (auto & a : s.agents) a.compliance_prob = 0.0;
  auto off = s;
  off.toggles.advisories = false;
  const auto on_run = ws::run_scenario(s);
  const auto off_run = ws::run_scenario(off);
  ASSERT_GE(on_run.metrics.advisories_issued, 1);
  auto truth = [](const std::string & trace) {
    std::vector<std::array<double, 5>> out;
    for (const auto & a : ws::records_of_type(trace, "agent")) {
      out.push_back({a.at("t").get<double>(), a.at("x").get<double>(), a.at("y").get<double>(),
                     a.at("heading").get<double>(), a.at("speed").get<double>()});
    }
    return out;
  };
  EXPECT_EQ(truth(on_run.trace), truth(off_run.trace));
}

TEST(Simulation, DeterministicAndSeedSensitive)
{
  const auto s = ws::load_scenario(head_on_path());
  const auto a = ws::run_scenario(s);
  const auto b = ws::run_scenario(s);
  EXPECT_EQ(a.trace, b.trace);
  EXPECT_EQ(a.sha256, b.sha256);
  EXPECT_EQ(a.sha256, ws::sha256_hex(a.trace));
  auto t = s;
  t.seed = 43;
  EXPECT_NE(ws::run_scenario(t).sha256, a.sha256);
}

TEST(Simulation, HeadOnAvoidedWithAdvisories)
{
  const auto r = ws::run_scenario(ws::load_scenario(head_on_path()));
  EXPECT_EQ(r.metrics.collisions, 0);
  EXPECT_GE(r.metrics.advisories_issued, 1);
  const auto base = ws::records_of_type(r.trace, "baseline_pair");
  ASSERT_EQ(base.size(), 1u);
  EXPECT_FALSE(base[0].at("contact_ms").is_null());
}

TEST(Simulation, ParallelLanesStayQuiet)
{
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto s = ex::parallel_lanes();
    s.seed = seed;
    const auto r = ws::run_scenario(s);
    EXPECT_EQ(r.metrics.advisories_issued, 0) << seed;
    EXPECT_EQ(r.metrics.collisions, 0) << seed;
  }
}

TEST(Simulation, ChannelConservation)
{
  const auto r = ws::run_scenario(ex::with_spoofer(ex::collision_course(3), 3));
  const auto & m = r.metrics;
  EXPECT_GT(m.bt_sent + m.cell_sent, 0);
  EXPECT_EQ(m.bt_sent, m.bt_delivered + m.bt_dropped);
  EXPECT_EQ(m.cell_sent, m.cell_delivered + m.cell_dropped);
  // Independent count from the trace: every frame not dropped arrives once.
  std::int64_t kept = 0;
  for (const char * type : {"bsm_tx", "adv_tx"}) {
    for (const auto & tx : ws::records_of_type(r.trace, type)) kept += tx.at("dropped").get<bool>() ? 0 : 1;
  }
  const auto rx = ws::records_of_type(r.trace, "bsm_rx").size() + ws::records_of_type(r.trace, "adv_rx").size();
  EXPECT_EQ(kept, static_cast<std::int64_t>(rx));
}

TEST(Metrics, RecomputedFromTrace)
{
  ws::RunOptions opts;
  opts.dump_coordinator = true;
  for (const auto & s : {ws::load_scenario(head_on_path()), ex::reversal_canonical(), ex::imminent(2)}) {
    const auto r = ws::run_scenario(s, opts);
    std::istringstream in(r.trace);
    const auto again = ws::summarize_trace(in, "mem", "x");
    EXPECT_EQ(again.run, s.name);
    EXPECT_EQ(ws::summary_csv_row("x", again.metrics), ws::summary_csv_row("x", r.metrics)) << s.name;
  }
}

TEST(Metrics, FalsePositiveRate)
{
  ws::BaselineSummary base{11, {{1, 2, 25.0, 0, {}}, {3, 4, 1.0, 2, 4200}}};
  const std::vector<ws::AdvisoryIssue> issued{
    {100, 1, 2, false}, {100, 2, 1, false}, {200, 3, 4, false}, {300, 3, 4, true}};
  const auto [fp, rate] = ws::false_positive_rate(11, issued, base);
  EXPECT_EQ(fp, 2);
  EXPECT_DOUBLE_EQ(rate, 2.0 / 3.0);
  EXPECT_EQ(ws::false_positive_rate(11, {}, base).second, 0.0);
  EXPECT_THROW(ws::false_positive_rate(12, issued, base), ws::MismatchedRuns);
}

TEST(Report, AggregatesRuns)
{
  const auto dir = scratch("report");
  const auto s = ws::load_scenario(head_on_path());
  const auto r = ws::run_scenario(s);
  ws::write_run_outputs(dir / "a", s, r);
  auto rows = ws::aggregate({ws::summarize_trace_file(dir / "a" / "trace.jsonl")});
  const auto fields = ws::metric_fields(r.metrics);
  ASSERT_EQ(rows.size(), fields.size());
  for (std::size_t k = 0; k < rows.size(); ++k) {
    EXPECT_EQ(rows[k].n, 1u);
    EXPECT_EQ(rows[k].mean, fields[k].second) << rows[k].metric;
    EXPECT_EQ(rows[k].std, 0.0);
  }

  ws::write_run_outputs(dir / "b", s, r);
  std::vector<ws::TraceSummary> runs;
  for (const auto & p : ws::find_traces(dir)) runs.push_back(ws::summarize_trace_file(p));
  ASSERT_EQ(runs.size(), 2u);
  rows = ws::aggregate(runs);
  for (std::size_t k = 0; k < rows.size(); ++k) {
    EXPECT_EQ(rows[k].std, 0.0) << rows[k].metric;
    EXPECT_EQ(rows[k].min, rows[k].max);
  }
  EXPECT_EQ(ws::report_csv(rows).substr(0, 24), "metric,n,mean,std,min,ma");
  EXPECT_THROW(ws::aggregate({}), ws::ReportError);
}

TEST(Report, CorruptTraceNamesLine)
{
  std::istringstream in("{\"type\":\"end\",\"t\":0}\nnot json\n");
  try {
    ws::summarize_trace(in, "bad.jsonl", "x");
    FAIL();
  } catch (const ws::ReportError & e) {
    EXPECT_NE(std::string(e.what()).find("bad.jsonl:2:"), std::string::npos);
  }
}

TEST(Batch, RunsGlobInParallelDeterministically)
{
  const auto in = scratch("batch_in");
  for (std::uint64_t i = 0; i < 3; ++i) {
    std::ofstream(in / ("cc" + std::to_string(i) + ".json")) << ws::to_json(ex::collision_course(i)).dump();
  }
  const auto files = ws::expand_glob((in / "*.json").string());
  ASSERT_EQ(files.size(), 3u);
  const auto one = scratch("batch_1");
  const auto four = scratch("batch_4");
  ws::run_batch(files, one, 1);
  ws::run_batch(files, four, 4);
  EXPECT_EQ(read_file(one / "summary.csv"), read_file(four / "summary.csv"));
  for (const char * d : {"cc0", "cc1", "cc2"}) {
    EXPECT_EQ(read_file(one / d / "trace.jsonl"), read_file(four / d / "trace.jsonl"));
  }
  EXPECT_TRUE(ws::expand_glob((in / "*.none").string()).empty());
}

TEST(Cli, ExitCodes)
{
  const auto out = scratch("cli");
  const std::string run_dir = (out / "run").string();
  EXPECT_EQ(run_cli("run --scenario " + head_on_path() + " --seed 3 --out " + run_dir), 0);
  EXPECT_TRUE(fs::exists(out / "run" / "trace.jsonl"));
  EXPECT_EQ(run_cli("report --in " + (out / "run").string() + " --format csv"), 0);
  EXPECT_EQ(run_cli("report --in " + (out / "run").string() + " --format xml"), 2);
  EXPECT_EQ(run_cli("run --scenario /nonexistent.json --seed 1 --out " + run_dir), 2);
  EXPECT_EQ(run_cli("run --scenario " + head_on_path() + " --seed 1 --out " + run_dir + " --channel-profile x"), 2);
  EXPECT_EQ(run_cli("batch --scenarios '" + (out / "*.nothing").string() + "' --out " + run_dir), 2);
  EXPECT_EQ(run_cli("report --in " + (out / "missing").string() + " --format text"), 2);
  EXPECT_EQ(run_cli("frobnicate"), 2);

  fs::create_directories(out / "corrupt");
  std::ofstream(out / "corrupt" / "trace.jsonl") << "{\"type\":\"end\"}\nbroken\n";
  EXPECT_EQ(run_cli("report --in " + (out / "corrupt").string() + " --format text"), 2);
}
