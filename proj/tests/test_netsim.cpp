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

#include "wearsafe/netsim.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <string>
#include <vector>

namespace ws = wearsafe;

namespace
{

double median(std::vector<double> v)
{
  const auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
  std::nth_element(v.begin(), mid, v.end());
  return *mid;
}

}  // namespace

TEST(SelectChannel, Examples)
{
  EXPECT_EQ(ws::select_channel(2.0, 30.0), ws::ChannelKind::Bluetooth);
  EXPECT_EQ(ws::select_channel(20.0, 400.0), ws::ChannelKind::Cellular);
  EXPECT_EQ(ws::select_channel(2.0, 200.0), ws::ChannelKind::Cellular);
  EXPECT_EQ(ws::select_channel(std::nullopt, 1.0), ws::ChannelKind::Cellular);
  EXPECT_EQ(ws::select_channel(3.0, 50.0), ws::ChannelKind::Bluetooth);
  EXPECT_THROW(ws::select_channel(1.0, -1.0), std::invalid_argument);
  ws::ChannelSelectConfig forced;
  forced.cellular_only = true;
  EXPECT_EQ(ws::select_channel(0.5, 5.0, forced), ws::ChannelKind::Cellular);
}

TEST(SelectChannel, MonotoneInConflictTime)
{
  for (double d = 0.0; d <= 60.0; d += 5.0) {
    bool seen_bluetooth = false;
    for (double t = 10.0; t >= 0.0; t -= 0.05) {
      const bool bt = ws::select_channel(t, d) == ws::ChannelKind::Bluetooth;
      EXPECT_FALSE(seen_bluetooth && !bt) << "switched back at t=" << t << " d=" << d;
      seen_bluetooth = seen_bluetooth || bt;
    }
  }
}

TEST(Transmit, DegenerateDistributionIsExact)
{
  ws::Channel c{ws::ChannelKind::Bluetooth, 30.0, 0.0, 5.0, 0.0, 50.0};
  ws::RngStream rng(1);
  ws::EventQueue<int> q;
  for (int i = 0; i < 20; ++i) {
    const auto out = ws::transmit(c, 1000 * i, rng, q, [i](const auto &) { return i; });
    EXPECT_FALSE(out.dropped);
    EXPECT_EQ(out.due, 1000 * i + 30);
  }
  EXPECT_EQ(q.size(), 20u);
}

TEST(Transmit, FloorTruncatesLatency)
{
  ws::Channel c{ws::ChannelKind::Cellular, -100.0, 0.0, 20.0, 0.0, 1.0};
  ws::RngStream rng(1);
  EXPECT_EQ(ws::draw_transmission(c, 0, rng).latency_ms, 20);
}

TEST(Transmit, CertainLossAlwaysDrops)
{
  ws::Channel c = ws::default_cellular();
  c.loss_prob = 1.0;
  ws::RngStream rng(5);
  ws::EventQueue<int> q;
  for (int i = 0; i < 1000; ++i) {
    EXPECT_TRUE(ws::transmit(c, i, rng, q, [](const auto &) { return 0; }).dropped);
  }
  EXPECT_TRUE(q.empty());
}

TEST(Transmit, EmpiricalLossRateMatchesChannel)
{
  ws::RngStream rng(77);
  const auto c = ws::default_cellular();
  int dropped = 0;
  constexpr int n = 100000;
  for (int i = 0; i < n; ++i) dropped += ws::draw_transmission(c, 0, rng).dropped ? 1 : 0;
  // Binomial standard error at p=0.02 and n=1e5 is about 4.4e-4.
  EXPECT_NEAR(dropped / static_cast<double>(n), 0.02, 0.002);
}

TEST(Transmit, BluetoothMedianWellBelowCellular)
{
  ws::RngStream bt_rng(ws::derive_stream_seed(3, 0, "bt"));
  ws::RngStream cell_rng(ws::derive_stream_seed(3, 0, "cell"));
  std::vector<double> bt;
  std::vector<double> cell;
  for (int i = 0; i < 10000; ++i) {
    bt.push_back(static_cast<double>(ws::draw_transmission(ws::default_bluetooth(), 0, bt_rng).latency_ms));
    cell.push_back(static_cast<double>(ws::draw_transmission(ws::default_cellular(), 0, cell_rng).latency_ms));
  }
  EXPECT_LT(median(bt), 0.5 * median(cell));
  EXPECT_NEAR(median(bt), 30.0, 1.0);
  EXPECT_NEAR(median(cell), 150.0, 3.0);
}

TEST(Transmit, RejectsInvalidChannel)
{
  ws::Channel c = ws::default_bluetooth();
  c.latency_floor = 0.0;
  ws::RngStream rng(1);
  EXPECT_THROW(ws::draw_transmission(c, 0, rng), std::invalid_argument);
}

TEST(Channels, DefaultsAndProfiles)
{
  EXPECT_TRUE(ws::default_bluetooth().valid());
  EXPECT_TRUE(ws::default_cellular().valid());
  for (const auto & name : ws::channel_profile_names()) {
    ASSERT_TRUE(ws::channel_profile(name).has_value()) << name;
  }
  EXPECT_FALSE(ws::channel_profile("wifi").has_value());
  EXPECT_TRUE(ws::channel_profile("cellular-only")->select.cellular_only);
  EXPECT_EQ(ws::channel_profile("lossless")->bluetooth.loss_prob, 0.0);
}

TEST(EventQueue, TieBreakAndTimeOrder)
{
  ws::EventQueue<std::string> q;
  q.schedule(10, "A");
  q.schedule(10, "B");
  EXPECT_EQ(q.pop().payload, "A");
  EXPECT_EQ(q.pop().payload, "B");
  q.schedule(20, "B");
  q.schedule(10, "A");
  EXPECT_EQ(q.peek().payload, "A");
  EXPECT_EQ(q.pop().payload, "A");
  EXPECT_EQ(q.pop().payload, "B");
  EXPECT_TRUE(q.empty());
  EXPECT_THROW(q.pop(), ws::EmptyQueueError);
  EXPECT_THROW(q.peek(), ws::EmptyQueueError);
}

TEST(EventQueue, DrainIsSortedAndDeterministic)
{
  auto run = [] {
    ws::RngStream rng(123);
    ws::EventQueue<int> q;
    std::vector<std::pair<ws::SimMillis, int>> trace;
    for (int i = 0; i < 10000; ++i) {
      q.schedule(static_cast<ws::SimMillis>(rng.next_u64() % 500), i);
      // Interleave pops with scheduling, as the simulation loop does.
      if (rng.bernoulli(0.3)) {
        const auto e = q.pop();
        trace.emplace_back(e.due, e.payload);
      }
    }
    while (!q.empty()) {
      const auto e = q.pop();
      trace.emplace_back(e.due, e.payload);
    }
    return trace;
  };
  const auto a = run();
  EXPECT_EQ(a, run());
  EXPECT_EQ(a.size(), 10000u);

  // A pure drain is ordered by (due, scheduling order).
  ws::EventQueue<int> q;
  ws::RngStream rng(9);
  std::vector<std::pair<ws::SimMillis, int>> expected;
  for (int i = 0; i < 5000; ++i) {
    const auto due = static_cast<ws::SimMillis>(rng.next_u64() % 100);
    q.schedule(due, i);
    expected.emplace_back(due, i);
  }
  std::stable_sort(expected.begin(), expected.end(), [](auto & x, auto & y) { return x.first < y.first; });
  for (const auto & [due, id] : expected) {
    const auto e = q.pop();
    ASSERT_EQ(e.due, due);
    ASSERT_EQ(e.payload, id);
  }
}
