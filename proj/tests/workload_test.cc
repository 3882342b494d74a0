// Copyright 2026 The Coflow Scheduling Authors
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

#include "coflow/workload.h"

#include <cmath>
#include <set>
#include <sstream>
#include <string>

#include "coflow/errors.h"
#include "coflow/instance_io.h"
#include "gtest/gtest.h"

namespace coflow {
namespace {

double reducer_volume(const std::vector<TraceRecord>& records) {
  double total = 0;
  for (const TraceRecord& r : records) {
    for (const auto& [rack, mb] : r.reducers) total += mb;
  }
  return total;
}

std::vector<TraceRecord> parse(const std::string& text) {
  std::istringstream in(text);
  return parse_trace(in);
}

TEST(Generate, SameSeedSameInstance) {
  SyntheticConfig c{.n_ports = 4, .n_coflows = 12, .kind = WorkloadKind::kCombined, .seed = 9};
  EXPECT_EQ(instance_to_json(generate(c)), instance_to_json(generate(c)));
  SyntheticConfig other = c;
  other.seed = 10;
  EXPECT_NE(instance_to_json(generate(c)), instance_to_json(generate(other)));
}

TEST(Generate, DenseWidthsForTwoPorts) {
  SyntheticConfig c{.n_ports = 2, .n_coflows = 300, .seed = 3};
  std::set<std::size_t> widths;
  for (const Coflow& k : generate(c).coflows()) widths.insert(k.num_flows());
  EXPECT_EQ(widths, (std::set<std::size_t>{2, 3, 4}));
}

TEST(Generate, SizesAndReleases) {
  SyntheticConfig c{.n_ports = 5, .n_coflows = 50, .kind = WorkloadKind::kCombined, .seed = 4};
  const CoflowInstance inst = generate(c);
  double prev = 0;
  for (const Coflow& k : inst.coflows()) {
    for (const auto& [pair, d] : k.demands()) {
      EXPECT_EQ(d, std::floor(d));
      EXPECT_GE(d, 1);
      EXPECT_LE(d, 100);
    }
    EXPECT_GE(k.release() - prev, 1.0);
    EXPECT_LE(k.release() - prev, 100.0);
    EXPECT_EQ(k.weight(), 1.0);
    prev = k.release();
  }
  c.zero_release = true;
  EXPECT_TRUE(generate(c).all_releases_zero());
}

TEST(Generate, SparseFractionNearHalf) {
  SyntheticConfig c{.n_ports = 6, .n_coflows = 10000, .kind = WorkloadKind::kCombined, .seed = 11};
  int sparse = 0;
  for (int k = 0; k < c.n_coflows; ++k) {
    const GeneratedCoflow g = draw_coflow(c, k);
    const auto m = static_cast<int>(g.coflow.num_flows());
    if (g.sparse) {
      ++sparse;
      EXPECT_LE(m, c.n_ports);
    } else {
      EXPECT_GE(m, c.n_ports);
    }
  }
  EXPECT_NEAR(sparse / 1e4, 0.5, 0.02);
}

TEST(Generate, DenseMeanWidth) {
  // Uniform on {N..N^2} has mean (N + N^2) / 2 and variance ((N^2 - N + 1)^2 - 1) / 12.
  SyntheticConfig c{.n_ports = 4, .n_coflows = 4000, .seed = 12};
  double sum = 0;
  for (int k = 0; k < c.n_coflows; ++k) sum += static_cast<double>(draw_coflow(c, k).coflow.num_flows());
  const double sd = std::sqrt((13.0 * 13.0 - 1) / 12.0 / c.n_coflows);
  EXPECT_NEAR(sum / c.n_coflows, 10.0, 5 * sd);
}

TEST(Generate, RejectsBadConfig) {
  EXPECT_THROW(generate({.n_ports = 0}), ArgumentError);
  EXPECT_THROW(generate({.n_coflows = 0}), ArgumentError);
  EXPECT_THROW(generate({.size_min = 5, .size_max = 4}), ArgumentError);
  EXPECT_THROW(generate({.interarrival_min = 10, .interarrival_max = 1}), ArgumentError);
}

TEST(Weights, UnitAndRandom) {
  const CoflowInstance inst = generate({.n_ports = 3, .n_coflows = 10000, .zero_release = true, .seed = 2});
  const CoflowInstance unit = assign_weights(inst, WeightMode::kUnit);
  for (const Coflow& k : unit.coflows()) EXPECT_EQ(k.weight(), 1.0);
  const CoflowInstance a = assign_weights(inst, WeightMode::kUniformRandom, 5);
  const CoflowInstance b = assign_weights(inst, WeightMode::kUniformRandom, 5);
  double sum = 0;
  for (std::size_t k = 0; k < a.num_coflows(); ++k) {
    EXPECT_GT(a.coflow(k).weight(), 0.0);
    EXPECT_LE(a.coflow(k).weight(), 1.0);
    EXPECT_EQ(a.coflow(k).weight(), b.coflow(k).weight());
    sum += a.coflow(k).weight();
  }
  EXPECT_NEAR(sum / 1e4, 0.5, 0.02);
  // Weights do not disturb shapes.
  EXPECT_EQ(a.coflow(17).demands(), inst.coflow(17).demands());
}

TEST(Trace, ParsesRecords) {
  const auto records = parse(
      "coflow_id,arrival_ms,mappers,reducers\n"
      "a,20000,0;1,2:10\n"
      "\n"
      "b,5,3,0:1.5;1:2\n");
  ASSERT_EQ(records.size(), 2u);
  EXPECT_EQ(records[0].coflow_id, "a");
  EXPECT_EQ(records[0].arrival_ms, 20000);
  EXPECT_EQ(records[0].mappers, (std::vector<int>{0, 1}));
  EXPECT_EQ(records[1].reducers.size(), 2u);
  EXPECT_DOUBLE_EQ(records[1].reducers[0].second, 1.5);
  EXPECT_EQ(trace_port_count(records), 4);
}

TEST(Trace, ParseErrorsNameTheLine) {
  const std::string header = "coflow_id,arrival_ms,mappers,reducers\n";
  EXPECT_THROW(parse(""), StructuralError);
  EXPECT_THROW(parse("id,time\n"), StructuralError);
  EXPECT_THROW(parse(header + "a,1,0\n"), StructuralError);
  EXPECT_THROW(parse(header + "a,x,0,1:1\n"), StructuralError);
  EXPECT_THROW(parse(header + "a,-1,0,1:1\n"), StructuralError);
  EXPECT_THROW(parse(header + "a,1,0,1:0\n"), StructuralError);
  EXPECT_THROW(parse(header + "a,1,0,1\n"), StructuralError);
  EXPECT_THROW(parse(header + "a,1,,1:1\n"), StructuralError);
  try {
    parse(header + "a,1,0,1:1\nb,2,0,1:q\n");
    FAIL();
  } catch (const StructuralError& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
  }
  EXPECT_THROW(load_trace("/nonexistent/trace.csv"), IoError);
}

TEST(Trace, SplitsReducerVolumeEvenly) {
  const auto records = parse("coflow_id,arrival_ms,mappers,reducers\nx,20000,0;1,2:10\n");
  const CoflowInstance inst = ingest_trace(records, 3, ReleaseMode::kWithReleases, 1);
  ASSERT_EQ(inst.num_coflows(), 1u);
  EXPECT_DOUBLE_EQ(inst.coflow(0).demand(0, 2), 5.0);
  EXPECT_DOUBLE_EQ(inst.coflow(0).demand(1, 2), 5.0);
  EXPECT_EQ(inst.coflow(0).num_flows(), 2u);
  EXPECT_DOUBLE_EQ(inst.coflow(0).release(), 2.0);
  EXPECT_DOUBLE_EQ(inst.capacity(), 128.0);
  EXPECT_DOUBLE_EQ(ingest_trace(records, 3, ReleaseMode::kZeroReleases, 1).coflow(0).release(), 0.0);
}

TEST(Trace, FilterDropsNarrowCoflows) {
  const auto records = parse(
      "coflow_id,arrival_ms,mappers,reducers\n"
      "small,0,0;1,2:4;3:4\n"
      "wide,0,0;1;2;3;4,0:5;1:5\n");
  const CoflowInstance inst = ingest_trace(records, 5, ReleaseMode::kWithReleases, 10);
  ASSERT_EQ(inst.num_coflows(), 1u);
  EXPECT_EQ(inst.coflow(0).num_flows(), 10u);
  EXPECT_THROW(ingest_trace(records, 5, ReleaseMode::kWithReleases, 11), ArgumentError);
  EXPECT_THROW(ingest_trace(records, 4, ReleaseMode::kWithReleases, 1), StructuralError);
}

TEST(Trace, BundledFixtureConservesVolume) {
  const auto records = load_trace(COFLOW_FIXTURE_DIR "/sample_trace.csv");
  const int n = trace_port_count(records);
  const CoflowInstance inst = ingest_trace(records, n, ReleaseMode::kWithReleases, 1);
  EXPECT_EQ(inst.num_coflows(), records.size());
  EXPECT_NEAR(inst.total_demand(), reducer_volume(records), 1e-9 * reducer_volume(records));
  for (std::size_t k = 0; k < records.size(); ++k) {
    EXPECT_DOUBLE_EQ(inst.coflow(k).release(), records[k].arrival_ms / 1000.0 / 10.0);
  }
  const CoflowInstance wide = ingest_trace(records, n, ReleaseMode::kZeroReleases, 10);
  EXPECT_LT(wide.num_coflows(), inst.num_coflows());
  for (const Coflow& k : wide.coflows()) EXPECT_GE(k.num_flows(), 10u);
}

}  // namespace
}  // namespace coflow
