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

#include "coflow/sim.h"

#include <vector>

#include "coflow/errors.h"
#include "coflow/verify.h"
#include "gtest/gtest.h"

namespace coflow {
namespace {

FlowKey key(int k, int s, int d) { return {k, s, d}; }

TEST(NextEvent, FlowCompletionBeforeArrival) {
  const std::vector<ActiveFlow> active = {{2.0, 1.0}};
  EXPECT_DOUBLE_EQ(*next_event(0.0, active, 5.0), 2.0);
  EXPECT_DOUBLE_EQ(*next_event(3.0, active, 9.0), 5.0);
}

TEST(NextEvent, ArrivalOnly) {
  EXPECT_DOUBLE_EQ(*next_event(0.0, {}, 7.0), 7.0);
}

TEST(NextEvent, EndOfSimulation) {
  EXPECT_FALSE(next_event(4.0, {}, std::nullopt).has_value());
  const std::vector<ActiveFlow> idle = {{3.0, 0.0}};
  EXPECT_FALSE(next_event(4.0, idle, std::nullopt).has_value());
}

TEST(FluidExecutor, NearSimultaneousEventsCoalesce) {
  // Coflow 1 arrives at 1 while coflow 0 needs 1 + 1e-12 to drain.
  const CoflowInstance inst(2, {Coflow({{{0, 0}, 1.0 + 1e-12}}), Coflow({{{1, 1}, 1.0}}, 1.0)});
  FluidExecutor exec(inst);
  std::vector<double> rates(exec.num_flows(), 0.0);
  rates[0] = 1.0;
  const double t = *exec.next_event(rates);
  EXPECT_DOUBLE_EQ(t, 1.0);
  exec.advance(rates, t);
  EXPECT_TRUE(exec.coflow_done(0));
  EXPECT_TRUE(exec.released(1));
  EXPECT_EQ(exec.active_flows(), std::vector<std::size_t>{1});
  rates = {0.0, 1.0};
  exec.advance(rates, *exec.next_event(rates));
  const Schedule s = exec.finish();
  EXPECT_EQ(s.segments.size(), 2u);
  EXPECT_DOUBLE_EQ(s.coflow_completions[0], 1.0);
  EXPECT_DOUBLE_EQ(s.coflow_completions[1], 2.0);
  EXPECT_TRUE(validate(s, inst).ok);
}

TEST(FluidExecutor, RejectsRateOnUnreleasedFlow) {
  const CoflowInstance inst(1, {Coflow({{{0, 0}, 1.0}}, 2.0)});
  FluidExecutor exec(inst);
  const std::vector<double> rates = {1.0};
  EXPECT_THROW(exec.advance(rates, 1.0), InternalError);
  EXPECT_EQ(*exec.next_release(), 2.0);
  exec.idle_until(2.0);
  EXPECT_DOUBLE_EQ(*exec.next_event(rates), 3.0);
  exec.advance(rates, 3.0);
  EXPECT_TRUE(exec.done());
}

TEST(FluidExecutor, MergesIdenticalAdjacentSegments) {
  const CoflowInstance inst(2, {Coflow({{{0, 0}, 3.0}}), Coflow({{{1, 1}, 1.0}}, 1.0)});
  FluidExecutor exec(inst);
  exec.advance(std::vector<double>{1.0, 0.0}, 1.0);
  exec.advance(std::vector<double>{1.0, 0.0}, 2.0);
  exec.advance(std::vector<double>{1.0, 1.0}, 3.0);
  const Schedule s = exec.finish();
  ASSERT_EQ(s.segments.size(), 2u);
  EXPECT_DOUBLE_EQ(s.segments[0].end, 2.0);
}

Schedule single_segment(std::vector<FlowRate> rates, double start, double end,
                        std::vector<double> completions,
                        std::map<FlowKey, double> flow_completions) {
  Schedule s;
  s.segments.push_back({start, end, std::move(rates)});
  s.coflow_completions = std::move(completions);
  s.flow_completions = std::move(flow_completions);
  return s;
}

TEST(Validate, EarlyTransmissionIsAReleaseViolation) {
  const CoflowInstance inst = staggered_release_fixture();
  Schedule s;
  s.segments.push_back({0, 1, {{key(0, 0, 0), 1.0}, {key(3, 1, 1), 1.0}}});
  s.segments.push_back({1, 3, {{key(1, 0, 1), 1.0}, {key(2, 1, 0), 1.0}}});
  s.segments.push_back({3, 4, {{key(3, 1, 1), 1.0}}});
  s.coflow_completions = {1, 3, 3, 4};
  s.flow_completions = {{key(0, 0, 0), 1}, {key(1, 0, 1), 3}, {key(2, 1, 0), 3},
                        {key(3, 1, 1), 4}};
  const ValidationReport r = validate(s, inst);
  ASSERT_FALSE(r.ok);
  ASSERT_EQ(r.violations.size(), 1u);
  EXPECT_EQ(r.violations[0].kind, ViolationKind::kRelease);
  EXPECT_DOUBLE_EQ(r.violations[0].magnitude, 1.0);
}

TEST(Validate, SharedInputOverCapacity) {
  const CoflowInstance inst(2, {Coflow({{{0, 0}, 1.0}, {{0, 1}, 1.0}})});
  const Schedule s = single_segment({{key(0, 0, 0), 1.0}, {key(0, 0, 1), 1.0}}, 0, 1, {1},
                                    {{key(0, 0, 0), 1}, {key(0, 0, 1), 1}});
  const ValidationReport r = validate(s, inst);
  ASSERT_EQ(r.violations.size(), 1u);
  EXPECT_EQ(r.violations[0].kind, ViolationKind::kCapacitySrc);
  EXPECT_DOUBLE_EQ(r.violations[0].magnitude, 1.0);
  EXPECT_EQ(r.to_json()["violations"][0]["kind"], "capacity_src");
}

TEST(Validate, SharedOutputOverCapacity) {
  const CoflowInstance inst(2, {Coflow({{{0, 1}, 1.0}, {{1, 1}, 1.0}})});
  const Schedule s = single_segment({{key(0, 0, 1), 1.0}, {key(0, 1, 1), 0.5}}, 0, 1, {1},
                                    {{key(0, 0, 1), 1}, {key(0, 1, 1), 1}});
  const ValidationReport r = validate(s, inst);
  ASSERT_FALSE(r.ok);
  EXPECT_EQ(r.violations[0].kind, ViolationKind::kCapacityDst);
  EXPECT_DOUBLE_EQ(r.violations[0].magnitude, 0.5);
}

TEST(Validate, DemandShortfallAndCompletionMismatch) {
  const CoflowInstance inst(1, {Coflow({{{0, 0}, 2.0}})});
  const Schedule short_run = single_segment({{key(0, 0, 0), 1.0}}, 0, 1, {1}, {{key(0, 0, 0), 1}});
  const ValidationReport a = validate(short_run, inst);
  ASSERT_FALSE(a.ok);
  EXPECT_EQ(a.violations[0].kind, ViolationKind::kDemand);
  EXPECT_DOUBLE_EQ(a.violations[0].magnitude, 1.0);

  const Schedule wrong_completion =
      single_segment({{key(0, 0, 0), 1.0}}, 0, 2, {3}, {{key(0, 0, 0), 2}});
  const ValidationReport b = validate(wrong_completion, inst);
  ASSERT_FALSE(b.ok);
  EXPECT_EQ(b.violations[0].kind, ViolationKind::kCompletionDef);

  const Schedule late_traffic = single_segment({{key(0, 0, 0), 1.0}}, 0, 3, {2}, {{key(0, 0, 0), 2}});
  const ValidationReport c = validate(late_traffic, inst);
  ASSERT_FALSE(c.ok);
  EXPECT_EQ(c.violations[0].kind, ViolationKind::kDemand);
}

TEST(Validate, MalformedSegmentsAreStructural) {
  const CoflowInstance inst(1, {Coflow({{{0, 0}, 2.0}})});
  Schedule backwards = single_segment({{key(0, 0, 0), 1.0}}, 2, 0, {2}, {{key(0, 0, 0), 2}});
  EXPECT_THROW(validate(backwards, inst), StructuralError);
  Schedule overlap;
  overlap.segments = {{0, 1.5, {{key(0, 0, 0), 1.0}}}, {1, 2, {{key(0, 0, 0), 1.0}}}};
  overlap.coflow_completions = {2};
  overlap.flow_completions = {{key(0, 0, 0), 2}};
  EXPECT_THROW(validate(overlap, inst), StructuralError);
  Schedule stranger = single_segment({{key(0, 0, 1), 1.0}}, 0, 2, {2}, {{key(0, 0, 0), 2}});
  EXPECT_THROW(validate(stranger, inst), StructuralError);
}

TEST(TotalWeightedCompletion, WeightsTimesCompletions) {
  const CoflowInstance inst(2, {Coflow({{{0, 0}, 3.0}}, 0.0, 2.0)});
  const Schedule s = single_segment({{key(0, 0, 0), 1.0}}, 0, 3, {3}, {{key(0, 0, 0), 3}});
  EXPECT_TRUE(validate(s, inst).ok);
  EXPECT_DOUBLE_EQ(total_weighted_completion(s, inst), 6.0);
}

}  // namespace
}  // namespace coflow
