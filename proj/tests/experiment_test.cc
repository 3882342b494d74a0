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

#include "coflow/experiment.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "coflow/errors.h"
#include "coflow/verify.h"
#include "gtest/gtest.h"

namespace coflow {
namespace {

// CSV text with the wall_ms column removed.
std::string without_timing(const std::vector<ScheduleReport>& reports) {
  std::ostringstream csv;
  write_csv(reports, csv);
  std::istringstream in(csv.str());
  std::string line, out;
  while (std::getline(in, line)) {
    const auto last = line.rfind(',');
    const auto timing = line.rfind(',', last - 1);
    out += line.substr(0, timing) + line.substr(last) + "\n";
  }
  return out;
}

ScheduleReport row(std::string scheduler, double total, double bound, bool valid = true) {
  return {.instance_id = "i",
          .scheduler = std::move(scheduler),
          .total_weighted_completion = total,
          .coflow_completions = {total},
          .lp_lower_bound = bound,
          .ratio_to_lb = total / bound,
          .ratio_to_lpovls = 1,
          .wall_ms = 1.5,
          .valid = valid};
}

TEST(SchedulerNames, RoundTrip) {
  for (SchedulerId id : all_schedulers()) EXPECT_EQ(parse_scheduler(to_string(id)), id);
  EXPECT_EQ(all_schedulers().size(), 5u);
  EXPECT_THROW(parse_scheduler("sebf"), ArgumentError);
  EXPECT_THROW(parse_report_format("xml"), ArgumentError);
}

TEST(ExperimentConfig, Validation) {
  ExperimentConfig c;
  EXPECT_NO_THROW(c.validate());
  c.repetitions = 0;
  EXPECT_THROW(c.validate(), ArgumentError);
  c = {};
  c.schedulers.clear();
  EXPECT_THROW(c.validate(), ArgumentError);
  c = {};
  c.synthetic.n_ports = 0;
  EXPECT_THROW(c.validate(), ArgumentError);
  c = {};
  c.trace = TraceWorkload{"/nonexistent.csv", 1};
  EXPECT_THROW(run(c), std::exception);
}

TEST(Run, DenseSmoke) {
  ExperimentConfig c;
  c.synthetic.n_coflows = 20;
  c.repetitions = 5;
  c.workers = 2;
  const auto reports = run(c);
  ASSERT_EQ(reports.size(), 25u);
  for (const ScheduleReport& r : reports) {
    EXPECT_TRUE(r.valid) << r.instance_id << " " << r.scheduler << ": " << r.error;
    EXPECT_GE(r.ratio_to_lb, 1 - 1e-9);
    EXPECT_EQ(r.coflow_completions.size(), 20u);
    if (r.scheduler == "lp-ov-ls") EXPECT_EQ(r.ratio_to_lpovls, 1.0);
  }
  EXPECT_TRUE(invariant_failures(reports).empty());
}

TEST(Run, SingleCoflowSameTotalEverywhere) {
  // Port loads: src 3, 3; dst 4, 2. Every scheduler finishes at r + W = 6.
  const CoflowInstance inst(2, {Coflow({{{0, 1}, 2.0}, {{1, 0}, 3.0}, {{0, 0}, 1.0}}, 2.0, 3.0)});
  for (const ScheduleReport& r : run_instance(inst, "single", all_schedulers())) {
    EXPECT_TRUE(r.valid) << r.scheduler;
    EXPECT_NEAR(r.total_weighted_completion, 18.0, 1e-9) << r.scheduler;
  }
}

TEST(Run, VarysOnUnevenDiagonal) {
  const auto reports = run_instance(diagonal_uneven_fixture(), "uneven", {SchedulerId::kVarys});
  ASSERT_EQ(reports.size(), 1u);
  EXPECT_EQ(reports[0].total_weighted_completion, 12.0);
  EXPECT_EQ(reports[0].lp_lower_bound, 11.0);
}

TEST(Run, DeterministicAcrossRunsAndWorkers) {
  ExperimentConfig c;
  c.synthetic = {.n_ports = 4, .n_coflows = 8, .kind = WorkloadKind::kCombined};
  c.repetitions = 4;
  c.seed = 77;
  c.weights = WeightMode::kUniformRandom;
  const std::string first = without_timing(run(c));
  EXPECT_EQ(first, without_timing(run(c)));
  c.workers = 3;
  EXPECT_EQ(first, without_timing(run(c)));
  c.seed = 78;
  EXPECT_NE(first, without_timing(run(c)));
}

TEST(Run, RepetitionsDiffer) {
  ExperimentConfig c;
  c.synthetic.n_coflows = 5;
  c.repetitions = 2;
  EXPECT_NE(experiment_instance(c, 0).coflows()[0].demands(),
            experiment_instance(c, 1).coflows()[0].demands());
  c.zero_release = true;
  EXPECT_TRUE(experiment_instance(c, 1).all_releases_zero());
}

TEST(Run, TraceWorkload) {
  ExperimentConfig c;
  c.trace = TraceWorkload{COFLOW_FIXTURE_DIR "/sample_trace.csv", 10};
  c.repetitions = 1;
  const auto reports = run(c);
  ASSERT_EQ(reports.size(), 5u);
  for (const ScheduleReport& r : reports) EXPECT_TRUE(r.valid) << r.scheduler << ": " << r.error;
  c.trace->min_flows = 1000;
  EXPECT_THROW(run(c), ArgumentError);
}

TEST(Report, CsvHasHeaderAndOneLinePerRow) {
  std::ostringstream out;
  write_csv({row("lp-ov-ls", 10, 8)}, out);
  EXPECT_EQ(out.str(), std::string(kCsvHeader) + "\ni,lp-ov-ls,10,8,1.25,1,1.500,true\n");
}

TEST(Report, JsonRoundTrip) {
  std::vector<ScheduleReport> reports = {row("varys", 12, 11), row("lp-ii-gb", 3.25, 3, false)};
  reports[1].total_weighted_completion = std::nan("");
  reports[1].error = "capacity_src at port 0 by 0.5";
  const auto back = reports_from_json(nlohmann::json::parse(reports_to_json(reports).dump()));
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[0].scheduler, "varys");
  EXPECT_EQ(back[0].total_weighted_completion, 12.0);
  EXPECT_EQ(back[0].coflow_completions, std::vector<double>{12.0});
  EXPECT_EQ(back[0].ratio_to_lb, 12.0 / 11.0);
  EXPECT_TRUE(back[0].valid);
  EXPECT_TRUE(std::isnan(back[1].total_weighted_completion));
  EXPECT_FALSE(back[1].valid);
  EXPECT_EQ(back[1].error, reports[1].error);
  EXPECT_THROW(reports_from_json(nlohmann::json::parse(R"({"reports":[{}]})")), StructuralError);
}

TEST(Report, EmitErrors) {
  EXPECT_THROW(report_emit({}, ReportFormat::kCsv, "x.csv"), ArgumentError);
  EXPECT_THROW(report_emit({row("varys", 1, 1)}, ReportFormat::kCsv, "/nonexistent/dir/r.csv"),
               IoError);
  const auto path = std::filesystem::temp_directory_path() / "coflow_report_test.json";
  report_emit({row("varys", 2, 1)}, ReportFormat::kJson, path);
  std::ifstream in(path);
  EXPECT_EQ(reports_from_json(nlohmann::json::parse(in))[0].total_weighted_completion, 2.0);
  std::filesystem::remove(path);
}

TEST(Report, InvariantFailures) {
  std::vector<ScheduleReport> reports = {row("varys", 10, 8), row("lp-ov-gb", 7, 8),
                                         row("lp-ii-gb", 9, 8, false), row("lp-ov-ls", 50, 8)};
  reports[3].within_guarantee = false;
  const auto failures = invariant_failures(reports);
  ASSERT_EQ(failures.size(), 3u);
  EXPECT_NE(failures[0].find("below lower bound"), std::string::npos);
  EXPECT_NE(failures[1].find("invalid"), std::string::npos);
}

TEST(Report, SummaryMeansOverValidRows) {
  const auto s = summarize({row("varys", 10, 5), row("lp-ov-ls", 4, 4), row("varys", 20, 5),
                            row("varys", 99, 5, false)});
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s[0].scheduler, "varys");
  EXPECT_EQ(s[0].runs, 3);
  EXPECT_EQ(s[0].valid, 2);
  EXPECT_DOUBLE_EQ(s[0].mean_total, 15.0);
  EXPECT_DOUBLE_EQ(s[0].mean_ratio_to_lb, 3.0);
  EXPECT_DOUBLE_EQ(s[1].mean_total, 4.0);
}

}  // namespace
}  // namespace coflow
