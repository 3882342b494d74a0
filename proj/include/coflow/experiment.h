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

#ifndef COFLOW_EXPERIMENT_H_
#define COFLOW_EXPERIMENT_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "coflow/model.h"
#include "coflow/schedule.h"
#include "coflow/workload.h"
#include "json.hpp"

namespace coflow {

enum class SchedulerId { kLpOvLs, kLpOvLsOnline, kVarys, kLpIiGb, kLpOvGb };

std::string to_string(SchedulerId id);
// Accepts the names produced by to_string ("lp-ov-ls", "varys", ...).
SchedulerId parse_scheduler(std::string_view name);
std::vector<SchedulerId> all_schedulers();

struct TraceWorkload {
  std::filesystem::path path;
  int min_flows = 1;
};

struct ExperimentConfig {
  // Used unless `trace` is set. The seed is replaced per repetition.
  SyntheticConfig synthetic{.n_ports = 8, .n_coflows = 40};
  std::optional<TraceWorkload> trace;
  bool zero_release = false;
  std::vector<SchedulerId> schedulers = all_schedulers();
  int repetitions = 20;
  std::uint64_t seed = 0;
  WeightMode weights = WeightMode::kUnit;
  int workers = 1;

  void validate() const;
};

struct ScheduleReport {
  std::string instance_id;
  std::string scheduler;
  double total_weighted_completion = 0;
  std::vector<double> coflow_completions;
  double lp_lower_bound = 0;
  double ratio_to_lb = 0;
  double ratio_to_lpovls = 0;
  double wall_ms = 0;
  bool valid = false;
  bool within_guarantee = true;  // lp-ov-ls rows: total <= 4 or 5 times the bound
  std::string error;  // scheduler exception or validation summary
};

// Solves the ordering LP when the scheduler needs it.
Schedule run_scheduler(SchedulerId id, const CoflowInstance& instance);

// The instance of repetition `rep`, weights applied.
CoflowInstance experiment_instance(const ExperimentConfig& config, int rep);

// Runs `schedulers` on one instance. The ordering LP is solved once and
// shared; lp-ov-ls is always run for normalization.
std::vector<ScheduleReport> run_instance(const CoflowInstance& instance,
                                         const std::string& instance_id,
                                         const std::vector<SchedulerId>& schedulers);

std::vector<ScheduleReport> run(const ExperimentConfig& config);

// Rows that break a hard invariant: invalid schedules, totals below the LP
// bound, lp-ov-ls above its approximation guarantee.
std::vector<std::string> invariant_failures(const std::vector<ScheduleReport>& reports);

enum class ReportFormat { kCsv, kJson };

ReportFormat parse_report_format(std::string_view name);

inline constexpr std::string_view kCsvHeader =
    "instance_id,scheduler,total_weighted_completion,lp_lower_bound,ratio_to_lb,"
    "ratio_to_lpovls,wall_ms,valid";

void write_csv(const std::vector<ScheduleReport>& reports, std::ostream& out);
nlohmann::json reports_to_json(const std::vector<ScheduleReport>& reports);
std::vector<ScheduleReport> reports_from_json(const nlohmann::json& j);
// Throws ArgumentError on an empty report list, IoError when `path` cannot be written.
void report_emit(const std::vector<ScheduleReport>& reports, ReportFormat format,
                 const std::filesystem::path& path);

struct SchedulerSummary {
  std::string scheduler;
  int runs = 0;
  int valid = 0;
  double mean_total = 0;
  double mean_ratio_to_lb = 0;
  double mean_ratio_to_lpovls = 0;
};

// One entry per scheduler in first-appearance order; means over valid rows.
std::vector<SchedulerSummary> summarize(const std::vector<ScheduleReport>& reports);

}  // namespace coflow

#endif  // COFLOW_EXPERIMENT_H_
