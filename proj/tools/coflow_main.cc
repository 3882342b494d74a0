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

// coflow: generate workloads, run schedulers, and check schedules.
//
// Exit status: 0 on success, 1 when a schedule or bound check fails,
// 2 on bad input (flags, files, instances outside the oracle's limits).

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "coflow/errors.h"
#include "coflow/experiment.h"
#include "coflow/instance_io.h"
#include "coflow/relaxations.h"
#include "coflow/schedule.h"
#include "coflow/sim.h"
#include "coflow/verify.h"
#include "coflow/workload.h"

namespace {

using namespace coflow;

constexpr int kOk = 0;
constexpr int kViolation = 1;
constexpr int kBadInput = 2;

struct WorkloadFlags {
  std::string workload = "dense";
  std::string trace;
  int filter_min_flows = 1;
  bool zero_release = false;
  int ports = 8;
  int coflows = 40;
  std::uint64_t seed = 0;
  std::string weights = "unit";
};

void add_workload_flags(CLI::App* cmd, WorkloadFlags& f) {
  cmd->add_option("--workload", f.workload, "Synthetic workload kind")
      ->check(CLI::IsMember({"dense", "combined"}));
  cmd->add_option("--trace", f.trace, "Shuffle trace CSV instead of a synthetic workload");
  cmd->add_option("--filter-min-flows", f.filter_min_flows,
                  "Drop trace coflows with fewer flows");
  cmd->add_flag("--zero-release", f.zero_release, "Release every coflow at time 0");
  cmd->add_option("--ports", f.ports, "Switch size N");
  cmd->add_option("--coflows", f.coflows, "Coflows per instance");
  cmd->add_option("--seed", f.seed, "Random seed");
  cmd->add_option("--weights", f.weights, "Coflow weights")
      ->check(CLI::IsMember({"unit", "random"}));
}

ExperimentConfig experiment_config(const WorkloadFlags& f) {
  ExperimentConfig c;
  c.synthetic.kind = f.workload == "combined" ? WorkloadKind::kCombined : WorkloadKind::kDense;
  c.synthetic.n_ports = f.ports;
  c.synthetic.n_coflows = f.coflows;
  if (!f.trace.empty()) c.trace = TraceWorkload{f.trace, f.filter_min_flows};
  c.zero_release = f.zero_release;
  c.seed = f.seed;
  c.weights = f.weights == "random" ? WeightMode::kUniformRandom : WeightMode::kUnit;
  return c;
}

std::optional<CoflowInstance> named_fixture(const std::string& name) {
  static const std::map<std::string, CoflowInstance (*)()> fixtures = {
      {"diagonal-unit", diagonal_unit_fixture},
      {"diagonal-uneven", diagonal_uneven_fixture},
      {"staggered-release", staggered_release_fixture},
      {"counterexample", counterexample_fixture},
  };
  const auto it = fixtures.find(name);
  if (it == fixtures.end()) return std::nullopt;
  return it->second();
}

// Writes to `path`, or stdout when it is empty.
void emit(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out || !(out << text)) throw IoError(fmt::format("cannot write {}", path));
}

int cmd_gen(const WorkloadFlags& f, const std::string& fixture, const std::string& out) {
  if (!fixture.empty()) {
    const auto inst = named_fixture(fixture);
    if (!inst) throw ArgumentError(fmt::format("unknown fixture '{}'", fixture));
    emit(out, instance_to_json(*inst).dump(2) + "\n");
    return kOk;
  }
  ExperimentConfig c = experiment_config(f);
  c.repetitions = 1;
  c.validate();
  emit(out, instance_to_json(experiment_instance(c, 0)).dump(2) + "\n");
  return kOk;
}

int cmd_run(ExperimentConfig c, const std::string& out, const std::string& format) {
  const ReportFormat fmt_kind = parse_report_format(format);
  const std::vector<ScheduleReport> reports = run(c);
  if (out.empty()) {
    if (fmt_kind == ReportFormat::kCsv) {
      write_csv(reports, std::cout);
    } else {
      std::cout << reports_to_json(reports).dump(2) << '\n';
    }
  } else {
    report_emit(reports, fmt_kind, out);
  }
  std::cerr << fmt::format("{:<16} {:>5} {:>14} {:>10} {:>12}\n", "scheduler", "valid",
                           "mean total", "vs bound", "vs lp-ov-ls");
  for (const SchedulerSummary& s : summarize(reports)) {
    std::cerr << fmt::format("{:<16} {:>2}/{:<2} {:>14.6g} {:>10.4f} {:>12.4f}\n", s.scheduler,
                             s.valid, s.runs, s.mean_total, s.mean_ratio_to_lb,
                             s.mean_ratio_to_lpovls);
  }
  const std::vector<std::string> failures = invariant_failures(reports);
  for (const std::string& f : failures) std::cerr << "error: " << f << '\n';
  return failures.empty() ? kOk : kViolation;
}

int cmd_oracle(const std::string& instance_path, const std::string& out) {
  const CoflowInstance inst = load_instance(instance_path);
  const OracleResult r = oracle_opt(inst);
  std::cout << fmt::format("{}\n", r.optimal_value);
  if (!out.empty()) save_schedule(r.optimal_schedule, out);
  return kOk;
}

int cmd_validate(const std::string& instance_path, const std::string& schedule_path) {
  const CoflowInstance inst = load_instance(instance_path);
  const Schedule s = load_schedule(schedule_path);
  const ValidationReport r = validate(s, inst);
  nlohmann::json j = r.to_json();
  if (r.ok) j["total_weighted_completion"] = total_weighted_completion(s, inst);
  std::cout << j.dump(2) << '\n';
  return r.ok ? kOk : kViolation;
}

int cmd_lp_bound(const std::string& instance_path) {
  std::cout << fmt::format("{}\n", lp_lower_bound(load_instance(instance_path)));
  return kOk;
}

int cmd_schedule(const std::string& instance_path, const std::string& scheduler,
                 const std::string& out) {
  const CoflowInstance inst = load_instance(instance_path);
  const Schedule s = run_scheduler(parse_scheduler(scheduler), inst);
  emit(out, schedule_to_json(s).dump(2) + "\n");
  const ValidationReport r = validate(s, inst);
  for (const ScheduleViolation& v : r.violations) {
    std::cerr << fmt::format("violation: {} at {} by {}\n", to_string(v.kind), v.location,
                             v.magnitude);
  }
  return r.ok ? kOk : kViolation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coflow scheduling on a non-blocking switch"};
  app.require_subcommand(1);

  WorkloadFlags workload;
  std::string out;
  std::string fixture;
  CLI::App* gen = app.add_subcommand("gen", "Write an instance as JSON");
  add_workload_flags(gen, workload);
  gen->add_option("--fixture", fixture, "Emit a worked-example instance instead")
      ->check(CLI::IsMember({"diagonal-unit", "diagonal-uneven", "staggered-release", "counterexample"}));
  gen->add_option("--out", out, "Output path (default stdout)");

  std::string schedulers;
  int reps = 20;
  int workers = 1;
  std::string format = "csv";
  bool paper_scale = false;
  CLI::App* run_cmd = app.add_subcommand("run", "Run schedulers over repeated instances");
  add_workload_flags(run_cmd, workload);
  run_cmd->add_option("--schedulers", schedulers,
                      "Comma-separated subset of lp-ov-ls,lp-ov-ls-online,varys,lp-ii-gb,lp-ov-gb");
  run_cmd->add_option("--reps", reps, "Instances to generate");
  run_cmd->add_option("--workers", workers, "Instances solved concurrently");
  run_cmd->add_option("--out", out, "Report path (default stdout)");
  run_cmd->add_option("--format", format, "Report format")->check(CLI::IsMember({"csv", "json"}));
  run_cmd->add_flag("--paper-scale", paper_scale,
                    "Default to 16 ports, 160 coflows, 100 repetitions (slow)");

  std::string instance_path;
  std::string schedule_path;
  CLI::App* oracle = app.add_subcommand("oracle", "Exact optimum of a tiny instance");
  oracle->add_option("instance", instance_path, "Instance JSON")->required();
  oracle->add_option("--out", out, "Write the optimal schedule here");

  CLI::App* check = app.add_subcommand("validate", "Check a schedule against an instance");
  check->add_option("instance", instance_path, "Instance JSON")->required();
  check->add_option("schedule", schedule_path, "Schedule JSON")->required();

  CLI::App* bound = app.add_subcommand("lp-bound", "Print the ordering LP lower bound");
  bound->add_option("instance", instance_path, "Instance JSON")->required();

  std::string scheduler = "lp-ov-ls";
  CLI::App* schedule = app.add_subcommand("schedule", "Run one scheduler and write its schedule");
  schedule->add_option("instance", instance_path, "Instance JSON")->required();
  schedule->add_option("--scheduler", scheduler, "Scheduler name");
  schedule->add_option("--out", out, "Output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kBadInput;
  }

  try {
    if (*gen) return cmd_gen(workload, fixture, out);
    if (*run_cmd) {
      if (paper_scale) {
        if (run_cmd->count("--ports") == 0) workload.ports = 16;
        if (run_cmd->count("--coflows") == 0) workload.coflows = 160;
        if (run_cmd->count("--reps") == 0) reps = 100;
      }
      ExperimentConfig c = experiment_config(workload);
      c.repetitions = reps;
      c.workers = workers;
      if (!schedulers.empty()) {
        c.schedulers.clear();
        for (const std::string& name : CLI::detail::split(schedulers, ',')) {
          c.schedulers.push_back(parse_scheduler(CLI::detail::trim_copy(name)));
        }
      }
      return cmd_run(c, out, format);
    }
    if (*oracle) return cmd_oracle(instance_path, out);
    if (*check) return cmd_validate(instance_path, schedule_path);
    if (*bound) return cmd_lp_bound(instance_path);
    if (*schedule) return cmd_schedule(instance_path, scheduler, out);
  } catch (const InternalError& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kViolation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kBadInput;
  }
  return kOk;
}
