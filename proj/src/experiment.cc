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

#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <thread>

#include <fmt/format.h>

#include "coflow/errors.h"
#include "coflow/relaxations.h"
#include "coflow/schedulers.h"
#include "coflow/sim.h"
#include "coflow/verify.h"

namespace coflow {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

const std::vector<std::pair<SchedulerId, std::string_view>> kNames = {
    {SchedulerId::kLpOvLs, "lp-ov-ls"},
    {SchedulerId::kLpOvLsOnline, "lp-ov-ls-online"},
    {SchedulerId::kVarys, "varys"},
    {SchedulerId::kLpIiGb, "lp-ii-gb"},
    {SchedulerId::kLpOvGb, "lp-ov-gb"},
};

double elapsed_ms(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - since)
      .count();
}

// One slot moves one data unit per matched pair; strict only when every
// demand is a whole number of units.
SlotOptions slot_options(const CoflowInstance& instance) {
  bool integral = true;
  for (const Coflow& c : instance.coflows()) {
    for (const auto& [pair, d] : c.demands()) integral = integral && d == std::floor(d);
  }
  return {.time_unit = 1.0 / instance.capacity(), .strict_integral = integral};
}

Schedule dispatch(SchedulerId id, const CoflowInstance& instance, const OrderingLpResult& lp) {
  switch (id) {
    case SchedulerId::kLpOvLs:
      return lp_ov_ls(instance, lp.ordering);
    case SchedulerId::kLpOvLsOnline:
      return lp_ov_ls_online(instance);
    case SchedulerId::kVarys:
      return varys(instance);
    case SchedulerId::kLpIiGb:
      return lp_ii_gb(instance, lp.ordering, slot_options(instance));
    case SchedulerId::kLpOvGb:
      return lp_ov_gb(instance, lp.ordering);
  }
  throw InternalError("unknown scheduler");
}

bool shares_lp(SchedulerId id) {
  return id == SchedulerId::kLpOvLs || id == SchedulerId::kLpIiGb || id == SchedulerId::kLpOvGb;
}

std::string join(const std::vector<ScheduleViolation>& violations) {
  std::string out;
  for (std::size_t i = 0; i < violations.size() && i < 3; ++i) {
    if (i) out += "; ";
    out += fmt::format("{} at {} by {}", to_string(violations[i].kind), violations[i].location,
                       violations[i].magnitude);
  }
  if (violations.size() > 3) out += fmt::format("; {} more", violations.size() - 3);
  return out;
}

double number_or_nan(const nlohmann::json& j) {
  return j.is_null() ? kNaN : j.get<double>();
}

}  // namespace

std::string to_string(SchedulerId id) {
  for (const auto& [key, name] : kNames) {
    if (key == id) return std::string(name);
  }
  throw InternalError("unknown scheduler");
}

SchedulerId parse_scheduler(std::string_view name) {
  for (const auto& [key, text] : kNames) {
    if (text == name) return key;
  }
  throw ArgumentError(fmt::format("unknown scheduler '{}'", name));
}

std::vector<SchedulerId> all_schedulers() {
  std::vector<SchedulerId> out;
  for (const auto& [key, name] : kNames) out.push_back(key);
  return out;
}

Schedule run_scheduler(SchedulerId id, const CoflowInstance& instance) {
  return dispatch(id, instance, shares_lp(id) ? solve_ordering_lp(instance) : OrderingLpResult{});
}

void ExperimentConfig::validate() const {
  if (repetitions < 1) throw ArgumentError(fmt::format("repetitions must be >= 1, got {}", repetitions));
  if (schedulers.empty()) throw ArgumentError("no scheduler selected");
  if (workers < 1) throw ArgumentError(fmt::format("workers must be >= 1, got {}", workers));
  if (trace) {
    if (trace->min_flows < 1) {
      throw ArgumentError(fmt::format("min_flows must be >= 1, got {}", trace->min_flows));
    }
  } else {
    synthetic.validate();
  }
}

CoflowInstance experiment_instance(const ExperimentConfig& config, int rep) {
  const std::uint64_t seed = derive_seed(config.seed, static_cast<std::uint64_t>(rep));
  CoflowInstance instance = [&] {
    if (config.trace) {
      const auto records = load_trace(config.trace->path);
      return ingest_trace(records, trace_port_count(records),
                          config.zero_release ? ReleaseMode::kZeroReleases
                                              : ReleaseMode::kWithReleases,
                          config.trace->min_flows);
    }
    SyntheticConfig synthetic = config.synthetic;
    synthetic.seed = seed;
    synthetic.zero_release = synthetic.zero_release || config.zero_release;
    return generate(synthetic);
  }();
  return assign_weights(instance, config.weights, seed);
}

std::vector<ScheduleReport> run_instance(const CoflowInstance& instance,
                                         const std::string& instance_id,
                                         const std::vector<SchedulerId>& schedulers) {
  const auto lp_start = std::chrono::steady_clock::now();
  const OrderingLpResult lp = solve_ordering_lp(instance);
  const double lp_ms = elapsed_ms(lp_start);
  const double reference = total_weighted_completion(lp_ov_ls(instance, lp.ordering), instance);

  std::vector<ScheduleReport> out;
  for (SchedulerId id : schedulers) {
    ScheduleReport r;
    r.instance_id = instance_id;
    r.scheduler = to_string(id);
    r.lp_lower_bound = lp.objective;
    const auto start = std::chrono::steady_clock::now();
    try {
      const Schedule s = dispatch(id, instance, lp);
      r.wall_ms = elapsed_ms(start) + (shares_lp(id) ? lp_ms : 0.0);
      const ValidationReport v = validate(s, instance);
      r.valid = v.ok;
      if (!v.ok) r.error = join(v.violations);
      r.coflow_completions = s.coflow_completions;
      r.total_weighted_completion = total_weighted_completion(s, instance);
      r.ratio_to_lb = r.total_weighted_completion / lp.objective;
      r.ratio_to_lpovls = r.total_weighted_completion / reference;
      if (id == SchedulerId::kLpOvLs) {
        const BoundReport b = check_approximation_bound(instance, s, lp.objective);
        r.within_guarantee = b.ok;
        if (!b.ok) r.error = b.message;
      }
    } catch (const std::exception& e) {
      r.wall_ms = elapsed_ms(start);
      r.valid = false;
      r.error = e.what();
      r.total_weighted_completion = r.ratio_to_lb = r.ratio_to_lpovls = kNaN;
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<ScheduleReport> run(const ExperimentConfig& config) {
  config.validate();
  std::vector<std::vector<ScheduleReport>> per_rep(config.repetitions);
  std::vector<std::string> errors(config.repetitions);
  std::atomic<int> next{0};
  auto work = [&] {
    for (int rep; (rep = next++) < config.repetitions;) {
      try {
        per_rep[rep] = run_instance(experiment_instance(config, rep),
                                    fmt::format("rep-{:04d}", rep), config.schedulers);
      } catch (const std::exception& e) {
        errors[rep] = e.what();
      }
    }
  };
  const int workers = std::min(config.workers, config.repetitions);
  std::vector<std::jthread> pool;
  for (int i = 1; i < workers; ++i) pool.emplace_back(work);
  work();
  pool.clear();

  // Input problems (unreadable trace, empty filter) surface as exceptions;
  // the first one in repetition order wins.
  for (int rep = 0; rep < config.repetitions; ++rep) {
    if (!errors[rep].empty()) throw ArgumentError(errors[rep]);
  }
  std::vector<ScheduleReport> out;
  for (auto& rows : per_rep) {
    for (auto& r : rows) out.push_back(std::move(r));
  }
  return out;
}

std::vector<std::string> invariant_failures(const std::vector<ScheduleReport>& reports) {
  std::vector<std::string> out;
  for (const ScheduleReport& r : reports) {
    const std::string where = fmt::format("{} {}", r.instance_id, r.scheduler);
    if (!r.valid) {
      out.push_back(fmt::format("{}: invalid schedule: {}", where, r.error));
    } else if (r.ratio_to_lb < 1 - 1e-9) {
      out.push_back(fmt::format("{}: total {} below lower bound {}", where,
                                r.total_weighted_completion, r.lp_lower_bound));
    } else if (!r.within_guarantee) {
      out.push_back(fmt::format("{}: {}", where, r.error));
    }
  }
  return out;
}

ReportFormat parse_report_format(std::string_view name) {
  if (name == "csv") return ReportFormat::kCsv;
  if (name == "json") return ReportFormat::kJson;
  throw ArgumentError(fmt::format("unknown report format '{}'", name));
}

void write_csv(const std::vector<ScheduleReport>& reports, std::ostream& out) {
  out << kCsvHeader << '\n';
  for (const ScheduleReport& r : reports) {
    out << fmt::format("{},{},{},{},{},{},{:.3f},{}\n", r.instance_id, r.scheduler,
                       r.total_weighted_completion, r.lp_lower_bound, r.ratio_to_lb,
                       r.ratio_to_lpovls, r.wall_ms, r.valid ? "true" : "false");
  }
}

nlohmann::json reports_to_json(const std::vector<ScheduleReport>& reports) {
  nlohmann::json rows = nlohmann::json::array();
  for (const ScheduleReport& r : reports) {
    rows.push_back({
        {"instance_id", r.instance_id},
        {"scheduler", r.scheduler},
        {"total_weighted_completion", r.total_weighted_completion},
        {"coflow_completions", r.coflow_completions},
        {"lp_lower_bound", r.lp_lower_bound},
        {"ratio_to_lb", r.ratio_to_lb},
        {"ratio_to_lpovls", r.ratio_to_lpovls},
        {"wall_ms", r.wall_ms},
        {"valid", r.valid},
        {"within_guarantee", r.within_guarantee},
        {"error", r.error},
    });
  }
  return {{"reports", rows}};
}

std::vector<ScheduleReport> reports_from_json(const nlohmann::json& j) {
  std::vector<ScheduleReport> out;
  try {
    for (const nlohmann::json& row : j.at("reports")) {
      ScheduleReport r;
      r.instance_id = row.at("instance_id").get<std::string>();
      r.scheduler = row.at("scheduler").get<std::string>();
      r.total_weighted_completion = number_or_nan(row.at("total_weighted_completion"));
      for (const nlohmann::json& f : row.at("coflow_completions")) {
        r.coflow_completions.push_back(number_or_nan(f));
      }
      r.lp_lower_bound = number_or_nan(row.at("lp_lower_bound"));
      r.ratio_to_lb = number_or_nan(row.at("ratio_to_lb"));
      r.ratio_to_lpovls = number_or_nan(row.at("ratio_to_lpovls"));
      r.wall_ms = number_or_nan(row.at("wall_ms"));
      r.valid = row.at("valid").get<bool>();
      r.within_guarantee = row.value("within_guarantee", true);
      r.error = row.value("error", std::string());
      out.push_back(std::move(r));
    }
  } catch (const nlohmann::json::exception& e) {
    throw StructuralError(fmt::format("malformed report: {}", e.what()));
  }
  return out;
}

void report_emit(const std::vector<ScheduleReport>& reports, ReportFormat format,
                 const std::filesystem::path& path) {
  if (reports.empty()) throw ArgumentError("no reports to emit");
  std::ofstream out(path);
  if (!out) throw IoError(fmt::format("cannot write {}", path.string()));
  if (format == ReportFormat::kCsv) {
    write_csv(reports, out);
  } else {
    out << reports_to_json(reports).dump(2) << '\n';
  }
  if (!out) throw IoError(fmt::format("error writing {}", path.string()));
}

std::vector<SchedulerSummary> summarize(const std::vector<ScheduleReport>& reports) {
  std::vector<SchedulerSummary> out;
  std::map<std::string, std::size_t> slot;
  for (const ScheduleReport& r : reports) {
    auto [it, fresh] = slot.try_emplace(r.scheduler, out.size());
    if (fresh) out.push_back({.scheduler = r.scheduler});
    SchedulerSummary& s = out[it->second];
    ++s.runs;
    if (!r.valid) continue;
    ++s.valid;
    s.mean_total += r.total_weighted_completion;
    s.mean_ratio_to_lb += r.ratio_to_lb;
    s.mean_ratio_to_lpovls += r.ratio_to_lpovls;
  }
  for (SchedulerSummary& s : out) {
    const double n = s.valid > 0 ? s.valid : kNaN;
    s.mean_total /= n;
    s.mean_ratio_to_lb /= n;
    s.mean_ratio_to_lpovls /= n;
  }
  return out;
}

}  // namespace coflow
