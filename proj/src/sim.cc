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

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include <fmt/format.h>

namespace coflow {

std::string to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::kCapacitySrc:
      return "capacity_src";
    case ViolationKind::kCapacityDst:
      return "capacity_dst";
    case ViolationKind::kRelease:
      return "release";
    case ViolationKind::kDemand:
      return "demand";
    case ViolationKind::kCompletionDef:
      return "completion_def";
  }
  return "unknown";
}

nlohmann::json ValidationReport::to_json() const {
  nlohmann::json v = nlohmann::json::array();
  for (const ScheduleViolation& x : violations) {
    v.push_back({{"kind", to_string(x.kind)},
                 {"location", x.location},
                 {"magnitude", x.magnitude}});
  }
  return {{"ok", ok}, {"violations", v}};
}

ValidationReport validate(const Schedule& schedule,
                          const CoflowInstance& instance) {
  const int n = instance.n_ports();
  const double cap = instance.capacity();
  const std::size_t k_count = instance.num_coflows();
  if (schedule.coflow_completions.size() != k_count) {
    throw StructuralError(fmt::format("schedule has {} coflow completions, instance has {} coflows",
                                      schedule.coflow_completions.size(), k_count));
  }
  ValidationReport report;
  auto add = [&](ViolationKind kind, std::string where, double magnitude) {
    report.violations.push_back({kind, std::move(where), magnitude});
  };

  std::map<FlowKey, double> transmitted_by_completion;
  std::map<FlowKey, double> transmitted_total;
  std::vector<double> src_sum(n), dst_sum(n);
  double prev_end = -std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < schedule.segments.size(); ++s) {
    const Segment& seg = schedule.segments[s];
    if (!(seg.end >= seg.start) || !std::isfinite(seg.start) || !std::isfinite(seg.end)) {
      throw StructuralError(fmt::format("segment {} has negative length", s));
    }
    if (seg.start < prev_end - 1e-12) {
      throw StructuralError(fmt::format("segment {} overlaps its predecessor", s));
    }
    prev_end = seg.end;
    std::fill(src_sum.begin(), src_sum.end(), 0.0);
    std::fill(dst_sum.begin(), dst_sum.end(), 0.0);
    for (const FlowRate& fr : seg.rates) {
      const FlowKey& f = fr.flow;
      if (f.coflow < 0 || static_cast<std::size_t>(f.coflow) >= k_count ||
          instance.coflow(f.coflow).demand(f.src, f.dst) == 0) {
        throw StructuralError(
            fmt::format("segment {} carries unknown flow {}", s, to_string(f)));
      }
      if (!(fr.rate >= 0) || !std::isfinite(fr.rate)) {
        throw StructuralError(fmt::format("segment {} has a negative rate", s));
      }
      if (fr.rate == 0) continue;
      src_sum[f.src] += fr.rate;
      dst_sum[f.dst] += fr.rate;
      const double release = instance.coflow(f.coflow).release();
      if (seg.start < release - kEventEpsilon) {
        add(ViolationKind::kRelease,
            fmt::format("flow {} in segment {} [{}, {})", to_string(f), s, seg.start, seg.end),
            release - seg.start);
      }
      const double len = seg.end - seg.start;
      transmitted_total[f] += fr.rate * len;
      auto done = schedule.flow_completions.find(f);
      if (done != schedule.flow_completions.end()) {
        const double clipped = std::clamp(done->second, seg.start, seg.end) - seg.start;
        transmitted_by_completion[f] += fr.rate * clipped;
      }
    }
    for (int p = 0; p < n; ++p) {
      if (src_sum[p] > cap + kCapacityTolerance) {
        add(ViolationKind::kCapacitySrc, fmt::format("segment {} input {}", s, p),
            src_sum[p] - cap);
      }
      if (dst_sum[p] > cap + kCapacityTolerance) {
        add(ViolationKind::kCapacityDst, fmt::format("segment {} output {}", s, p),
            dst_sum[p] - cap);
      }
    }
  }

  for (const auto& [f, t] : schedule.flow_completions) {
    if (f.coflow < 0 || static_cast<std::size_t>(f.coflow) >= k_count ||
        instance.coflow(f.coflow).demand(f.src, f.dst) == 0) {
      throw StructuralError(fmt::format("completion recorded for unknown flow {}", to_string(f)));
    }
  }
  for (std::size_t k = 0; k < k_count; ++k) {
    double latest = 0;
    bool complete = true;
    for (const auto& [pair, size] : instance.coflow(k).demands()) {
      const FlowKey f{static_cast<int>(k), pair.src, pair.dst};
      auto done = schedule.flow_completions.find(f);
      if (done == schedule.flow_completions.end()) {
        add(ViolationKind::kDemand, fmt::format("flow {} has no completion", to_string(f)), size);
        complete = false;
        continue;
      }
      latest = std::max(latest, done->second);
      const double by_completion = transmitted_by_completion[f];
      const double total = transmitted_total[f];
      if (std::abs(by_completion - size) > kDemandTolerance) {
        add(ViolationKind::kDemand,
            fmt::format("flow {} sent {} of {} by {}", to_string(f), by_completion, size,
                        done->second),
            std::abs(by_completion - size));
      } else if (total - by_completion > kDemandTolerance) {
        add(ViolationKind::kDemand,
            fmt::format("flow {} keeps sending after completion", to_string(f)),
            total - by_completion);
      }
    }
    if (complete && std::abs(schedule.coflow_completions[k] - latest) > kEventEpsilon) {
      add(ViolationKind::kCompletionDef,
          fmt::format("coflow {} completion {} vs last flow {}", k,
                      schedule.coflow_completions[k], latest),
          std::abs(schedule.coflow_completions[k] - latest));
    }
  }
  report.ok = report.violations.empty();
  return report;
}

double total_weighted_completion(const Schedule& schedule,
                                 const CoflowInstance& instance) {
  if (schedule.coflow_completions.size() != instance.num_coflows()) {
    throw ArgumentError("schedule and instance disagree on the number of coflows");
  }
  double total = 0;
  for (std::size_t k = 0; k < instance.num_coflows(); ++k) {
    total += instance.coflow(k).weight() * schedule.coflow_completions[k];
  }
  return total;
}

std::optional<double> next_event(double now, std::span<const ActiveFlow> active,
                                 std::optional<double> next_release) {
  std::optional<double> best = next_release;
  for (const ActiveFlow& f : active) {
    if (f.rate <= 0 || f.remaining <= 0) continue;
    const double t = now + f.remaining / f.rate;
    if (!best || t < *best) best = t;
  }
  return best;
}

FluidExecutor::FluidExecutor(const CoflowInstance& instance)
    : instance_(instance),
      flows_of_(instance.num_coflows()),
      open_flows_(instance.num_coflows(), 0),
      coflow_completion_(instance.num_coflows(), 0.0) {
  for (const FlowKey& f : instance.flows()) {
    const std::size_t idx = keys_.size();
    keys_.push_back(f);
    const double d = instance.coflow(f.coflow).demand(f.src, f.dst);
    demand_.push_back(d);
    remaining_.push_back(d);
    completion_.push_back(0.0);
    flows_of_[f.coflow].push_back(idx);
    ++open_flows_[f.coflow];
  }
  for (int open : open_flows_) open_coflows_ += open > 0 ? 1 : 0;
}

bool FluidExecutor::released(int k) const {
  return instance_.coflow(k).release() <= now_ + kEventEpsilon;
}

std::span<const std::size_t> FluidExecutor::flows_of(int k) const {
  return flows_of_[k];
}

std::vector<std::size_t> FluidExecutor::active_flows() const {
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < flows_of_.size(); ++k) {
    if (open_flows_[k] == 0 || !released(static_cast<int>(k))) continue;
    for (std::size_t f : flows_of_[k]) {
      if (remaining_[f] > 0) out.push_back(f);
    }
  }
  return out;
}

std::optional<double> FluidExecutor::next_release() const {
  std::optional<double> best;
  for (const Coflow& c : instance_.coflows()) {
    if (c.release() > now_ + kEventEpsilon && (!best || c.release() < *best)) {
      best = c.release();
    }
  }
  return best;
}

std::optional<double> FluidExecutor::next_event(std::span<const double> rates) const {
  std::vector<ActiveFlow> active;
  for (std::size_t f = 0; f < keys_.size(); ++f) {
    if (rates[f] > 0 && remaining_[f] > 0) active.push_back({remaining_[f], rates[f]});
  }
  return coflow::next_event(now_, active, next_release());
}

void FluidExecutor::advance(std::span<const double> rates, double until) {
  if (rates.size() != keys_.size()) {
    throw ArgumentError("rate vector does not match the flow count");
  }
  if (until < now_) throw ArgumentError("cannot advance backwards in time");
  const double dt = until - now_;
  Segment seg{now_, until, {}};
  for (std::size_t f = 0; f < keys_.size(); ++f) {
    const double rate = rates[f];
    if (rate <= 0) continue;
    if (remaining_[f] == 0 || !released(keys_[f].coflow)) {
      throw InternalError(fmt::format("rate assigned to inactive flow {}", to_string(keys_[f])));
    }
    seg.rates.push_back({keys_[f], rate});
    remaining_[f] -= rate * dt;
    if (remaining_[f] <= rate * kEventEpsilon + 1e-12 * std::max(1.0, demand_[f])) {
      remaining_[f] = 0;
      completion_[f] = until;
      const int k = keys_[f].coflow;
      if (--open_flows_[k] == 0) {
        coflow_completion_[k] = until;
        --open_coflows_;
      }
    }
  }
  if (dt > 0 && !seg.rates.empty()) segments_.push_back(std::move(seg));
  now_ = until;
}

void FluidExecutor::idle_until(double t) {
  if (t < now_) throw ArgumentError("cannot idle backwards in time");
  now_ = t;
}

Schedule FluidExecutor::finish() const {
  if (!done()) throw InternalError("schedule finished with pending flows");
  Schedule out;
  for (const Segment& s : segments_) {
    if (!out.segments.empty()) {
      Segment& last = out.segments.back();
      const bool same = last.end == s.start && last.rates.size() == s.rates.size() &&
                        std::equal(last.rates.begin(), last.rates.end(), s.rates.begin(),
                                   [](const FlowRate& a, const FlowRate& b) {
                                     return a.flow == b.flow && a.rate == b.rate;
                                   });
      if (same) {
        last.end = s.end;
        continue;
      }
    }
    out.segments.push_back(s);
  }
  out.coflow_completions = coflow_completion_;
  for (std::size_t f = 0; f < keys_.size(); ++f) out.flow_completions[keys_[f]] = completion_[f];
  return out;
}

}  // namespace coflow
