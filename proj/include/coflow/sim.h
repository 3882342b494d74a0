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

// Schedule execution and certification.
//
// FluidExecutor advances piecewise-constant flow rates from event to event
// and records the resulting Schedule; every scheduler is built on it.
// validate() is independent of the executor: it re-derives feasibility from
// a Schedule and the instance alone.

#ifndef COFLOW_SIM_H_
#define COFLOW_SIM_H_

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "coflow/model.h"
#include "coflow/schedule.h"
#include "json.hpp"

namespace coflow {

// Events closer than this are coalesced into one.
inline constexpr double kEventEpsilon = 1e-9;
inline constexpr double kCapacityTolerance = 1e-9;
inline constexpr double kDemandTolerance = 1e-6;

enum class ViolationKind {
  kCapacitySrc,
  kCapacityDst,
  kRelease,
  kDemand,
  kCompletionDef,
};

std::string to_string(ViolationKind kind);

struct ScheduleViolation {
  ViolationKind kind;
  std::string location;
  double magnitude = 0;
};

struct ValidationReport {
  bool ok = true;
  std::vector<ScheduleViolation> violations;

  nlohmann::json to_json() const;
};

// Throws StructuralError for malformed schedules: overlapping or
// negative-length segments, negative rates, flows the instance lacks.
ValidationReport validate(const Schedule& schedule,
                          const CoflowInstance& instance);

double total_weighted_completion(const Schedule& schedule,
                                 const CoflowInstance& instance);

struct ActiveFlow {
  double remaining = 0;
  double rate = 0;
};

// Earliest of the active flows' completions and the next release, as an
// absolute time; nullopt when nothing is running and nothing will arrive.
std::optional<double> next_event(double now, std::span<const ActiveFlow> active,
                                 std::optional<double> next_release);

class FluidExecutor {
 public:
  explicit FluidExecutor(const CoflowInstance& instance);

  const CoflowInstance& instance() const { return instance_; }
  double now() const { return now_; }
  std::size_t num_flows() const { return keys_.size(); }
  const FlowKey& key(std::size_t f) const { return keys_[f]; }
  double demand(std::size_t f) const { return demand_[f]; }
  double remaining(std::size_t f) const { return remaining_[f]; }
  bool flow_done(std::size_t f) const { return remaining_[f] == 0; }
  bool coflow_done(int k) const { return open_flows_[k] == 0; }
  bool released(int k) const;
  bool done() const { return open_coflows_ == 0; }
  // Flow indices of coflow k in (src, dst) order.
  std::span<const std::size_t> flows_of(int k) const;

  // Released, incomplete flows in (coflow, src, dst) order.
  std::vector<std::size_t> active_flows() const;
  // Earliest release strictly after now (beyond the event epsilon).
  std::optional<double> next_release() const;
  std::optional<double> next_event(std::span<const double> rates) const;

  // Holds `rates` (indexed by flow) over [now, until). Flows drained by
  // `until`, within the event epsilon, complete at `until`.
  void advance(std::span<const double> rates, double until);
  // Moves the clock forward with every port idle.
  void idle_until(double t);

  // Requires done(). Adjacent segments with identical rates are merged.
  Schedule finish() const;

 private:
  const CoflowInstance& instance_;
  double now_ = 0;
  std::vector<FlowKey> keys_;
  std::vector<double> demand_, remaining_, completion_;
  std::vector<std::vector<std::size_t>> flows_of_;
  std::vector<int> open_flows_;
  std::vector<double> coflow_completion_;
  int open_coflows_ = 0;
  std::vector<Segment> segments_;
};

}  // namespace coflow

#endif  // COFLOW_SIM_H_
