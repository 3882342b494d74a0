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

// A schedule is a sequence of time segments with a constant rate per flow
// inside each, plus the completion time of every flow and coflow.

#ifndef COFLOW_SCHEDULE_H_
#define COFLOW_SCHEDULE_H_

#include <filesystem>
#include <map>
#include <vector>

#include "coflow/model.h"
#include "json.hpp"

namespace coflow {

struct FlowRate {
  FlowKey flow;
  double rate = 0;
};

// Rates hold over [start, end).
struct Segment {
  double start = 0;
  double end = 0;
  std::vector<FlowRate> rates;  // positive rates only
};

struct Schedule {
  std::vector<Segment> segments;
  std::vector<double> coflow_completions;    // f_k
  std::map<FlowKey, double> flow_completions;  // f_ij^k
};

nlohmann::json schedule_to_json(const Schedule& schedule);
Schedule schedule_from_json(const nlohmann::json& j);
Schedule load_schedule(const std::filesystem::path& path);
void save_schedule(const Schedule& schedule, const std::filesystem::path& path);

}  // namespace coflow

#endif  // COFLOW_SCHEDULE_H_
