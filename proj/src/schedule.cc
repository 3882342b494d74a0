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

#include "coflow/schedule.h"

#include <fstream>

#include <fmt/format.h>

namespace coflow {

// Segment rates and flow completions are stored as compact arrays:
// [src, dst, coflow, value].
nlohmann::json schedule_to_json(const Schedule& schedule) {
  nlohmann::json segments = nlohmann::json::array();
  for (const Segment& s : schedule.segments) {
    nlohmann::json rates = nlohmann::json::array();
    for (const FlowRate& r : s.rates) {
      rates.push_back({r.flow.src, r.flow.dst, r.flow.coflow, r.rate});
    }
    segments.push_back({{"start", s.start}, {"end", s.end}, {"rates", rates}});
  }
  nlohmann::json flows = nlohmann::json::array();
  for (const auto& [key, t] : schedule.flow_completions) {
    flows.push_back({key.src, key.dst, key.coflow, t});
  }
  return {{"segments", segments},
          {"coflow_completions", schedule.coflow_completions},
          {"flow_completions", flows}};
}

Schedule schedule_from_json(const nlohmann::json& j) {
  try {
    Schedule out;
    for (const auto& s : j.at("segments")) {
      Segment seg{s.at("start").get<double>(), s.at("end").get<double>(), {}};
      for (const auto& r : s.at("rates")) {
        seg.rates.push_back({{r.at(2).get<int>(), r.at(0).get<int>(), r.at(1).get<int>()},
                             r.at(3).get<double>()});
      }
      out.segments.push_back(std::move(seg));
    }
    out.coflow_completions = j.at("coflow_completions").get<std::vector<double>>();
    for (const auto& f : j.at("flow_completions")) {
      out.flow_completions[{f.at(2).get<int>(), f.at(0).get<int>(), f.at(1).get<int>()}] =
          f.at(3).get<double>();
    }
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw StructuralError(fmt::format("bad schedule JSON: {}", e.what()));
  }
}

Schedule load_schedule(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(fmt::format("cannot open {}", path.string()));
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw StructuralError(fmt::format("{}: not valid JSON: {}", path.string(), e.what()));
  }
  return schedule_from_json(j);
}

void save_schedule(const Schedule& schedule, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError(fmt::format("cannot write {}", path.string()));
  out << schedule_to_json(schedule).dump() << '\n';
}

}  // namespace coflow
