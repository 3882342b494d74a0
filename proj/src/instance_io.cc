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

#include "coflow/instance_io.h"

#include <fstream>

#include <fmt/format.h>

namespace coflow {

nlohmann::json instance_to_json(const CoflowInstance& instance) {
  nlohmann::json coflows = nlohmann::json::array();
  for (const Coflow& c : instance.coflows()) {
    nlohmann::json flows = nlohmann::json::array();
    for (const auto& [pair, size] : c.demands()) {
      flows.push_back({{"src", pair.src}, {"dst", pair.dst}, {"size", size}});
    }
    coflows.push_back(
        {{"release", c.release()}, {"weight", c.weight()}, {"flows", flows}});
  }
  return {{"n_ports", instance.n_ports()},
          {"capacity", instance.capacity()},
          {"coflows", coflows}};
}

CoflowInstance instance_from_json(const nlohmann::json& j) {
  try {
    const int n_ports = j.at("n_ports").get<int>();
    const double capacity = j.value("capacity", 1.0);
    std::vector<Coflow> coflows;
    for (const auto& c : j.at("coflows")) {
      DemandMap demands;
      for (const auto& f : c.at("flows")) {
        PortPair pair{f.at("src").get<int>(), f.at("dst").get<int>()};
        if (demands.contains(pair)) {
          throw StructuralError(fmt::format("duplicate flow ({},{})", pair.src,
                                            pair.dst));
        }
        demands.emplace(pair, f.at("size").get<double>());
      }
      coflows.emplace_back(std::move(demands), c.value("release", 0.0),
                           c.value("weight", 1.0));
    }
    return CoflowInstance(n_ports, std::move(coflows), capacity);
  } catch (const nlohmann::json::exception& e) {
    throw StructuralError(fmt::format("bad instance JSON: {}", e.what()));
  }
}

CoflowInstance load_instance(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(fmt::format("cannot open {}", path.string()));
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw StructuralError(
        fmt::format("{}: not valid JSON: {}", path.string(), e.what()));
  }
  return instance_from_json(j);
}

void save_instance(const CoflowInstance& instance,
                   const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError(fmt::format("cannot write {}", path.string()));
  out << instance_to_json(instance).dump(2) << '\n';
}

}  // namespace coflow
