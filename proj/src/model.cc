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

#include "coflow/model.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

namespace coflow {

std::string to_string(const FlowKey& flow) {
  return fmt::format("({},{},{})", flow.src, flow.dst, flow.coflow);
}

Coflow::Coflow(DemandMap demands, double release, double weight)
    : release_(release), weight_(weight) {
  if (!std::isfinite(release) || release < 0) {
    throw StructuralError(fmt::format("release must be >= 0, got {}", release));
  }
  if (!std::isfinite(weight) || weight <= 0) {
    throw StructuralError(fmt::format("weight must be > 0, got {}", weight));
  }
  for (const auto& [pair, size] : demands) {
    if (!std::isfinite(size) || size < 0) {
      throw StructuralError(fmt::format("demand ({},{}) must be >= 0, got {}",
                                        pair.src, pair.dst, size));
    }
    if (pair.src < 0 || pair.dst < 0) {
      throw StructuralError(
          fmt::format("negative port index ({},{})", pair.src, pair.dst));
    }
    if (size > 0) demands_.emplace(pair, size);
  }
  if (demands_.empty()) {
    throw StructuralError("coflow must have at least one nonzero demand");
  }
}

double Coflow::total_demand() const {
  double total = 0;
  for (const auto& [pair, size] : demands_) total += size;
  return total;
}

double Coflow::demand(int src, int dst) const {
  auto it = demands_.find({src, dst});
  return it == demands_.end() ? 0.0 : it->second;
}

CoflowInstance::CoflowInstance(int n_ports, std::vector<Coflow> coflows,
                               double capacity)
    : n_ports_(n_ports), coflows_(std::move(coflows)), capacity_(capacity) {
  if (n_ports < 1) {
    throw StructuralError(fmt::format("n_ports must be >= 1, got {}", n_ports));
  }
  if (!std::isfinite(capacity) || capacity <= 0) {
    throw StructuralError(
        fmt::format("capacity must be > 0, got {}", capacity));
  }
  for (std::size_t k = 0; k < coflows_.size(); ++k) {
    for (const auto& [pair, size] : coflows_[k].demands()) {
      if (pair.src >= n_ports || pair.dst >= n_ports) {
        throw StructuralError(
            fmt::format("coflow {} flow ({},{}) outside a {}-port switch", k,
                        pair.src, pair.dst, n_ports));
      }
    }
  }
}

double CoflowInstance::max_release() const {
  double r = 0;
  for (const Coflow& c : coflows_) r = std::max(r, c.release());
  return r;
}

bool CoflowInstance::all_releases_zero() const {
  return std::all_of(coflows_.begin(), coflows_.end(),
                     [](const Coflow& c) { return c.release() == 0; });
}

double CoflowInstance::total_demand() const {
  double total = 0;
  for (const Coflow& c : coflows_) total += c.total_demand();
  return total;
}

std::vector<FlowKey> CoflowInstance::flows() const {
  std::vector<FlowKey> out;
  for (std::size_t k = 0; k < coflows_.size(); ++k) {
    for (const auto& [pair, size] : coflows_[k].demands()) {
      out.push_back({static_cast<int>(k), pair.src, pair.dst});
    }
  }
  return out;
}

CoflowInstance CoflowInstance::with_weights(
    std::span<const double> weights) const {
  if (weights.size() != coflows_.size()) {
    throw ArgumentError(fmt::format("expected {} weights, got {}",
                                    coflows_.size(), weights.size()));
  }
  std::vector<Coflow> out;
  out.reserve(coflows_.size());
  for (std::size_t k = 0; k < coflows_.size(); ++k) {
    out.emplace_back(coflows_[k].demands(), coflows_[k].release(), weights[k]);
  }
  return CoflowInstance(n_ports_, std::move(out), capacity_);
}

double LoadVector::max_load() const {
  double w = 0;
  for (double v : source_loads) w = std::max(w, v);
  for (double v : dest_loads) w = std::max(w, v);
  return w;
}

LoadVector aggregate_loads(const Coflow& coflow, int n_ports) {
  if (n_ports < 1) throw ArgumentError("n_ports must be >= 1");
  LoadVector loads{std::vector<double>(n_ports, 0.0),
                   std::vector<double>(n_ports, 0.0)};
  for (const auto& [pair, size] : coflow.demands()) {
    if (pair.src >= n_ports || pair.dst >= n_ports) {
      throw StructuralError(fmt::format("flow ({},{}) outside a {}-port switch",
                                        pair.src, pair.dst, n_ports));
    }
    loads.source_loads[pair.src] += size;
    loads.dest_loads[pair.dst] += size;
  }
  return loads;
}

double effective_size(const Coflow& coflow, int n_ports) {
  return aggregate_loads(coflow, n_ports).max_load();
}

void require_permutation(std::span<const int> ordering, std::size_t k) {
  if (ordering.size() != k) {
    throw ArgumentError(
        fmt::format("ordering has {} entries, expected {}", ordering.size(), k));
  }
  std::vector<bool> seen(k, false);
  for (int id : ordering) {
    if (id < 0 || static_cast<std::size_t>(id) >= k || seen[id]) {
      throw ArgumentError("ordering is not a permutation of coflow ids");
    }
    seen[id] = true;
  }
}

CumulativeLoad cumulative_load(const CoflowInstance& instance,
                               std::span<const int> ordering,
                               std::size_t prefix) {
  require_permutation(ordering, instance.num_coflows());
  if (prefix < 1 || prefix > ordering.size()) {
    throw ArgumentError(fmt::format("prefix length {} outside [1, {}]", prefix,
                                    ordering.size()));
  }
  const int n = instance.n_ports();
  CumulativeLoad out;
  out.loads = {std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
  for (std::size_t l = 0; l < prefix; ++l) {
    for (const auto& [pair, size] : instance.coflow(ordering[l]).demands()) {
      out.loads.source_loads[pair.src] += size;
      out.loads.dest_loads[pair.dst] += size;
    }
  }
  out.max_load = out.loads.max_load();
  return out;
}

std::vector<double> prefix_effective_sizes(const CoflowInstance& instance,
                                           std::span<const int> ordering) {
  require_permutation(ordering, instance.num_coflows());
  const int n = instance.n_ports();
  std::vector<double> src(n, 0.0), dst(n, 0.0);
  std::vector<double> out;
  out.reserve(ordering.size());
  double running_max = 0;
  for (int id : ordering) {
    for (const auto& [pair, size] : instance.coflow(id).demands()) {
      src[pair.src] += size;
      dst[pair.dst] += size;
      running_max = std::max({running_max, src[pair.src], dst[pair.dst]});
    }
    out.push_back(running_max);
  }
  return out;
}

double horizon(const CoflowInstance& instance) {
  return instance.max_release() +
         instance.total_demand() / instance.capacity();
}

}  // namespace coflow
