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

// Domain types for coflows on an N x N non-blocking switch, and the
// per-port load arithmetic (aggregate loads, effective sizes, cumulative
// prefix loads) that the relaxations, schedulers and checkers build on.
//
// All quantities are real-valued: demands are data units, capacity is data
// units per time unit, and release dates are times.

#ifndef COFLOW_MODEL_H_
#define COFLOW_MODEL_H_

#include <compare>
#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "coflow/errors.h"

namespace coflow {

// One (input port, output port) pair of the switch.
struct PortPair {
  int src = 0;
  int dst = 0;
  auto operator<=>(const PortPair&) const = default;
};

// Flow (i, j, k): source port, destination port, owning coflow.
struct FlowKey {
  int coflow = 0;
  int src = 0;
  int dst = 0;
  auto operator<=>(const FlowKey&) const = default;
};

std::string to_string(const FlowKey& flow);

using DemandMap = std::map<PortPair, double>;

// A collection of flows released together and complete only when the last
// of them is. Stored demands are strictly positive; zero entries are
// dropped at construction.
class Coflow {
 public:
  Coflow(DemandMap demands, double release = 0, double weight = 1);

  const DemandMap& demands() const { return demands_; }
  double release() const { return release_; }
  double weight() const { return weight_; }
  std::size_t num_flows() const { return demands_.size(); }
  double total_demand() const;
  double demand(int src, int dst) const;

 private:
  DemandMap demands_;
  double release_;
  double weight_;
};

class CoflowInstance {
 public:
  CoflowInstance(int n_ports, std::vector<Coflow> coflows,
                 double capacity = 1.0);

  int n_ports() const { return n_ports_; }
  double capacity() const { return capacity_; }
  std::size_t num_coflows() const { return coflows_.size(); }
  const Coflow& coflow(std::size_t k) const { return coflows_.at(k); }
  const std::vector<Coflow>& coflows() const { return coflows_; }

  double max_release() const;
  bool all_releases_zero() const;
  double total_demand() const;
  // Every flow of every coflow, ordered by (coflow, src, dst).
  std::vector<FlowKey> flows() const;

  // Same instance with weights replaced (size must equal num_coflows()).
  CoflowInstance with_weights(std::span<const double> weights) const;

 private:
  int n_ports_;
  std::vector<Coflow> coflows_;
  double capacity_;
};

// Per-port loads. Index s of source_loads is input port s; index s of
// dest_loads is output port s.
struct LoadVector {
  std::vector<double> source_loads;
  std::vector<double> dest_loads;

  double max_load() const;
};

// d_i^k = sum_j d_ij^k and d_j^k = sum_i d_ij^k.
LoadVector aggregate_loads(const Coflow& coflow, int n_ports);

// W(k): the largest port load of the coflow, in data units.
double effective_size(const Coflow& coflow, int n_ports);

struct CumulativeLoad {
  LoadVector loads;    // W(1..k; s) for every port s
  double max_load = 0;  // W(1..k)
};

// Loads induced by the first `prefix` coflows of `ordering`.
CumulativeLoad cumulative_load(const CoflowInstance& instance,
                               std::span<const int> ordering,
                               std::size_t prefix);

// W(1..k) for k = 1..K along `ordering`, in one pass.
std::vector<double> prefix_effective_sizes(const CoflowInstance& instance,
                                           std::span<const int> ordering);

// Checks that `ordering` is a permutation of 0..K-1.
void require_permutation(std::span<const int> ordering, std::size_t k);

// T = max_k r_k + (sum of all demands) / capacity: no sensible schedule
// runs past it.
double horizon(const CoflowInstance& instance);

}  // namespace coflow

#endif  // COFLOW_MODEL_H_
