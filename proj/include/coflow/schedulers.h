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

// Scheduling policies. Each maps an instance to a feasible Schedule.
//
//   lp_ov_ls         list scheduling along the ordering-LP order
//   lp_ov_ls_online  the same, re-solving the LP on residual demand
//   varys            smallest-bottleneck-first with proportional rates
//   lp_ov_gb         ordering-LP groups served as aggregated coflows
//   lp_ii_gb         interval-LP groups served slot by slot through
//                    permutation decompositions
//
// Orderings, groups and flow scans break ties by coflow id and then by
// (source, destination).

#ifndef COFLOW_SCHEDULERS_H_
#define COFLOW_SCHEDULERS_H_

#include <optional>
#include <span>
#include <vector>

#include "coflow/model.h"
#include "coflow/relaxations.h"
#include "coflow/schedule.h"

namespace coflow {

struct GroupPartition {
  std::vector<std::vector<int>> groups;  // coflow ids, in ordering order
  std::vector<double> boundaries;        // upper W threshold of each group
};

// Consecutive coflows of `ordering` whose cumulative load W(1..k) / capacity
// falls into the same interval (2^(m-1), 2^m] share a group.
GroupPartition group_coflows(std::span<const int> ordering,
                             const CoflowInstance& instance);
GroupPartition group_coflows(const OrderingLpResult& result,
                             const CoflowInstance& instance);
GroupPartition group_coflows(const IntervalLpResult& result,
                             const CoflowInstance& instance);

Schedule lp_ov_ls(const CoflowInstance& instance);
// List scheduling along a precomputed ordering.
Schedule lp_ov_ls(const CoflowInstance& instance, std::span<const int> ordering);

struct OnlineOptions {
  // Re-solve every `resolve_period` time units from the first release;
  // unset re-solves whenever a coflow arrives.
  std::optional<double> resolve_period;
};

Schedule lp_ov_ls_online(const CoflowInstance& instance, OnlineOptions options = {});

Schedule varys(const CoflowInstance& instance);

Schedule lp_ov_gb(const CoflowInstance& instance);
Schedule lp_ov_gb(const CoflowInstance& instance, std::span<const int> ordering);

struct SlotOptions {
  double time_unit = 1.0;  // slot length; a matched pair moves capacity * time_unit per slot
  // Reject demands that are not whole multiples of the per-slot volume.
  // When false, a partial unit still occupies a full slot.
  bool strict_integral = true;
};

Schedule lp_ii_gb(const CoflowInstance& instance, SlotOptions options = {});
Schedule lp_ii_gb(const CoflowInstance& instance, std::span<const int> ordering,
                  SlotOptions options);

struct BvnTerm {
  double weight = 0;
  std::vector<int> perm;  // perm[input] = output
};

// Scales `matrix` by its largest line sum, pads it to a doubly stochastic
// matrix and peels off permutations. Weights sum to 1.
std::vector<BvnTerm> bvn_decompose(const std::vector<std::vector<double>>& matrix);

}  // namespace coflow

#endif  // COFLOW_SCHEDULERS_H_
