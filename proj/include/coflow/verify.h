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

// Ground truth for small instances: worked-example fixtures, an exhaustive
// oracle over unit-slot matching schedules, and checkers for the proven
// bounds.

#ifndef COFLOW_VERIFY_H_
#define COFLOW_VERIFY_H_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "coflow/model.h"
#include "coflow/relaxations.h"
#include "coflow/schedule.h"

namespace coflow {

// Two ports. Coflow 0 uses both diagonal pairs with unit demand, coflows 1
// and 2 each use one of them. Everything released at 0 with unit weight.
CoflowInstance diagonal_unit_fixture();
// As above with demands 2 (coflow 0) and 3 (coflows 1, 2).
CoflowInstance diagonal_uneven_fixture();
// Two ports. Coflow 0 has flow (0,0) of size 1 released at 0; coflows 1..3
// have single flows (0,1), (1,0), (1,1) of size 2 released at 1.
CoflowInstance staggered_release_fixture();
// Three ports. Coflow 0 ("orange") has unit flows on the 2x2 block of inputs
// {0,1} and outputs {0,1}; coflow 1 ("green") has unit flows (0,2), (1,2).
// Orange carries weight 10 so every ordering rule puts it first.
CoflowInstance counterexample_fixture();

struct OracleLimits {
  int max_ports = 3;
  double max_total_demand = 14;
};

struct OracleResult {
  double optimal_value = 0;
  Schedule optimal_schedule;
  std::size_t explored_states = 0;
};

// Exact minimum of sum w_k f_k over schedules that serve one unit per
// matched pair per unit slot. Requires integer demands and releases and
// unit capacity. `deadlines`, when given, holds per-coflow completion
// deadlines (negative means none); an unreachable deadline set throws
// ArgumentError. Throws RefusalError when the instance exceeds `limits`.
OracleResult oracle_opt(const CoflowInstance& instance, OracleLimits limits = {},
                        std::span<const double> deadlines = {});

struct BoundReport {
  bool ok = true;
  double total = 0;
  double lp_bound = 0;
  double ratio = 0;
  double limit = 0;  // 4 with all releases at zero, else 5
  std::string message;
};

BoundReport check_approximation_bound(const CoflowInstance& instance,
                                 const Schedule& schedule, double lp_bound);

struct PrefixReport {
  bool ok = true;
  int first_violation = -1;  // position in the ordering
  double worst_slack = 0;    // min over prefixes of (rhs - lhs) style slack
  std::string message;
};

// f_k >= W(1..k) / 2 - 1e-6 along the LP ordering.
PrefixReport check_half_prefix_bound(const OrderingLpResult& result,
                          const CoflowInstance& instance);

// f_k <= r_k + 2 W(1..k) / capacity along `ordering` for a list schedule.
PrefixReport check_list_schedule_bound(const CoflowInstance& instance,
                                       std::span<const int> ordering,
                                       const Schedule& schedule);

}  // namespace coflow

#endif  // COFLOW_VERIFY_H_
