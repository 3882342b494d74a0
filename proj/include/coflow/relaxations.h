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

// LP relaxations of the coflow scheduling problem and the coflow orderings
// read off their solutions.
//
// The ordering-variable LP has one completion-time variable f_k per coflow
// and one ordering variable delta_{k,k'} per ordered pair k != k'
// (delta_{k,k'} ~ "k finishes before k'"). Its constraints, in row order:
//
//   for each coflow k, input port i:   f_k - sum_k' d_i^k' delta_{k',k} >= d_i^k
//   for each coflow k, output port j:  f_k - sum_k' d_j^k' delta_{k',k} >= d_j^k
//   for each coflow k:                 f_k >= W(k) + r_k
//   for each pair k < k':              delta_{k,k'} + delta_{k',k} = 1
//
// with 0 <= delta <= 1, minimizing sum_k w_k f_k. Loads are divided by the
// link capacity so every row is in time units. The optimum lower-bounds the
// optimal total weighted completion time.
//
// The interval-indexed LP splits time at 0, b, 2b, 4b, ... (b = base time
// unit) and assigns each coflow fractionally to the interval (t_l, t_{l+1}]
// in which it completes.

#ifndef COFLOW_RELAXATIONS_H_
#define COFLOW_RELAXATIONS_H_

#include <vector>

#include "coflow/lp.h"
#include "coflow/model.h"

namespace coflow {

struct OrderingLpResult {
  std::vector<double> relaxed_completions;
  std::vector<std::vector<double>> precedes;  // delta_{k,k'} as [k][k'], zero diagonal
  std::vector<int> ordering;  // coflow ids by relaxed completion, ties by id
  double objective = 0;
};

struct IntervalLpResult {
  std::vector<double> interval_endpoints;  // t_0 = 0 < t_1 < ... < t_L
  std::vector<std::vector<double>> x;      // x[k][l] for interval (t_l, t_{l+1}]
  std::vector<double> relaxed_completions;  // sum_l t_l x[k][l]
  std::vector<int> ordering;
  double objective = 0;
};

// Index of delta_{k,k'} in the ordering LP (f_k occupies index k).
int precedence_index(int num_coflows, int k, int k_prime);

// Throws ArgumentError on an empty instance.
lp::LpProblem build_ordering_lp(const CoflowInstance& instance);
OrderingLpResult solve_ordering_lp(const CoflowInstance& instance);
double lp_lower_bound(const CoflowInstance& instance);

struct IntervalLp {
  lp::LpProblem problem;
  std::vector<double> interval_endpoints;
  // Index of x[k][l] in `problem`.
  int var(int k, int l) const {
    return k * (static_cast<int>(interval_endpoints.size()) - 1) + l;
  }
};

IntervalLp build_interval_lp(const CoflowInstance& instance, double base = 1.0);
IntervalLpResult solve_interval_lp(const CoflowInstance& instance,
                                   double base = 1.0);

// Ids sorted by value ascending; values equal up to a relative 1e-9 are
// ordered by id.
std::vector<int> order_by_value(const std::vector<double>& values);

}  // namespace coflow

#endif  // COFLOW_RELAXATIONS_H_
