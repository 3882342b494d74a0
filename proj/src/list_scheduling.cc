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

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "coflow/errors.h"
#include "coflow/schedulers.h"
#include "coflow/sim.h"

namespace coflow {
namespace {

// One scan of the list: every released, unfinished flow of `order` (in
// order, then by ports) starts at full rate when both its ports are free.
void list_rates(const FluidExecutor& exec, std::span<const int> order,
                std::vector<double>& rates) {
  const int n = exec.instance().n_ports();
  const double cap = exec.instance().capacity();
  std::ranges::fill(rates, 0.0);
  std::vector<bool> src_busy(n, false), dst_busy(n, false);
  for (int k : order) {
    if (exec.coflow_done(k) || !exec.released(k)) continue;
    for (std::size_t f : exec.flows_of(k)) {
      if (exec.flow_done(f)) continue;
      const FlowKey& key = exec.key(f);
      if (src_busy[key.src] || dst_busy[key.dst]) continue;
      src_busy[key.src] = dst_busy[key.dst] = true;
      rates[f] = cap;
    }
  }
}

void step(FluidExecutor& exec, std::span<const double> rates,
          std::optional<double> extra_event = std::nullopt) {
  std::optional<double> t = exec.next_event(rates);
  if (extra_event && *extra_event > exec.now() && (!t || *extra_event < *t)) {
    t = extra_event;
  }
  if (!t) throw InternalError("schedule stalled with unfinished flows");
  exec.advance(rates, *t);
}

// Released, unfinished coflows with their remaining demand, released at 0.
CoflowInstance residual(const FluidExecutor& exec, const std::vector<int>& ids) {
  std::vector<Coflow> coflows;
  for (int k : ids) {
    DemandMap d;
    for (std::size_t f : exec.flows_of(k)) {
      if (!exec.flow_done(f)) d[{exec.key(f).src, exec.key(f).dst}] = exec.remaining(f);
    }
    coflows.emplace_back(std::move(d), 0.0, exec.instance().coflow(k).weight());
  }
  return CoflowInstance(exec.instance().n_ports(), std::move(coflows),
                        exec.instance().capacity());
}

}  // namespace

Schedule lp_ov_ls(const CoflowInstance& instance) {
  if (instance.num_coflows() == 0) return Schedule{};
  return lp_ov_ls(instance, solve_ordering_lp(instance).ordering);
}

Schedule lp_ov_ls(const CoflowInstance& instance, std::span<const int> ordering) {
  require_permutation(ordering, instance.num_coflows());
  FluidExecutor exec(instance);
  std::vector<double> rates(exec.num_flows());
  while (!exec.done()) {
    list_rates(exec, ordering, rates);
    step(exec, rates);
  }
  return exec.finish();
}

Schedule lp_ov_ls_online(const CoflowInstance& instance, OnlineOptions options) {
  if (options.resolve_period && !(*options.resolve_period > 0)) {
    throw ArgumentError("resolve period must be positive");
  }
  if (instance.num_coflows() == 0) return Schedule{};
  FluidExecutor exec(instance);
  const int k_count = static_cast<int>(instance.num_coflows());
  std::vector<int> order;
  std::vector<bool> known(k_count, false);
  double first_release = instance.coflow(0).release();
  for (const Coflow& c : instance.coflows()) first_release = std::min(first_release, c.release());
  std::optional<double> next_resolve;
  if (options.resolve_period) next_resolve = first_release;

  std::vector<double> rates(exec.num_flows());
  while (!exec.done()) {
    std::vector<int> arrivals;
    for (int k = 0; k < k_count; ++k) {
      if (!known[k] && exec.released(k)) arrivals.push_back(k);
    }
    bool resolve = false;
    if (next_resolve) {
      if (*next_resolve <= exec.now() + kEventEpsilon) {
        resolve = true;
        while (*next_resolve <= exec.now() + kEventEpsilon) *next_resolve += *options.resolve_period;
      }
    } else {
      resolve = !arrivals.empty();
    }
    for (int k : arrivals) known[k] = true;
    if (resolve) {
      std::vector<int> open;
      for (int k = 0; k < k_count; ++k) {
        if (known[k] && !exec.coflow_done(k)) open.push_back(k);
      }
      order.clear();
      if (!open.empty()) {
        for (int local : solve_ordering_lp(residual(exec, open)).ordering) {
          order.push_back(open[local]);
        }
      }
    } else {
      order.insert(order.end(), arrivals.begin(), arrivals.end());
    }
    list_rates(exec, order, rates);
    step(exec, rates, next_resolve);
  }
  return exec.finish();
}

}  // namespace coflow
