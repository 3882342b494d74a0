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
#include <map>
#include <set>
#include <vector>

#include <fmt/format.h>

#include "coflow/errors.h"
#include "coflow/schedulers.h"
#include "coflow/sim.h"

namespace coflow {
namespace {

using Matrix = std::vector<std::vector<double>>;

// Smallest m with x <= 2^m, exact at powers of two.
int log2_ceiling(double x) {
  int e = 0;
  const double frac = std::frexp(x, &e);
  return frac == 0.5 ? e - 1 : e;
}

// Perfect matching on the entries above `tol`, rows tried in order and
// columns ascending. Empty when none exists.
std::vector<int> perfect_matching(const Matrix& m, double tol) {
  const int n = static_cast<int>(m.size());
  std::vector<int> row_of(n, -1);
  std::vector<bool> seen;
  auto augment = [&](auto&& self, int row) -> bool {
    for (int col = 0; col < n; ++col) {
      if (m[row][col] <= tol || seen[col]) continue;
      seen[col] = true;
      if (row_of[col] < 0 || self(self, row_of[col])) {
        row_of[col] = row;
        return true;
      }
    }
    return false;
  };
  for (int row = 0; row < n; ++row) {
    seen.assign(n, false);
    if (!augment(augment, row)) return {};
  }
  std::vector<int> perm(n);
  for (int col = 0; col < n; ++col) perm[row_of[col]] = col;
  return perm;
}

// Raises entries until every line sums to the largest line sum.
double pad_to_equal_lines(Matrix& m) {
  const int n = static_cast<int>(m.size());
  std::vector<double> row(n, 0.0), col(n, 0.0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      row[i] += m[i][j];
      col[j] += m[i][j];
    }
  }
  const double target = std::max(std::ranges::max(row), std::ranges::max(col));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n && row[i] < target; ++j) {
      const double add = std::min(target - row[i], target - col[j]);
      if (add <= 0) continue;
      m[i][j] += add;
      row[i] += add;
      col[j] += add;
    }
  }
  return target;
}

// Decomposes a matrix with equal line sums into weighted permutations whose
// weights add up to the line sum.
std::vector<BvnTerm> peel_permutations(Matrix m, double line_sum, double tol) {
  std::vector<BvnTerm> out;
  double left = line_sum;
  while (left > tol) {
    std::vector<int> perm = perfect_matching(m, tol);
    if (perm.empty()) throw InternalError("no perfect matching in an equal-sum matrix");
    double w = left;
    for (std::size_t i = 0; i < perm.size(); ++i) w = std::min(w, m[i][perm[i]]);
    for (std::size_t i = 0; i < perm.size(); ++i) {
      m[i][perm[i]] -= w;
      if (m[i][perm[i]] <= tol) m[i][perm[i]] = 0;
    }
    left -= w;
    out.push_back({w, std::move(perm)});
  }
  return out;
}

std::vector<int> group_index(const GroupPartition& groups, std::size_t k_count) {
  std::vector<int> g(k_count);
  for (std::size_t i = 0; i < groups.groups.size(); ++i) {
    for (int k : groups.groups[i]) g[k] = static_cast<int>(i);
  }
  return g;
}

int first_open_group(const FluidExecutor& exec, const GroupPartition& groups) {
  for (std::size_t g = 0; g < groups.groups.size(); ++g) {
    for (int k : groups.groups[g]) {
      if (!exec.coflow_done(k)) return static_cast<int>(g);
    }
  }
  return -1;
}

// Per (src, dst): unfinished flows of released coflows in ordering order.
std::map<PortPair, std::vector<std::size_t>> flows_by_pair(const FluidExecutor& exec,
                                                           std::span<const int> ordering) {
  std::map<PortPair, std::vector<std::size_t>> out;
  for (int k : ordering) {
    if (exec.coflow_done(k) || !exec.released(k)) continue;
    for (std::size_t f : exec.flows_of(k)) {
      if (!exec.flow_done(f)) out[{exec.key(f).src, exec.key(f).dst}].push_back(f);
    }
  }
  return out;
}

}  // namespace

GroupPartition group_coflows(std::span<const int> ordering,
                             const CoflowInstance& instance) {
  const std::vector<double> prefix = prefix_effective_sizes(instance, ordering);
  GroupPartition out;
  int current = 0;
  for (std::size_t p = 0; p < ordering.size(); ++p) {
    const int m = log2_ceiling(prefix[p] / instance.capacity());
    if (out.groups.empty() || m != current) {
      out.groups.emplace_back();
      out.boundaries.push_back(std::ldexp(1.0, m));
      current = m;
    }
    out.groups.back().push_back(ordering[p]);
  }
  return out;
}

GroupPartition group_coflows(const OrderingLpResult& result,
                             const CoflowInstance& instance) {
  return group_coflows(result.ordering, instance);
}

GroupPartition group_coflows(const IntervalLpResult& result,
                             const CoflowInstance& instance) {
  return group_coflows(result.ordering, instance);
}

std::vector<BvnTerm> bvn_decompose(const Matrix& matrix) {
  const std::size_t n = matrix.size();
  double scale = 0;
  for (const std::vector<double>& row : matrix) {
    if (row.size() != n) throw ArgumentError("decomposition needs a square matrix");
    for (double v : row) {
      if (!(v >= 0) || !std::isfinite(v)) {
        throw ArgumentError("decomposition needs a nonnegative matrix");
      }
    }
  }
  if (n == 0) return {};
  for (std::size_t i = 0; i < n; ++i) {
    double row = 0, col = 0;
    for (std::size_t j = 0; j < n; ++j) {
      row += matrix[i][j];
      col += matrix[j][i];
    }
    scale = std::max({scale, row, col});
  }
  if (scale == 0) throw ArgumentError("decomposition needs a nonzero matrix");
  Matrix m = matrix;
  for (std::vector<double>& row : m) {
    for (double& v : row) v /= scale;
  }
  const double line = pad_to_equal_lines(m);
  std::vector<BvnTerm> terms = peel_permutations(std::move(m), line, 1e-12);
  double total = 0;
  for (const BvnTerm& t : terms) total += t.weight;
  for (BvnTerm& t : terms) t.weight /= total;
  return terms;
}

Schedule lp_ov_gb(const CoflowInstance& instance) {
  if (instance.num_coflows() == 0) return Schedule{};
  return lp_ov_gb(instance, solve_ordering_lp(instance).ordering);
}

// The first unfinished group is served as one aggregated coflow: each pair
// gets its share of the group's bottleneck, then pairs of the group are
// raised greedily until a port fills. A pair's rate goes to the earliest
// coflow of the group still sending on it. Ports left over carry later
// coflows, restricted to pairs the group does not use.
Schedule lp_ov_gb(const CoflowInstance& instance, std::span<const int> ordering) {
  require_permutation(ordering, instance.num_coflows());
  const GroupPartition groups = group_coflows(ordering, instance);
  const std::vector<int> group_of = group_index(groups, instance.num_coflows());
  const int n = instance.n_ports();
  const double cap = instance.capacity();
  const double empty = 1e-12 * cap;
  FluidExecutor exec(instance);
  std::vector<double> rates(exec.num_flows());

  while (!exec.done()) {
    std::ranges::fill(rates, 0.0);
    const int g = first_open_group(exec, groups);
    const auto by_pair = flows_by_pair(exec, ordering);
    std::map<PortPair, std::size_t> group_flow;  // earliest group flow on each pair
    std::map<PortPair, double> aggregate;
    std::vector<double> src(n, 0.0), dst(n, 0.0);
    for (const auto& [pair, fs] : by_pair) {
      for (std::size_t f : fs) {
        if (group_of[exec.key(f).coflow] != g) continue;
        if (!group_flow.contains(pair)) group_flow[pair] = f;
        aggregate[pair] += exec.remaining(f);
        src[pair.src] += exec.remaining(f);
        dst[pair.dst] += exec.remaining(f);
      }
    }
    std::vector<double> src_left(n, cap), dst_left(n, cap);
    if (!aggregate.empty()) {
      const double bottleneck = std::max(std::ranges::max(src), std::ranges::max(dst));
      for (const auto& [pair, d] : aggregate) {
        const double r = std::min({d * cap / bottleneck, src_left[pair.src], dst_left[pair.dst]});
        rates[group_flow[pair]] = r;
        src_left[pair.src] -= r;
        dst_left[pair.dst] -= r;
      }
      for (const auto& [pair, d] : aggregate) {
        const double extra = std::min(src_left[pair.src], dst_left[pair.dst]);
        if (extra <= empty) continue;
        rates[group_flow[pair]] += extra;
        src_left[pair.src] -= extra;
        dst_left[pair.dst] -= extra;
      }
    }
    for (int k : ordering) {
      if (group_of[k] <= g || exec.coflow_done(k) || !exec.released(k)) continue;
      for (std::size_t f : exec.flows_of(k)) {
        const FlowKey& key = exec.key(f);
        const PortPair pair{key.src, key.dst};
        if (exec.flow_done(f) || aggregate.contains(pair)) continue;
        const double extra = std::min(src_left[key.src], dst_left[key.dst]);
        if (extra <= empty) continue;
        rates[f] = extra;
        src_left[key.src] -= extra;
        dst_left[key.dst] -= extra;
      }
    }
    const std::optional<double> t = exec.next_event(rates);
    if (!t) throw InternalError("grouped schedule stalled with unfinished flows");
    exec.advance(rates, *t);
  }
  return exec.finish();
}

Schedule lp_ii_gb(const CoflowInstance& instance, SlotOptions options) {
  if (instance.num_coflows() == 0) return Schedule{};
  if (!(options.time_unit > 0) || !std::isfinite(options.time_unit)) {
    throw ArgumentError("time unit must be positive");
  }
  return lp_ii_gb(instance, solve_interval_lp(instance, options.time_unit).ordering, options);
}

// Time advances in slots. The released part of the first unfinished group is
// written as a whole number of data units per pair, padded to equal line
// sums and split into permutations, each repeated for its multiplicity. In a
// slot every matched pair moves one unit of its earliest group flow, or of
// the earliest later coflow on that pair when the group has none left. The
// plan is rebuilt when the group changes, when a group member arrives, or
// when it runs out.
Schedule lp_ii_gb(const CoflowInstance& instance, std::span<const int> ordering,
                  SlotOptions options) {
  require_permutation(ordering, instance.num_coflows());
  const double unit_time = options.time_unit;
  if (!(unit_time > 0) || !std::isfinite(unit_time)) {
    throw ArgumentError("time unit must be positive");
  }
  const double cap = instance.capacity();
  const double unit = cap * unit_time;
  if (options.strict_integral) {
    for (const FlowKey& f : instance.flows()) {
      const double units = instance.coflow(f.coflow).demand(f.src, f.dst) / unit;
      if (std::abs(units - std::round(units)) > 1e-9 * std::max(1.0, units)) {
        throw ArgumentError(fmt::format(
            "flow {} is {} slot units; rescale demands or change the time unit",
            to_string(f), units));
      }
    }
  }
  const GroupPartition groups = group_coflows(ordering, instance);
  const std::vector<int> group_of = group_index(groups, instance.num_coflows());
  const int n = instance.n_ports();
  FluidExecutor exec(instance);
  std::vector<double> rates(exec.num_flows());

  std::vector<BvnTerm> plan;
  std::size_t cursor = 0;
  int plan_group = -1;
  std::set<int> plan_members;
  long long slot = 0;

  auto units_left = [&](std::size_t f) {
    return std::ceil(exec.remaining(f) / unit - 1e-9);
  };
  auto serve = [&](std::size_t f) {
    rates[f] = std::min(unit, exec.remaining(f)) / unit_time;
  };

  while (!exec.done()) {
    std::ranges::fill(rates, 0.0);
    const int g = first_open_group(exec, groups);
    std::set<int> members;
    for (int k : groups.groups[g]) {
      if (exec.released(k)) members.insert(k);
    }
    bool group_pending = false;
    for (int k : members) group_pending |= !exec.coflow_done(k);
    const auto by_pair = flows_by_pair(exec, ordering);

    if (group_pending) {
      if (g != plan_group || members != plan_members || cursor >= plan.size()) {
        Matrix d(n, std::vector<double>(n, 0.0));
        for (int k : members) {
          for (std::size_t f : exec.flows_of(k)) {
            if (!exec.flow_done(f)) d[exec.key(f).src][exec.key(f).dst] += units_left(f);
          }
        }
        const double line = pad_to_equal_lines(d);
        plan = peel_permutations(std::move(d), line, 0.5);
        cursor = 0;
        plan_group = g;
        plan_members = members;
      }
      const BvnTerm& term = plan[cursor];
      for (int i = 0; i < n; ++i) {
        auto it = by_pair.find({i, term.perm[i]});
        if (it == by_pair.end()) continue;
        std::size_t chosen = it->second.front();
        for (std::size_t f : it->second) {
          if (group_of[exec.key(f).coflow] == g) {
            chosen = f;
            break;
          }
        }
        serve(chosen);
      }
      if (--plan[cursor].weight < 0.5) ++cursor;
    } else {
      std::vector<bool> src_busy(n, false), dst_busy(n, false);
      for (const auto& [pair, fs] : by_pair) {
        if (src_busy[pair.src] || dst_busy[pair.dst]) continue;
        src_busy[pair.src] = dst_busy[pair.dst] = true;
        serve(fs.front());
      }
    }

    if (!group_pending && std::ranges::all_of(rates, [](double r) { return r == 0; })) {
      const std::optional<double> next = exec.next_release();
      if (!next) throw InternalError("slotted schedule stalled with unfinished flows");
      slot = std::max(slot + 1, static_cast<long long>(std::ceil(*next / unit_time - 1e-9)));
      exec.idle_until(static_cast<double>(slot) * unit_time);
      continue;
    }
    ++slot;
    exec.advance(rates, static_cast<double>(slot) * unit_time);
  }
  return exec.finish();
}

}  // namespace coflow
