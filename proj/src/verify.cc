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

#include "coflow/verify.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <unordered_map>

#include <fmt/format.h>

#include "coflow/sim.h"

namespace coflow {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool is_integral(double v) { return std::abs(v - std::round(v)) <= 1e-9; }

// Memoized depth-first search over slot-by-slot maximal matchings.
//
// value(t, rem) is the least achievable sum over still-open coflows of
// w_k (f_k - t). Once every coflow is released and every deadline has
// passed, that quantity no longer depends on t, so t is clamped in the key.
class Oracle {
 public:
  Oracle(const CoflowInstance& instance, std::span<const double> deadlines)
      : instance_(instance) {
    int max_demand = 1;
    for (const FlowKey& f : instance.flows()) {
      const int d = static_cast<int>(
          std::lround(instance.coflow(f.coflow).demand(f.src, f.dst)));
      flows_.push_back(f);
      demand_.push_back(d);
      max_demand = std::max(max_demand, d);
    }
    bits_ = std::bit_width(static_cast<unsigned>(max_demand));
    if (bits_ * flows_.size() > 64) {
      throw RefusalError("oracle state does not fit its 64-bit key");
    }
    const std::size_t k_count = instance.num_coflows();
    deadline_.assign(k_count, kInf);
    for (std::size_t k = 0; k < k_count && k < deadlines.size(); ++k) {
      if (deadlines[k] >= 0) deadline_[k] = deadlines[k];
    }
    double cap = instance.max_release();
    for (double d : deadline_) {
      if (std::isfinite(d)) cap = std::max(cap, std::ceil(d));
    }
    time_cap_ = static_cast<int>(cap);
  }

  std::vector<int> initial() const { return demand_; }

  double solve(int t, const std::vector<int>& rem, double budget) {
    if (std::ranges::all_of(rem, [](int r) { return r == 0; })) return 0;
    const Key key{std::min(t, time_cap_), encode(rem)};
    auto it = memo_.find(key);
    if (it != memo_.end()) {
      if (it->second.exact || it->second.value > budget) return it->second.value;
    }
    const std::vector<double> open_rem_load = open_loads(rem);
    double open_weight = 0;
    for (std::size_t k = 0; k < open_rem_load.size(); ++k) {
      if (open_rem_load[k] <= 0) continue;
      if (t + 1 > deadline_[k] + 1e-9) return remember(key, kInf, true);
      open_weight += instance_.coflow(k).weight();
    }
    const double bound = lower_bound(t, rem);
    if (bound > budget) return remember(key, bound, false);

    const std::vector<std::size_t> avail = available(t, rem);
    if (avail.empty()) {
      const int next = next_release(t);
      const double idle = open_weight * (next - t);
      const double v = idle + solve(next, rem, budget - idle);
      return remember(key, v, v <= budget);
    }

    std::vector<std::vector<int>> children = matchings(avail, rem);
    std::vector<double> child_bound(children.size());
    for (std::size_t c = 0; c < children.size(); ++c) {
      child_bound[c] = lower_bound(t + 1, children[c]);
    }
    std::vector<std::size_t> order(children.size());
    for (std::size_t c = 0; c < order.size(); ++c) order[c] = c;
    std::ranges::stable_sort(order, [&](std::size_t a, std::size_t b) {
      return child_bound[a] < child_bound[b];
    });
    double best = kInf;
    for (std::size_t c : order) {
      if (open_weight + child_bound[c] >= best) break;
      const double v = open_weight +
                       solve(t + 1, children[c], std::min(budget, best) - open_weight);
      best = std::min(best, v);
    }
    best = std::max(best, bound);
    return remember(key, best, best <= budget);
  }

  // Replays the optimum found from (0, initial) into a schedule.
  Schedule reconstruct(double value) {
    FluidExecutor exec(instance_);
    std::vector<int> rem = demand_;
    int t = 0;
    std::vector<double> rates(flows_.size());
    while (!exec.done()) {
      const std::vector<std::size_t> avail = available(t, rem);
      if (avail.empty()) {
        const int next = next_release(t);
        value -= open_weight(rem) * (next - t);
        exec.idle_until(next);
        t = next;
        continue;
      }
      const double w = open_weight(rem);
      const double target = value - w;
      const double tol = 1e-9 * std::max(1.0, std::abs(value));
      bool found = false;
      for (const std::vector<int>& child : matchings(avail, rem)) {
        const double v = solve(t + 1, child, target + tol);
        if (std::abs(v - target) <= tol) {
          std::ranges::fill(rates, 0.0);
          for (std::size_t f = 0; f < flows_.size(); ++f) {
            if (child[f] < rem[f]) rates[f] = 1.0;
          }
          exec.advance(rates, t + 1);
          rem = child;
          value = v;
          ++t;
          found = true;
          break;
        }
      }
      if (!found) throw InternalError("oracle could not replay its optimum");
    }
    return exec.finish();
  }

  std::size_t states() const { return memo_.size(); }

 private:
  struct Key {
    int t;
    std::uint64_t rem;
    bool operator==(const Key&) const = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const {
      return std::hash<std::uint64_t>()(k.rem * 0x9e3779b97f4a7c15ULL ^
                                        static_cast<std::uint64_t>(k.t));
    }
  };
  struct Entry {
    double value;
    bool exact;
  };

  std::uint64_t encode(const std::vector<int>& rem) const {
    std::uint64_t code = 0;
    for (int r : rem) code = (code << bits_) | static_cast<std::uint64_t>(r);
    return code;
  }

  double remember(const Key& key, double value, bool exact) {
    Entry& e = memo_[key];
    if (exact) {
      e = {value, true};
    } else if (!e.exact) {
      e.value = std::max(e.value, value);
    }
    return value;
  }

  // Remaining effective size of each coflow (zero once complete).
  std::vector<double> open_loads(const std::vector<int>& rem) const {
    const int n = instance_.n_ports();
    std::vector<double> load(instance_.num_coflows(), 0.0);
    std::vector<int> src(instance_.num_coflows() * n), dst(src.size());
    for (std::size_t f = 0; f < flows_.size(); ++f) {
      const FlowKey& k = flows_[f];
      const int s = (src[k.coflow * n + k.src] += rem[f]);
      const int d = (dst[k.coflow * n + k.dst] += rem[f]);
      load[k.coflow] = std::max({load[k.coflow], double(s), double(d)});
    }
    return load;
  }

  double open_weight(const std::vector<int>& rem) const {
    const std::vector<double> load = open_loads(rem);
    double w = 0;
    for (std::size_t k = 0; k < load.size(); ++k) {
      if (load[k] > 0) w += instance_.coflow(k).weight();
    }
    return w;
  }

  // Each open coflow still waits for its release and then needs at least
  // its remaining effective size.
  double lower_bound(int t, const std::vector<int>& rem) const {
    const std::vector<double> load = open_loads(rem);
    double lb = 0;
    for (std::size_t k = 0; k < load.size(); ++k) {
      if (load[k] <= 0) continue;
      const Coflow& c = instance_.coflow(k);
      const double f = std::max(c.release(), static_cast<double>(t)) + load[k];
      if (f > deadline_[k] + 1e-9) return kInf;
      lb += c.weight() * (f - t);
    }
    return lb;
  }

  std::vector<std::size_t> available(int t, const std::vector<int>& rem) const {
    std::vector<std::size_t> out;
    for (std::size_t f = 0; f < flows_.size(); ++f) {
      if (rem[f] > 0 && instance_.coflow(flows_[f].coflow).release() <= t) {
        out.push_back(f);
      }
    }
    return out;
  }

  int next_release(int t) const {
    double next = kInf;
    for (const Coflow& c : instance_.coflows()) {
      if (c.release() > t) next = std::min(next, c.release());
    }
    if (!std::isfinite(next)) throw InternalError("oracle stalled with no arrivals");
    return static_cast<int>(std::lround(next));
  }

  // Residual demand vectors reachable by serving one unit on every flow of
  // a maximal set of available flows with pairwise distinct ports.
  std::vector<std::vector<int>> matchings(const std::vector<std::size_t>& avail,
                                          const std::vector<int>& rem) const {
    std::vector<std::vector<int>> out;
    std::vector<bool> chosen(avail.size(), false);
    auto recurse = [&](auto&& self, std::size_t i, unsigned src_used,
                       unsigned dst_used) -> void {
      if (i == avail.size()) {
        for (std::size_t a = 0; a < avail.size(); ++a) {
          const FlowKey& k = flows_[avail[a]];
          if (!chosen[a] && !(src_used >> k.src & 1) && !(dst_used >> k.dst & 1)) {
            return;
          }
        }
        std::vector<int> child = rem;
        for (std::size_t a = 0; a < avail.size(); ++a) {
          if (chosen[a]) --child[avail[a]];
        }
        out.push_back(std::move(child));
        return;
      }
      const FlowKey& k = flows_[avail[i]];
      if (!(src_used >> k.src & 1) && !(dst_used >> k.dst & 1)) {
        chosen[i] = true;
        self(self, i + 1, src_used | 1u << k.src, dst_used | 1u << k.dst);
        chosen[i] = false;
      }
      self(self, i + 1, src_used, dst_used);
    };
    recurse(recurse, 0, 0u, 0u);
    return out;
  }

  const CoflowInstance& instance_;
  std::vector<FlowKey> flows_;
  std::vector<int> demand_;
  std::vector<double> deadline_;
  int bits_ = 1;
  int time_cap_ = 0;
  std::unordered_map<Key, Entry, KeyHash> memo_;
};

}  // namespace

OracleResult oracle_opt(const CoflowInstance& instance, OracleLimits limits,
                        std::span<const double> deadlines) {
  if (instance.num_coflows() == 0) throw ArgumentError("oracle needs at least one coflow");
  if (instance.n_ports() > limits.max_ports) {
    throw RefusalError(fmt::format("oracle limited to {} ports, instance has {}",
                                   limits.max_ports, instance.n_ports()));
  }
  if (instance.total_demand() > limits.max_total_demand + 1e-9) {
    throw RefusalError(fmt::format("oracle limited to total demand {}, instance has {}",
                                   limits.max_total_demand, instance.total_demand()));
  }
  if (instance.capacity() != 1.0) throw RefusalError("oracle requires unit capacity");
  for (const Coflow& c : instance.coflows()) {
    if (!is_integral(c.release())) throw RefusalError("oracle requires integer releases");
    for (const auto& [pair, size] : c.demands()) {
      if (!is_integral(size)) throw RefusalError("oracle requires integer demands");
    }
  }

  Oracle oracle(instance, deadlines);
  const int start = static_cast<int>(std::lround(
      std::ranges::min(instance.coflows(), {}, &Coflow::release).release()));
  double value = oracle.solve(start, oracle.initial(), kInf);
  if (!std::isfinite(value)) throw ArgumentError("oracle deadlines cannot be met");
  double head = 0;
  for (const Coflow& c : instance.coflows()) head += c.weight() * start;

  OracleResult result;
  // The search starts at the first release; replay from time zero.
  result.optimal_schedule = oracle.reconstruct(value + head);
  result.optimal_value = total_weighted_completion(result.optimal_schedule, instance);
  result.explored_states = oracle.states();
  return result;
}

BoundReport check_approximation_bound(const CoflowInstance& instance,
                                 const Schedule& schedule, double lp_bound) {
  BoundReport r;
  r.total = total_weighted_completion(schedule, instance);
  r.lp_bound = lp_bound;
  r.ratio = r.total / lp_bound;
  r.limit = instance.all_releases_zero() ? 4.0 : 5.0;
  r.ok = r.total <= r.limit * lp_bound * (1 + 1e-9) + 1e-9;
  if (!r.ok) {
    r.message = fmt::format("total {} exceeds {} x lower bound {} (ratio {})", r.total,
                            r.limit, lp_bound, r.ratio);
  }
  return r;
}

PrefixReport check_half_prefix_bound(const OrderingLpResult& result,
                          const CoflowInstance& instance) {
  PrefixReport r;
  const std::vector<double> prefix = prefix_effective_sizes(instance, result.ordering);
  r.worst_slack = kInf;
  for (std::size_t p = 0; p < prefix.size(); ++p) {
    const double f = result.relaxed_completions[result.ordering[p]];
    const double half = prefix[p] / instance.capacity() / 2;
    const double slack = f - half;
    r.worst_slack = std::min(r.worst_slack, slack);
    if (slack < -1e-6 && r.ok) {
      r.ok = false;
      r.first_violation = static_cast<int>(p);
      r.message = fmt::format("position {}: relaxed completion {} below half of {}", p, f,
                              2 * half);
    }
  }
  return r;
}

PrefixReport check_list_schedule_bound(const CoflowInstance& instance,
                                       std::span<const int> ordering,
                                       const Schedule& schedule) {
  PrefixReport r;
  const std::vector<double> prefix = prefix_effective_sizes(instance, ordering);
  r.worst_slack = kInf;
  for (std::size_t p = 0; p < prefix.size(); ++p) {
    const int k = ordering[p];
    const double limit =
        instance.coflow(k).release() + 2 * prefix[p] / instance.capacity();
    const double slack = limit - schedule.coflow_completions.at(k);
    r.worst_slack = std::min(r.worst_slack, slack);
    if (slack < -1e-9 * std::max(1.0, limit) && r.ok) {
      r.ok = false;
      r.first_violation = static_cast<int>(p);
      r.message = fmt::format("coflow {} completes at {}, past r + 2W(1..k) = {}", k,
                              schedule.coflow_completions.at(k), limit);
    }
  }
  return r;
}

}  // namespace coflow
