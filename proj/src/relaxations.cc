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

#include "coflow/relaxations.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

namespace coflow {
namespace {

void require_nonempty(const CoflowInstance& instance) {
  if (instance.num_coflows() == 0) {
    throw ArgumentError("LP relaxation needs at least one coflow");
  }
}

const lp::LpSolution& require_optimal(const lp::LpSolution& s,
                                      const char* what) {
  if (s.status != lp::LpStatus::kOptimal) {
    throw InternalError(
        fmt::format("{} is {} but is feasible and bounded by construction",
                    what, lp::to_string(s.status)));
  }
  return s;
}

}  // namespace

int precedence_index(int num_coflows, int k, int k_prime) {
  return num_coflows + k * (num_coflows - 1) +
         (k_prime < k ? k_prime : k_prime - 1);
}

std::vector<int> order_by_value(const std::vector<double>& values) {
  double scale = 1;
  for (double v : values) scale = std::max(scale, std::abs(v));
  const double quantum = 1e-9 * scale;
  std::vector<long long> key(values.size());
  for (std::size_t k = 0; k < values.size(); ++k) {
    key[k] = std::llround(values[k] / quantum);
  }
  std::vector<int> ids(values.size());
  std::iota(ids.begin(), ids.end(), 0);
  std::stable_sort(ids.begin(), ids.end(),
                   [&](int a, int b) { return key[a] < key[b]; });
  return ids;
}

lp::LpProblem build_ordering_lp(const CoflowInstance& instance) {
  require_nonempty(instance);
  const int k_count = static_cast<int>(instance.num_coflows());
  const int n = instance.n_ports();
  const double cap = instance.capacity();
  std::vector<LoadVector> loads;
  for (const Coflow& c : instance.coflows()) loads.push_back(aggregate_loads(c, n));

  lp::LpProblem p;
  for (int k = 0; k < k_count; ++k) {
    p.add_var(instance.coflow(k).weight(), {}, fmt::format("f_{}", k));
  }
  for (int k = 0; k < k_count; ++k) {
    for (int kp = 0; kp < k_count; ++kp) {
      if (kp == k) continue;
      const int v = p.add_var(0.0, {0.0, 1.0}, fmt::format("delta_{}_{}", k, kp));
      if (v != precedence_index(k_count, k, kp)) {
        throw InternalError("ordering LP variable layout mismatch");
      }
    }
  }
  auto port_rows = [&](bool source_side) {
    for (int k = 0; k < k_count; ++k) {
      for (int s = 0; s < n; ++s) {
        auto load_of = [&](int c) {
          return (source_side ? loads[c].source_loads[s] : loads[c].dest_loads[s]) / cap;
        };
        std::vector<lp::Term> terms{{k, 1.0}};
        for (int kp = 0; kp < k_count; ++kp) {
          if (kp == k || load_of(kp) == 0) continue;
          terms.push_back({precedence_index(k_count, kp, k), -load_of(kp)});
        }
        p.add_constraint(std::move(terms), lp::Relation::kGreaterEqual, load_of(k),
                         fmt::format("{}_{}_{}", source_side ? "src" : "dst", k, s));
      }
    }
  };
  port_rows(true);
  port_rows(false);
  for (int k = 0; k < k_count; ++k) {
    const Coflow& c = instance.coflow(k);
    p.add_constraint({{k, 1.0}}, lp::Relation::kGreaterEqual,
                     loads[k].max_load() / cap + c.release(), fmt::format("rt_{}", k));
  }
  for (int k = 0; k < k_count; ++k) {
    for (int kp = k + 1; kp < k_count; ++kp) {
      p.add_constraint({{precedence_index(k_count, k, kp), 1.0},
                        {precedence_index(k_count, kp, k), 1.0}},
                       lp::Relation::kEqual, 1.0, fmt::format("prec_{}_{}", k, kp));
    }
  }
  return p;
}

OrderingLpResult solve_ordering_lp(const CoflowInstance& instance) {
  const lp::LpProblem p = build_ordering_lp(instance);
  const lp::LpSolution s = require_optimal(lp::solve(p), "ordering LP");
  const int k_count = static_cast<int>(instance.num_coflows());
  OrderingLpResult out;
  out.relaxed_completions.assign(s.values.begin(), s.values.begin() + k_count);
  out.precedes.assign(k_count, std::vector<double>(k_count, 0.0));
  for (int k = 0; k < k_count; ++k) {
    for (int kp = 0; kp < k_count; ++kp) {
      if (k != kp) out.precedes[k][kp] = s.values[precedence_index(k_count, k, kp)];
    }
  }
  out.ordering = order_by_value(out.relaxed_completions);
  out.objective = s.objective_value;
  return out;
}

double lp_lower_bound(const CoflowInstance& instance) {
  return solve_ordering_lp(instance).objective;
}

IntervalLp build_interval_lp(const CoflowInstance& instance, double base) {
  require_nonempty(instance);
  if (!(base > 0) || !std::isfinite(base)) {
    throw ArgumentError(fmt::format("interval base must be > 0, got {}", base));
  }
  const int k_count = static_cast<int>(instance.num_coflows());
  const int n = instance.n_ports();
  const double cap = instance.capacity();
  const double t_max = horizon(instance);

  IntervalLp out;
  out.interval_endpoints = {0.0, base};
  while (out.interval_endpoints.back() < t_max) {
    out.interval_endpoints.push_back(2 * out.interval_endpoints.back());
  }
  const std::vector<double>& t = out.interval_endpoints;
  const int intervals = static_cast<int>(t.size()) - 1;

  std::vector<LoadVector> loads;
  for (const Coflow& c : instance.coflows()) loads.push_back(aggregate_loads(c, n));

  lp::LpProblem& p = out.problem;
  for (int k = 0; k < k_count; ++k) {
    const double earliest = instance.coflow(k).release() + loads[k].max_load() / cap;
    for (int l = 0; l < intervals; ++l) {
      // A coflow cannot complete in an interval that ends before r_k + W(k).
      const bool possible = t[l + 1] >= earliest * (1 - 1e-12);
      const int v = p.add_var(instance.coflow(k).weight() * t[l],
                              {0.0, possible ? 1.0 : 0.0},
                              fmt::format("x_{}_{}", k, l));
      if (v != out.var(k, l)) throw InternalError("interval LP layout mismatch");
    }
  }
  for (int k = 0; k < k_count; ++k) {
    std::vector<lp::Term> terms;
    for (int l = 0; l < intervals; ++l) terms.push_back({out.var(k, l), 1.0});
    p.add_constraint(std::move(terms), lp::Relation::kEqual, 1.0,
                     fmt::format("assign_{}", k));
  }
  // Work of coflows completing by t_{l+1} fits through each port by t_{l+1}.
  for (int side = 0; side < 2; ++side) {
    for (int s = 0; s < n; ++s) {
      for (int l = 0; l < intervals; ++l) {
        std::vector<lp::Term> terms;
        for (int k = 0; k < k_count; ++k) {
          const double load =
              (side == 0 ? loads[k].source_loads[s] : loads[k].dest_loads[s]) / cap;
          if (load == 0) continue;
          for (int u = 0; u <= l; ++u) terms.push_back({out.var(k, u), load});
        }
        if (terms.empty()) continue;
        p.add_constraint(std::move(terms), lp::Relation::kLessEqual, t[l + 1],
                         fmt::format("{}_{}_{}", side == 0 ? "src" : "dst", s, l));
      }
    }
  }
  return out;
}

IntervalLpResult solve_interval_lp(const CoflowInstance& instance, double base) {
  const IntervalLp lp_model = build_interval_lp(instance, base);
  const lp::LpSolution s =
      require_optimal(lp::solve(lp_model.problem), "interval-indexed LP");
  const int k_count = static_cast<int>(instance.num_coflows());
  const int intervals = static_cast<int>(lp_model.interval_endpoints.size()) - 1;
  IntervalLpResult out;
  out.interval_endpoints = lp_model.interval_endpoints;
  out.x.assign(k_count, std::vector<double>(intervals, 0.0));
  out.relaxed_completions.assign(k_count, 0.0);
  for (int k = 0; k < k_count; ++k) {
    for (int l = 0; l < intervals; ++l) {
      const double v = s.values[lp_model.var(k, l)];
      out.x[k][l] = v;
      out.relaxed_completions[k] += out.interval_endpoints[l] * v;
    }
  }
  out.ordering = order_by_value(out.relaxed_completions);
  out.objective = s.objective_value;
  return out;
}

}  // namespace coflow
