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
#include <numeric>
#include <vector>

#include "coflow/errors.h"
#include "coflow/schedulers.h"
#include "coflow/sim.h"

namespace coflow {

// Rates are recomputed at every release and flow completion. Coflows are
// visited by remaining bottleneck; each gets the rates that finish all of
// its flows together given what earlier coflows left. A coflow needing a
// port that is already full gets nothing this round. Leftover capacity then
// goes, input by input, to flows in the same coflow order.
Schedule varys(const CoflowInstance& instance) {
  FluidExecutor exec(instance);
  const int n = instance.n_ports();
  const double cap = instance.capacity();
  const double empty = 1e-12 * cap;
  const int k_count = static_cast<int>(instance.num_coflows());
  std::vector<double> rates(exec.num_flows());

  while (!exec.done()) {
    std::vector<int> open;
    std::vector<double> bottleneck(k_count, 0.0);
    for (int k = 0; k < k_count; ++k) {
      if (exec.coflow_done(k) || !exec.released(k)) continue;
      std::vector<double> src(n, 0.0), dst(n, 0.0);
      for (std::size_t f : exec.flows_of(k)) {
        src[exec.key(f).src] += exec.remaining(f);
        dst[exec.key(f).dst] += exec.remaining(f);
      }
      bottleneck[k] = std::max(std::ranges::max(src), std::ranges::max(dst));
      open.push_back(k);
    }
    std::ranges::stable_sort(open, [&](int a, int b) { return bottleneck[a] < bottleneck[b]; });

    std::ranges::fill(rates, 0.0);
    std::vector<double> src_left(n, cap), dst_left(n, cap);
    for (int k : open) {
      std::vector<double> src(n, 0.0), dst(n, 0.0);
      for (std::size_t f : exec.flows_of(k)) {
        src[exec.key(f).src] += exec.remaining(f);
        dst[exec.key(f).dst] += exec.remaining(f);
      }
      double gamma = 0;
      bool blocked = false;
      for (int p = 0; p < n; ++p) {
        if (src[p] > 0) {
          blocked |= src_left[p] <= empty;
          gamma = std::max(gamma, src[p] / src_left[p]);
        }
        if (dst[p] > 0) {
          blocked |= dst_left[p] <= empty;
          gamma = std::max(gamma, dst[p] / dst_left[p]);
        }
      }
      if (blocked) continue;
      for (std::size_t f : exec.flows_of(k)) {
        if (exec.flow_done(f)) continue;
        const FlowKey& key = exec.key(f);
        rates[f] = exec.remaining(f) / gamma;
        src_left[key.src] = std::max(0.0, src_left[key.src] - rates[f]);
        dst_left[key.dst] = std::max(0.0, dst_left[key.dst] - rates[f]);
      }
    }
    for (int s = 0; s < n; ++s) {
      for (int k : open) {
        for (std::size_t f : exec.flows_of(k)) {
          const FlowKey& key = exec.key(f);
          if (key.src != s || exec.flow_done(f)) continue;
          const double extra = std::min(src_left[s], dst_left[key.dst]);
          if (extra <= empty) continue;
          rates[f] += extra;
          src_left[s] -= extra;
          dst_left[key.dst] -= extra;
        }
      }
    }
    const std::optional<double> t = exec.next_event(rates);
    if (!t) throw InternalError("varys stalled with unfinished flows");
    exec.advance(rates, *t);
  }
  return exec.finish();
}

}  // namespace coflow
