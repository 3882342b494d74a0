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

// Instance sources: seeded synthetic workloads and shuffle-trace ingest.
//
// Synthetic streams are derived per coflow from the seed with splitmix64,
// and all draws go through hand-written integer and real samplers, so a
// seed names the same instance on every platform and standard library.

#ifndef COFLOW_WORKLOAD_H_
#define COFLOW_WORKLOAD_H_

#include <cstdint>
#include <filesystem>
#include <istream>
#include <string>
#include <utility>
#include <vector>

#include "coflow/model.h"

namespace coflow {

enum class WorkloadKind { kDense, kCombined };

struct SyntheticConfig {
  int n_ports = 16;
  int n_coflows = 160;
  WorkloadKind kind = WorkloadKind::kDense;
  int size_min = 1;
  int size_max = 100;
  double interarrival_min = 1;
  double interarrival_max = 100;
  bool zero_release = false;
  std::uint64_t seed = 0;

  // Throws ArgumentError on empty ranges or nonpositive counts.
  void validate() const;
};

struct GeneratedCoflow {
  Coflow coflow;
  bool sparse = false;  // drew its width from {1..N}
};

// Coflow `index` of the workload. Its release is left at zero.
GeneratedCoflow draw_coflow(const SyntheticConfig& config, int index);

// Releases are running sums of inter-arrival draws, starting with the
// first draw, unless zero_release is set.
CoflowInstance generate(const SyntheticConfig& config);

struct TraceRecord {
  std::string coflow_id;
  long long arrival_ms = 0;
  std::vector<int> mappers;
  std::vector<std::pair<int, double>> reducers;  // (rack, megabytes)
};

// CSV with header coflow_id,arrival_ms,mappers,reducers. Mappers are
// ';'-separated racks, reducers ';'-separated rack:megabytes entries.
// Throws StructuralError with the offending line number.
std::vector<TraceRecord> parse_trace(std::istream& in);
std::vector<TraceRecord> load_trace(const std::filesystem::path& path);

// One more than the largest rack index in the records.
int trace_port_count(const std::vector<TraceRecord>& records);

enum class ReleaseMode { kWithReleases, kZeroReleases };

// Megabytes per second on every link.
inline constexpr double kTraceLinkCapacity = 128;
// Arrival times are compressed by this factor.
inline constexpr double kTraceTimeCompression = 10;

// Each reducer's volume is split evenly over the coflow's mappers. Coflows
// with fewer than `min_flows` nonzero flows are dropped; an empty result is
// an ArgumentError, a rack outside the switch a StructuralError.
CoflowInstance ingest_trace(const std::vector<TraceRecord>& records, int n_ports,
                            ReleaseMode mode, int min_flows);

enum class WeightMode { kUnit, kUniformRandom };

// Random weights are drawn from (0, 1].
// Seed for the `index`-th repetition of an experiment seeded with `seed`.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

CoflowInstance assign_weights(const CoflowInstance& instance, WeightMode mode,
                              std::uint64_t seed = 0);

}  // namespace coflow

#endif  // COFLOW_WORKLOAD_H_
