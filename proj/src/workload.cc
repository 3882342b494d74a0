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

#include "coflow/workload.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "coflow/errors.h"

namespace coflow {
namespace {

// Stream tags keep coflow shapes, inter-arrivals and weights independent.
constexpr std::uint64_t kShapeStream = 0x5348415045ULL;
constexpr std::uint64_t kArrivalStream = 0x4152524956ULL;
constexpr std::uint64_t kWeightStream = 0x5745494748ULL;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::mt19937_64 stream(std::uint64_t seed, std::uint64_t tag, std::uint64_t index) {
  return std::mt19937_64(splitmix64(splitmix64(seed ^ tag) + index));
}

// Uniform on {lo..hi} by rejection, independent of the library's
// distribution implementations.
long long uniform_int(std::mt19937_64& g, long long lo, long long hi) {
  const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
  if (span == 0) return lo + static_cast<long long>(g());
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % span;
  std::uint64_t x;
  do {
    x = g();
  } while (x >= limit);
  return lo + static_cast<long long>(x % span);
}

// Uniform on [0, 1) with 53 random bits.
double uniform_unit(std::mt19937_64& g) {
  return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

template <typename T>
T parse_number(const std::string& text, int line, const char* what) {
  const std::string t = trim(text);
  T value{};
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
    throw StructuralError(fmt::format("trace line {}: bad {} '{}'", line, what, t));
  }
  return value;
}

}  // namespace

void SyntheticConfig::validate() const {
  if (n_ports < 1) throw ArgumentError(fmt::format("n_ports must be >= 1, got {}", n_ports));
  if (n_coflows < 1) {
    throw ArgumentError(fmt::format("n_coflows must be >= 1, got {}", n_coflows));
  }
  if (size_min < 1 || size_max < size_min) {
    throw ArgumentError(fmt::format("bad size range [{}, {}]", size_min, size_max));
  }
  if (!zero_release && (!(interarrival_min >= 0) || interarrival_max < interarrival_min)) {
    throw ArgumentError(
        fmt::format("bad inter-arrival range [{}, {}]", interarrival_min, interarrival_max));
  }
}

GeneratedCoflow draw_coflow(const SyntheticConfig& config, int index) {
  config.validate();
  std::mt19937_64 g = stream(config.seed, kShapeStream, static_cast<std::uint64_t>(index));
  const int n = config.n_ports;
  const int pairs = n * n;
  bool sparse = false;
  if (config.kind == WorkloadKind::kCombined) sparse = uniform_int(g, 0, 1) == 0;
  const int width = sparse ? static_cast<int>(uniform_int(g, 1, n))
                           : static_cast<int>(uniform_int(g, n, pairs));
  // Partial Fisher-Yates over all N^2 pairs.
  std::vector<int> cells(pairs);
  std::iota(cells.begin(), cells.end(), 0);
  DemandMap demands;
  for (int i = 0; i < width; ++i) {
    const int j = static_cast<int>(uniform_int(g, i, pairs - 1));
    std::swap(cells[i], cells[j]);
    demands[{cells[i] / n, cells[i] % n}] =
        static_cast<double>(uniform_int(g, config.size_min, config.size_max));
  }
  return {Coflow(std::move(demands)), sparse};
}

CoflowInstance generate(const SyntheticConfig& config) {
  config.validate();
  std::mt19937_64 arrivals = stream(config.seed, kArrivalStream, 0);
  std::vector<Coflow> coflows;
  double release = 0;
  for (int k = 0; k < config.n_coflows; ++k) {
    Coflow c = draw_coflow(config, k).coflow;
    if (!config.zero_release) {
      release += config.interarrival_min +
                 (config.interarrival_max - config.interarrival_min) * uniform_unit(arrivals);
    }
    coflows.emplace_back(c.demands(), release, 1.0);
  }
  return CoflowInstance(config.n_ports, std::move(coflows));
}

std::vector<TraceRecord> parse_trace(std::istream& in) {
  std::string line;
  int number = 0;
  bool header = false;
  std::vector<TraceRecord> out;
  while (std::getline(in, line)) {
    ++number;
    if (trim(line).empty()) continue;
    if (!header) {
      if (trim(line) != "coflow_id,arrival_ms,mappers,reducers") {
        throw StructuralError(fmt::format("trace line {}: unexpected header '{}'", number, line));
      }
      header = true;
      continue;
    }
    const std::vector<std::string> cols = split(line, ',');
    if (cols.size() != 4) {
      throw StructuralError(
          fmt::format("trace line {}: expected 4 columns, found {}", number, cols.size()));
    }
    TraceRecord r;
    r.coflow_id = trim(cols[0]);
    r.arrival_ms = parse_number<long long>(cols[1], number, "arrival");
    if (r.arrival_ms < 0) throw StructuralError(fmt::format("trace line {}: negative arrival", number));
    for (const std::string& m : split(cols[2], ';')) {
      r.mappers.push_back(parse_number<int>(m, number, "mapper rack"));
    }
    for (const std::string& entry : split(cols[3], ';')) {
      const std::vector<std::string> parts = split(entry, ':');
      if (parts.size() != 2) {
        throw StructuralError(fmt::format("trace line {}: bad reducer '{}'", number, entry));
      }
      const int rack = parse_number<int>(parts[0], number, "reducer rack");
      const double mb = parse_number<double>(parts[1], number, "shuffle volume");
      if (!(mb > 0)) {
        throw StructuralError(fmt::format("trace line {}: shuffle volume must be positive", number));
      }
      r.reducers.emplace_back(rack, mb);
    }
    if (r.mappers.empty() || r.reducers.empty()) {
      throw StructuralError(fmt::format("trace line {}: needs a mapper and a reducer", number));
    }
    for (int rack : r.mappers) {
      if (rack < 0) throw StructuralError(fmt::format("trace line {}: negative rack", number));
    }
    for (const auto& [rack, mb] : r.reducers) {
      if (rack < 0) throw StructuralError(fmt::format("trace line {}: negative rack", number));
    }
    out.push_back(std::move(r));
  }
  if (!header) throw StructuralError("trace is empty");
  return out;
}

std::vector<TraceRecord> load_trace(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(fmt::format("cannot open trace {}", path.string()));
  return parse_trace(in);
}

int trace_port_count(const std::vector<TraceRecord>& records) {
  int top = -1;
  for (const TraceRecord& r : records) {
    for (int m : r.mappers) top = std::max(top, m);
    for (const auto& [rack, mb] : r.reducers) top = std::max(top, rack);
  }
  return top + 1;
}

CoflowInstance ingest_trace(const std::vector<TraceRecord>& records, int n_ports,
                            ReleaseMode mode, int min_flows) {
  std::vector<Coflow> coflows;
  for (const TraceRecord& r : records) {
    if (r.mappers.empty()) {
      throw StructuralError(fmt::format("coflow {} has no mappers", r.coflow_id));
    }
    DemandMap d;
    const double share = 1.0 / static_cast<double>(r.mappers.size());
    for (const auto& [reducer, mb] : r.reducers) {
      for (int mapper : r.mappers) {
        if (mapper >= n_ports || reducer >= n_ports) {
          throw StructuralError(fmt::format("coflow {} uses rack {} on a {}-port switch",
                                            r.coflow_id, std::max(mapper, reducer), n_ports));
        }
        d[{mapper, reducer}] += mb * share;
      }
    }
    if (static_cast<int>(d.size()) < min_flows) continue;
    const double release = mode == ReleaseMode::kWithReleases
                               ? static_cast<double>(r.arrival_ms) / 1000.0 / kTraceTimeCompression
                               : 0.0;
    coflows.emplace_back(std::move(d), release, 1.0);
  }
  if (coflows.empty()) {
    throw ArgumentError(fmt::format("no coflow has at least {} flows", min_flows));
  }
  return CoflowInstance(n_ports, std::move(coflows), kTraceLinkCapacity);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  return splitmix64(splitmix64(seed) + index);
}

CoflowInstance assign_weights(const CoflowInstance& instance, WeightMode mode,
                              std::uint64_t seed) {
  std::vector<double> w(instance.num_coflows(), 1.0);
  if (mode == WeightMode::kUniformRandom) {
    std::mt19937_64 g = stream(seed, kWeightStream, 0);
    for (double& v : w) v = 1.0 - uniform_unit(g);
  }
  return instance.with_weights(w);
}

}  // namespace coflow
