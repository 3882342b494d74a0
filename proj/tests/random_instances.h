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

// Small random instances for property tests.

#ifndef COFLOW_TESTS_RANDOM_INSTANCES_H_
#define COFLOW_TESTS_RANDOM_INSTANCES_H_

#include <random>
#include <vector>

#include "coflow/model.h"

namespace coflow::testing {

struct RandomShape {
  int n_ports = 3;
  int n_coflows = 4;
  int max_flows = 4;
  int max_size = 5;
  int max_release = 0;  // zero keeps every release at 0
  bool random_weights = false;
};

inline CoflowInstance random_instance(std::mt19937_64& rng, const RandomShape& shape) {
  std::uniform_int_distribution<int> port(0, shape.n_ports - 1);
  std::uniform_int_distribution<int> flows(1, shape.max_flows);
  std::uniform_int_distribution<int> size(1, shape.max_size);
  std::uniform_int_distribution<int> release(0, shape.max_release);
  std::uniform_real_distribution<double> weight(0.1, 1.0);
  std::vector<Coflow> coflows;
  for (int k = 0; k < shape.n_coflows; ++k) {
    DemandMap d;
    const int m = flows(rng);
    for (int f = 0; f < m; ++f) d[{port(rng), port(rng)}] += size(rng);
    const double r = release(rng);
    coflows.emplace_back(d, r, shape.random_weights ? weight(rng) : 1.0);
  }
  return CoflowInstance(shape.n_ports, std::move(coflows));
}

}  // namespace coflow::testing

#endif  // COFLOW_TESTS_RANDOM_INSTANCES_H_
