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

// Instance interchange format:
//
//   { "n_ports": 2, "capacity": 1.0,
//     "coflows": [ { "release": 0, "weight": 1,
//                    "flows": [ {"src": 0, "dst": 1, "size": 5} ] } ] }

#ifndef COFLOW_INSTANCE_IO_H_
#define COFLOW_INSTANCE_IO_H_

#include <filesystem>

#include "coflow/model.h"
#include "json.hpp"

namespace coflow {

nlohmann::json instance_to_json(const CoflowInstance& instance);
CoflowInstance instance_from_json(const nlohmann::json& j);

CoflowInstance load_instance(const std::filesystem::path& path);
void save_instance(const CoflowInstance& instance,
                   const std::filesystem::path& path);

}  // namespace coflow

#endif  // COFLOW_INSTANCE_IO_H_
