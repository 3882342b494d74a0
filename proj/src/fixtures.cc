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

namespace coflow {

CoflowInstance diagonal_unit_fixture() {
  return CoflowInstance(2, {Coflow({{{0, 0}, 1.0}, {{1, 1}, 1.0}}),
                            Coflow({{{0, 0}, 1.0}}),
                            Coflow({{{1, 1}, 1.0}})});
}

CoflowInstance diagonal_uneven_fixture() {
  return CoflowInstance(2, {Coflow({{{0, 0}, 2.0}, {{1, 1}, 2.0}}),
                            Coflow({{{0, 0}, 3.0}}),
                            Coflow({{{1, 1}, 3.0}})});
}

CoflowInstance staggered_release_fixture() {
  return CoflowInstance(2, {Coflow({{{0, 0}, 1.0}}, 0.0),
                            Coflow({{{0, 1}, 2.0}}, 1.0),
                            Coflow({{{1, 0}, 2.0}}, 1.0),
                            Coflow({{{1, 1}, 2.0}}, 1.0)});
}

CoflowInstance counterexample_fixture() {
  return CoflowInstance(
      3, {Coflow({{{0, 0}, 1.0}, {{0, 1}, 1.0}, {{1, 0}, 1.0}, {{1, 1}, 1.0}}, 0.0, 10.0),
          Coflow({{{0, 2}, 1.0}, {{1, 2}, 1.0}}, 0.0, 1.0)});
}

}  // namespace coflow
