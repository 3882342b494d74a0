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

#ifndef COFLOW_ERRORS_H_
#define COFLOW_ERRORS_H_

#include <stdexcept>
#include <string>

namespace coflow {

// Malformed input: bad indices, invalid matrices, overlapping segments.
class StructuralError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A well-formed value outside an operation's precondition.
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Raised by the exact oracle when an instance exceeds its size limits.
class RefusalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An invariant that the construction guarantees was found broken.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace coflow

#endif  // COFLOW_ERRORS_H_
