// Copyright 2026 The DivBS Authors
//
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

#ifndef DIVBS_ERROR_H_
#define DIVBS_ERROR_H_

#include <cstdint>
#include <stdexcept>
#include <string>

namespace divbs {

// A caller broke a documented precondition (shape mismatch, bad index,
// budget larger than the batch, ...).
class ContractViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// An operation declined to run because it would exceed a configured limit.
class RefusalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A feature or score file could not be decoded. `location` is a byte offset
// for binary files and a 1-based line number for text files.
class LoadError : public std::runtime_error {
 public:
  enum class LocationKind { kByteOffset, kLine };

  LoadError(const std::string& what, LocationKind kind, std::uint64_t location)
      : std::runtime_error(what), kind_(kind), location_(location) {}

  LocationKind kind() const { return kind_; }
  std::uint64_t location() const { return location_; }

 private:
  LocationKind kind_;
  std::uint64_t location_;
};

}  // namespace divbs

#endif  // DIVBS_ERROR_H_
