// Copyright 2026 The cdsqc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "cdsqc/protocol/types.hpp"

namespace cdsqc {

struct CheckDetail {
  std::size_t decoy = 0;    // bb84: decoy index; gv: pair index
  std::string prepared;     // "0", "1", "+", "-" or "psi+"
  std::string measured;     // receiver's outcome label
  bool compared = false;    // bb84: bases matched; gv: always
  bool mismatch = false;

  friend bool operator==(const CheckDetail&, const CheckDetail&) = default;
};

struct CheckReport {
  Link link = Link::charlie_to_alice;
  CheckMode mode = CheckMode::bb84;
  std::size_t compared = 0;
  std::size_t mismatches = 0;
  double error_rate = 0.0;
  std::vector<CheckDetail> detail;

  friend bool operator==(const CheckReport&, const CheckReport&) = default;
};

inline double rate_of(std::size_t mismatches, std::size_t compared) {
  return compared == 0 ? 0.0 : static_cast<double>(mismatches) / static_cast<double>(compared);
}

}  // namespace cdsqc
