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

#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "cdsqc/adversary/attack.hpp"
#include "cdsqc/protocol/session.hpp"

namespace cdsqc {

struct DetectionRow {
  std::string attack;
  CheckMode check = CheckMode::bb84;
  std::size_t sessions = 0;
  std::size_t aborted = 0;
  std::uint64_t compared = 0;
  std::uint64_t mismatches = 0;

  double abort_rate() const { return sessions ? static_cast<double>(aborted) / static_cast<double>(sessions) : 0.0; }
  double mismatch_rate() const {
    return compared ? static_cast<double>(mismatches) / static_cast<double>(compared) : 0.0;
  }
};

/// Runs `trials` sessions per (attack, check) pair with Eve on the
/// Charlie-to-Bob leg and tallies the checks.
inline std::vector<DetectionRow> detection_report(std::size_t trials, std::size_t n, std::uint64_t seed) {
  const std::vector<std::pair<std::string, CheckMode>> cases = {
      {"none", CheckMode::bb84},
      {"intercept-resend:p=1,taps=charlie_to_bob", CheckMode::bb84},
      {"intercept-resend-computational:p=1,taps=charlie_to_bob", CheckMode::bb84},
      {"none", CheckMode::gv},
      {"bell-pairing:p=1,pairing=adjacent,taps=charlie_to_bob", CheckMode::gv},
      {"bell-pairing:p=1,pairing=random,taps=charlie_to_bob", CheckMode::gv},
  };
  std::vector<DetectionRow> rows;
  for (const auto& [attack_text, mode] : cases) {
    const AttackModel attack = parse_attack(attack_text);
    DetectionRow row{format_attack(attack), mode, 0, 0, 0, 0};
    for (std::size_t i = 0; i < trials; ++i) {
      SessionConfig cfg;
      cfg.protocol = Protocol::cdsqc;
      cfg.subprotocol = mode == CheckMode::gv ? Subprotocol::cl_gv : Subprotocol::cl;
      cfg.n = n;
      cfg.check = mode;
      cfg.seed = seed + i;
      SeededRng rng(cfg.seed);
      const auto t = run_session(cfg, {random_bits(2 * n, rng)}, attack);
      ++row.sessions;
      if (t.result->aborted) ++row.aborted;
      for (const auto& c : t.result->checks) {
        if (c.link != Link::charlie_to_bob) continue;
        row.compared += c.compared;
        row.mismatches += c.mismatches;
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

inline std::string detection_csv(const std::vector<DetectionRow>& rows) {
  std::ostringstream os;
  os << "attack,check,sessions,aborted,abort_rate,compared,mismatches,mismatch_rate\n";
  for (const auto& r : rows) {
    os << '"' << r.attack << "\"," << to_string(r.check) << ',' << r.sessions << ',' << r.aborted << ','
       << detail::format_double(r.abort_rate()) << ',' << r.compared << ',' << r.mismatches << ','
       << detail::format_double(r.mismatch_rate()) << '\n';
  }
  return os.str();
}

}  // namespace cdsqc
