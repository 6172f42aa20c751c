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

#include <algorithm>
#include <charconv>
#include <cstddef>
#include <numeric>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "cdsqc/errors.hpp"
#include "cdsqc/protocol/types.hpp"
#include "cdsqc/quantum/measurement.hpp"
#include "cdsqc/quantum/register.hpp"
#include "cdsqc/rng.hpp"

namespace cdsqc {

enum class AttackKind {
  none,
  intercept_resend_random_basis,
  intercept_resend_computational,
  bell_pairing,
  semi_honest_alice_substitution,
};

enum class PairingStrategy { adjacent, random };

namespace detail {
inline constexpr NameTable<AttackKind, 5> kAttackKinds{{
    {AttackKind::none, "none"},
    {AttackKind::intercept_resend_random_basis, "intercept-resend"},
    {AttackKind::intercept_resend_computational, "intercept-resend-computational"},
    {AttackKind::bell_pairing, "bell-pairing"},
    {AttackKind::semi_honest_alice_substitution, "semi-honest"},
}};
inline constexpr NameTable<PairingStrategy, 2> kPairings{
    {{PairingStrategy::adjacent, "adjacent"}, {PairingStrategy::random, "random"}}};

inline std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view s, const char* what) {
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    throw ConfigError(std::string("bad ") + what + " '" + std::string(s) + "'");
  }
  return v;
}
}  // namespace detail

inline std::string to_string(AttackKind k) { return detail::name_of(detail::kAttackKinds, k); }
inline std::string to_string(PairingStrategy p) { return detail::name_of(detail::kPairings, p); }
inline AttackKind parse_attack_kind(std::string_view s) { return detail::parse_name(detail::kAttackKinds, s, "attack"); }
inline PairingStrategy parse_pairing(std::string_view s) { return detail::parse_name(detail::kPairings, s, "pairing"); }

/// Eve's strategy. `taps` empty means every quantum link.
struct AttackModel {
  AttackKind kind = AttackKind::none;
  double probability = 1.0;  // per qubit (intercept-resend) or per pair (bell-pairing)
  PairingStrategy pairing = PairingStrategy::adjacent;
  std::vector<Link> taps;

  bool taps_link(Link l) const {
    if (kind == AttackKind::none || kind == AttackKind::semi_honest_alice_substitution) return false;
    return taps.empty() || std::find(taps.begin(), taps.end(), l) != taps.end();
  }

  friend bool operator==(const AttackModel&, const AttackModel&) = default;
};

inline void validate(const AttackModel& m) {
  if (!(m.probability >= 0.0 && m.probability <= 1.0)) throw ConfigError("attack probability must lie in [0, 1]");
}

/// Eve sees the transmitted sequence after decoy insertion, never the
/// private metadata.
struct TapPoint {
  Link link = Link::charlie_to_bob;
};

struct AttackRecord {
  std::size_t position = 0;  // in-flight index
  std::size_t partner = 0;   // bell-pairing partner index (== position otherwise)
  std::string basis;         // "z", "x" or "bell"
  std::string label;

  friend bool operator==(const AttackRecord&, const AttackRecord&) = default;
};

struct AttackLog {
  Link link = Link::charlie_to_bob;
  std::size_t in_flight = 0;
  std::size_t attacked = 0;
  std::vector<AttackRecord> records;
};

/// Draw order: intercept-resend takes bernoulli(p) per qubit (only when
/// p < 1), then below(2) for the basis (random-basis variant), then the
/// measurement draw. bell-pairing shuffles positions first (random
/// strategy), then bernoulli(p) per pair when p < 1, then the measurement.
inline AttackLog apply_attack(const AttackModel& model, TapPoint tap, QubitRegister& reg,
                              std::span<const QubitId> in_flight, SeededRng& rng) {
  validate(model);
  AttackLog log{tap.link, in_flight.size(), 0, {}};
  auto hit = [&] { return model.probability >= 1.0 || rng.bernoulli(model.probability); };
  switch (model.kind) {
    case AttackKind::none: return log;
    case AttackKind::semi_honest_alice_substitution:
      throw ConfigError("semi-honest substitution is an insider scenario, not a link attack");
    case AttackKind::intercept_resend_random_basis:
    case AttackKind::intercept_resend_computational: {
      static const MeasurementBasis z = MeasurementBasis::computational();
      static const MeasurementBasis x = MeasurementBasis::diagonal();
      for (std::size_t i = 0; i < in_flight.size(); ++i) {
        if (!hit()) continue;
        const bool diag = model.kind == AttackKind::intercept_resend_random_basis && rng.below(2) == 1;
        const auto out = reg.measure(diag ? x : z, {in_flight[i]}, rng);
        log.records.push_back({i, i, diag ? "x" : "z", out.label});
        ++log.attacked;
      }
      return log;
    }
    case AttackKind::bell_pairing: {
      static const MeasurementBasis bell = MeasurementBasis::bell();
      std::vector<std::size_t> order(in_flight.size());
      std::iota(order.begin(), order.end(), std::size_t{0});
      if (model.pairing == PairingStrategy::random) rng.shuffle(std::span<std::size_t>(order));
      for (std::size_t k = 0; k + 1 < order.size(); k += 2) {
        if (!hit()) continue;
        const std::size_t a = order[k], b = order[k + 1];
        const auto out = reg.measure(bell, {in_flight[a], in_flight[b]}, rng);
        log.records.push_back({a, b, "bell", out.label});
        log.attacked += 2;
      }
      return log;
    }
  }
  return log;
}

/// Canonical text: "none" or "<kind>:p=<prob>,pairing=<strategy>,taps=<link>+<link>|all".
inline std::string format_attack(const AttackModel& m) {
  if (m.kind == AttackKind::none) return "none";
  std::string s = to_string(m.kind) + ":p=" + detail::format_double(m.probability);
  if (m.kind == AttackKind::bell_pairing) s += ",pairing=" + to_string(m.pairing);
  s += ",taps=";
  if (m.taps.empty()) {
    s += "all";
  } else {
    for (std::size_t i = 0; i < m.taps.size(); ++i) s += (i ? "+" : "") + to_string(m.taps[i]);
  }
  return s;
}

inline std::vector<Link> parse_taps(std::string_view s) {
  std::vector<Link> taps;
  if (s == "all" || s.empty()) return taps;
  std::size_t start = 0;
  while (start <= s.size()) {
    const auto end = std::min(s.find_first_of("+,", start), s.size());
    const Link l = parse_link(s.substr(start, end - start));
    if (std::find(taps.begin(), taps.end(), l) == taps.end()) taps.push_back(l);
    start = end + 1;
  }
  std::sort(taps.begin(), taps.end());
  return taps;
}

inline AttackModel parse_attack(std::string_view text) {
  AttackModel m;
  const auto colon = text.find(':');
  m.kind = parse_attack_kind(text.substr(0, colon));
  if (colon == std::string_view::npos) return m;
  std::string_view rest = text.substr(colon + 1);
  while (!rest.empty()) {
    auto comma = rest.find(',');
    // taps lists use '+', so a comma always starts a new key.
    std::string_view item = rest.substr(0, comma);
    rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
    const auto eq = item.find('=');
    if (eq == std::string_view::npos) throw ConfigError("attack parameter without '=': " + std::string(item));
    const auto key = item.substr(0, eq), val = item.substr(eq + 1);
    if (key == "p") {
      m.probability = detail::parse_double(val, "attack probability");
    } else if (key == "pairing") {
      m.pairing = parse_pairing(val);
    } else if (key == "taps") {
      m.taps = parse_taps(val);
    } else {
      throw ConfigError("unknown attack parameter '" + std::string(key) + "'");
    }
  }
  validate(m);
  return m;
}

}  // namespace cdsqc
