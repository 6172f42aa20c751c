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

#include <boost/rational.hpp>

#include "cdsqc/catalog/channel_text.hpp"
#include "cdsqc/errors.hpp"
#include "cdsqc/protocol/session.hpp"
#include "cdsqc/protocol/transcript.hpp"

namespace cdsqc {

using Ratio = boost::rational<std::int64_t>;

enum class Convention { without_decoys, with_decoys };

inline std::string to_string(Convention c) {
  return c == Convention::with_decoys ? "with-decoys" : "without-decoys";
}

inline Convention parse_convention(std::string_view s) {
  if (s == "with-decoys" || s == "with_decoys") return Convention::with_decoys;
  if (s == "without-decoys" || s == "without_decoys") return Convention::without_decoys;
  throw ConfigError("unknown convention '" + std::string(s) + "'");
}

struct ResourceCount {
  std::uint64_t c = 0;
  std::uint64_t q = 0;
  std::uint64_t b = 0;
  std::uint64_t q_decoy = 0;
  Convention convention = Convention::without_decoys;

  friend bool operator==(const ResourceCount&, const ResourceCount&) = default;
};

struct EfficiencyReport {
  std::string label;
  ResourceCount counts;
  Ratio eta1;
  Ratio eta2;
};

/// Counts straight from the event log. Check traffic (decoy positions,
/// comparison results) never enters b.
inline ResourceCount count_resources(const Transcript& t, Convention conv) {
  if (!t.complete()) throw ConfigError("transcript is incomplete (no result record)");
  ResourceCount r;
  r.convention = conv;
  for (const auto& e : t.events) {
    switch (e.kind) {
      case EventKind::prepare_resource:
      case EventKind::retain_controller: r.q += e.qubit_cost; break;
      case EventKind::prepare_decoys:
        if (conv == Convention::with_decoys) {
          r.q += e.qubit_cost;
          r.q_decoy += e.qubit_cost;
        }
        break;
      case EventKind::encode: r.c += e.payload.at("bits").get<std::uint64_t>(); break;
      case EventKind::disclose_control: r.b += e.classical_bit_cost; break;
      default: break;
    }
  }
  return r;
}

inline EfficiencyReport efficiency(const ResourceCount& counts, std::string label = {}) {
  if (counts.q == 0) throw ConfigError("efficiency undefined: q = 0");
  EfficiencyReport rep;
  rep.label = std::move(label);
  rep.counts = counts;
  rep.eta1 = Ratio(static_cast<std::int64_t>(counts.c), static_cast<std::int64_t>(counts.q));
  rep.eta2 = Ratio(static_cast<std::int64_t>(counts.c), static_cast<std::int64_t>(counts.q + counts.b));
  return rep;
}

/// Percent with two decimals, round half up, trailing zeros dropped:
/// 1 -> "100", 2/3 -> "66.67", 2/5 -> "40".
inline std::string format_percent(const Ratio& r) {
  if (r < 0) throw ConfigError("negative ratio");
  const std::int64_t hundredths = (r.numerator() * 20000 + r.denominator()) / (2 * r.denominator());
  std::string s = std::to_string(hundredths / 100);
  const std::int64_t frac = hundredths % 100;
  if (frac != 0) {
    s += '.';
    s += static_cast<char>('0' + frac / 10);
    if (frac % 10 != 0) s += static_cast<char>('0' + frac % 10);
  }
  return s;
}

inline double to_double(const Ratio& r) { return boost::rational_cast<double>(r); }

/// 2m / (5m + 1): eta2 of the cat family with decoys counted, one block.
inline Ratio cat_asymptotic(std::int64_t m) {
  if (m < 1) throw ConfigError("cat_asymptotic requires m >= 1");
  return Ratio(2 * m, 5 * m + 1);
}

inline constexpr Ratio kCatLimit{2, 5};

struct Table1Row {
  std::string label;
  std::string source;
  EfficiencyReport without_decoys;
  EfficiencyReport with_decoys;
};

namespace detail {

inline Transcript honest_run(const std::string& config_text, std::uint64_t seed) {
  const SessionConfig cfg = parse_config(config_text, seed);
  const SessionPlan plan = plan_session(cfg);
  SeededRng rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::vector<std::string> messages;
  for (Lane l : plan.lanes) messages.push_back(random_bits(plan.capacity.at(l), rng));
  Transcript t = run_session(cfg, messages);
  if (t.result->aborted || t.result->delivered != messages) {
    throw ProtocolError("honest reference run failed for " + config_text);
  }
  return t;
}

inline Table1Row live_row(std::string label, const std::string& config_text, std::uint64_t seed) {
  const Transcript t = honest_run(config_text, seed);
  return {label, "live n=" + std::to_string(parse_config(config_text).n),
          efficiency(count_resources(t, Convention::without_decoys), label),
          efficiency(count_resources(t, Convention::with_decoys), label)};
}

inline std::string cat_config(std::size_t m) {
  return "protocol=cdsqc_alt3;subprotocol=cl;channel=cat:m=" + std::to_string(m) +
         ";n=1;check=bb84;decoy_fraction=0.5;error_threshold=0;max_attempts=1";
}

/// Per-m slope of the cat-family counts, fitted on m = 1, 2 and checked
/// on m = 3. The m -> infinity ratios are the slope ratios.
inline ResourceCount cat_slope(Convention conv, std::uint64_t seed) {
  std::vector<ResourceCount> at;
  for (std::size_t m = 1; m <= 3; ++m) at.push_back(count_resources(honest_run(cat_config(m), seed), conv));
  auto slope = [](std::uint64_t x1, std::uint64_t x2) { return static_cast<std::int64_t>(x2) - static_cast<std::int64_t>(x1); };
  const std::int64_t sc = slope(at[0].c, at[1].c), sq = slope(at[0].q, at[1].q), sb = slope(at[0].b, at[1].b);
  auto affine = [](std::uint64_t x1, std::int64_t s) { return static_cast<std::int64_t>(x1) + 2 * s; };
  if (affine(at[0].c, sc) != static_cast<std::int64_t>(at[2].c) ||
      affine(at[0].q, sq) != static_cast<std::int64_t>(at[2].q) ||
      affine(at[0].b, sb) != static_cast<std::int64_t>(at[2].b) || sc < 0 || sq <= 0 || sb < 0) {
    throw ProtocolError("cat-family counts are not affine in m");
  }
  return {static_cast<std::uint64_t>(sc), static_cast<std::uint64_t>(sq), static_cast<std::uint64_t>(sb), 0, conv};
}

}  // namespace detail

/// HH constants per the comparison: c = 2, q = 6 (12 with decoys), b = 3.
inline Table1Row hh_row() {
  const std::string label = "HH";
  return {label, "constant", efficiency({2, 6, 3, 0, Convention::without_decoys}, label),
          efficiency({2, 12, 3, 6, Convention::with_decoys}, label)};
}

/// The comparison table; simulator rows come from live honest transcripts.
inline std::vector<Table1Row> table1_reproduce(std::size_t n = 8, std::uint64_t seed = 1) {
  const std::string tail = ";n=" + std::to_string(n) + ";check=bb84;decoy_fraction=0.5;error_threshold=0;max_attempts=1";
  std::vector<Table1Row> rows;
  rows.push_back(hh_row());
  rows.push_back(detail::live_row("proposed CDSQC (unidirectional, Bell states)",
                                  "protocol=cdsqc;subprotocol=cl;channel=bell" + tail, seed));
  rows.push_back(detail::live_row("proposed CBDSQC (bidirectional, Bell states)",
                                  "protocol=cbdsqc;subprotocol=cl;channel=bell" + tail, seed));
  rows.push_back(detail::live_row("Alternative 3 (unidirectional, Bell states)",
                                  "protocol=cdsqc_alt3;subprotocol=cl;channel=ghz-like" + tail, seed));
  const std::string cat_label = "Alternative 3 ((2m+1)-qubit states, m>>1)";
  rows.push_back({cat_label, "limit of live m=1,2,3",
                  efficiency(detail::cat_slope(Convention::without_decoys, seed), cat_label),
                  efficiency(detail::cat_slope(Convention::with_decoys, seed), cat_label)});
  return rows;
}

inline std::string table1_csv(const std::vector<Table1Row>& rows) {
  std::ostringstream os;
  os << "protocol,source,eta1_without_decoys,eta2_without_decoys,eta1_with_decoys,eta2_with_decoys,"
        "c,q_without_decoys,q_with_decoys,b\n";
  for (const auto& r : rows) {
    os << '"' << r.label << "\"," << r.source << ',' << format_percent(r.without_decoys.eta1) << ','
       << format_percent(r.without_decoys.eta2) << ',' << format_percent(r.with_decoys.eta1) << ','
       << format_percent(r.with_decoys.eta2) << ',' << r.with_decoys.counts.c << ','
       << r.without_decoys.counts.q << ',' << r.with_decoys.counts.q << ',' << r.with_decoys.counts.b << '\n';
  }
  return os.str();
}

inline std::string table1_text(const std::vector<Table1Row>& rows) {
  std::size_t w = 8;
  for (const auto& r : rows) w = std::max(w, r.label.size());
  std::ostringstream os;
  auto cell = [&](const std::string& s) {
    os << std::string(s.size() < 10 ? 10 - s.size() : 0, ' ') << s;
  };
  os << std::string(w, ' ') << "  " << "      without decoys         with decoys\n";
  os << "protocol" << std::string(w - 8, ' ') << "  ";
  for (const char* h : {"eta1", "eta2", "eta1", "eta2"}) cell(h);
  os << "  source\n";
  for (const auto& r : rows) {
    os << r.label << std::string(w - r.label.size(), ' ') << "  ";
    for (const auto* e : {&r.without_decoys, &r.with_decoys}) {
      cell(format_percent(e->eta1) + "%");
      cell(format_percent(e->eta2) + "%");
    }
    os << "  " << r.source << '\n';
  }
  return os.str();
}

inline std::string efficiency_text(const EfficiencyReport& e) {
  std::ostringstream os;
  os << to_string(e.counts.convention) << ": c=" << e.counts.c << " q=" << e.counts.q << " b=" << e.counts.b
     << " q_decoy=" << e.counts.q_decoy << " eta1=" << e.eta1.numerator() << '/' << e.eta1.denominator() << " ("
     << format_percent(e.eta1) << "%) eta2=" << e.eta2.numerator() << '/' << e.eta2.denominator() << " ("
     << format_percent(e.eta2) << "%)\n";
  return os.str();
}

}  // namespace cdsqc
