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

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cdsqc/adversary/attack.hpp"
#include "cdsqc/adversary/semi_honest.hpp"
#include "cdsqc/catalog/channel_text.hpp"
#include "cdsqc/io/transcript_io.hpp"
#include "cdsqc/metrics/detection.hpp"
#include "cdsqc/metrics/efficiency.hpp"
#include "cdsqc/protocol/session.hpp"

namespace cdsqc {

inline constexpr int kExitOk = 0;
inline constexpr int kExitAborted = 1;
inline constexpr int kExitConfig = 2;

/// "0x1F", "1f" (hex) or "0b0110" (binary) to exactly `width` bits. Extra
/// leading digits must be zero; short input is zero-padded on the left.
inline std::string message_bits(std::string_view text, std::size_t width) {
  std::string bits;
  if (text.starts_with("0b") || text.starts_with("0B")) {
    bits = std::string(text.substr(2));
    check_bits(bits);
  } else {
    if (text.starts_with("0x") || text.starts_with("0X")) text.remove_prefix(2);
    for (char c : text) {
      int v = 0;
      if (c >= '0' && c <= '9') v = c - '0';
      else if (c >= 'a' && c <= 'f') v = c - 'a' + 10;
      else if (c >= 'A' && c <= 'F') v = c - 'A' + 10;
      else throw ConfigError("message is not hexadecimal: '" + std::string(text) + "'");
      for (int b = 3; b >= 0; --b) bits += ((v >> b) & 1) ? '1' : '0';
    }
  }
  if (bits.empty()) throw ConfigError("empty message");
  if (bits.size() > width) {
    const auto extra = bits.size() - width;
    if (bits.find('1') < extra) {
      throw ConfigError("message does not fit in " + std::to_string(width) + " bits");
    }
    bits.erase(0, extra);
  }
  return std::string(width - bits.size(), '0') + bits;
}

inline std::string bits_to_hex(const std::string& bits) {
  static const char* digits = "0123456789abcdef";
  const std::string padded = std::string((4 - bits.size() % 4) % 4, '0') + bits;
  std::string hex;
  for (std::size_t i = 0; i < padded.size(); i += 4) hex += digits[bits_to_index(std::string_view(padded).substr(i, 4))];
  return hex;
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot write '" + path + "'");
  f << content;
}

inline std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

/// "t.json" with index 3 -> "t.3.json".
inline std::string indexed_path(const std::string& path, std::size_t i) {
  std::filesystem::path p(path);
  const auto stem = p.stem().string(), ext = p.extension().string();
  return (p.parent_path() / (stem + "." + std::to_string(i) + ext)).string();
}

/// Re-runs a stored session from its header.
inline Transcript regenerate(const Transcript& stored) {
  const SessionConfig cfg = parse_config(stored.header.config, stored.header.seed);
  return run_session(cfg, stored.header.messages, parse_attack(stored.header.adversary));
}

struct RunOptions {
  std::string protocol = "cdsqc";
  std::string subprotocol = "cl";
  std::string channel = "bell";
  std::size_t n = 2;
  std::string check = "bb84";
  double decoy_fraction = 0.5;
  double error_threshold = 0.0;
  std::size_t max_attempts = 1;
  std::uint64_t seed = 0;
  std::string attack = "none";
  double attack_prob = 1.0;
  std::string pairing = "adjacent";
  std::vector<std::string> taps;
  std::optional<std::string> message;
  std::optional<std::string> message_back;
  std::optional<std::string> out;
  std::optional<std::string> csv;
  std::string convention = "both";
  std::size_t repeat = 1;
};

inline SessionConfig config_from(const RunOptions& o, std::uint64_t seed) {
  SessionConfig c;
  c.protocol = parse_protocol(o.protocol);
  c.subprotocol = parse_subprotocol(o.subprotocol);
  c.channel = parse_channel(o.channel);
  c.n = o.n;
  c.check = parse_check_mode(o.check);
  c.decoy_fraction = o.decoy_fraction;
  c.error_threshold = o.error_threshold;
  c.max_attempts = o.max_attempts;
  c.seed = seed;
  validate(c);
  return c;
}

inline AttackModel attack_from(const RunOptions& o) {
  AttackModel m;
  m.kind = parse_attack_kind(o.attack);
  m.probability = o.attack_prob;
  m.pairing = parse_pairing(o.pairing);
  std::string joined;
  for (const auto& t : o.taps) joined += (joined.empty() ? "" : "+") + t;
  m.taps = parse_taps(joined);
  validate(m);
  return m;
}

inline std::vector<Convention> conventions_from(const std::string& s) {
  if (s == "both") return {Convention::without_decoys, Convention::with_decoys};
  return {parse_convention(s)};
}

inline int run_command(const RunOptions& o, std::ostream& out) {
  const AttackModel attack = attack_from(o);
  const auto conventions = conventions_from(o.convention);
  std::string csv = "index,seed,aborted,attempts,convention,c,q,b,q_decoy,eta1,eta2\n";
  int code = kExitOk;
  for (std::size_t i = 0; i < o.repeat; ++i) {
    const std::uint64_t seed = o.seed + i;
    const SessionConfig cfg = config_from(o, seed);
    const SessionPlan plan = plan_session(cfg);
    std::vector<std::string> messages;
    SeededRng msg_rng(seed ^ 0x6d657373616765ULL);
    for (std::size_t k = 0; k < plan.lanes.size(); ++k) {
      const auto& given = k == 0 ? o.message : o.message_back;
      const std::size_t width = plan.capacity.at(plan.lanes[k]);
      messages.push_back(given ? message_bits(*given, width) : random_bits(width, msg_rng));
    }
    if (o.message_back && plan.lanes.size() < 2) throw ConfigError("--message-back needs --protocol cbdsqc");
    const Transcript t = run_session(cfg, messages, attack);
    const auto& r = *t.result;
    if (o.out) write_file(o.repeat > 1 ? indexed_path(*o.out, i) : *o.out, serialize_transcript(t));
    out << "session " << i << " seed=" << seed << " " << (r.aborted ? "ABORTED" : "delivered") << " attempts=" << r.attempts
        << '\n';
    for (std::size_t k = 0; k < plan.lanes.size(); ++k) {
      out << "  " << to_string(plan.lanes[k]) << ": sent=" << bits_to_hex(messages[k]);
      if (!r.aborted) out << " received=" << bits_to_hex(r.delivered[k]) << (r.delivered[k] == messages[k] ? " (exact)" : " (differs)");
      out << '\n';
    }
    for (const auto& c : r.checks) {
      out << "  check " << to_string(c.link) << " " << to_string(c.mode) << ": " << c.mismatches << "/" << c.compared
          << " error_rate=" << detail::format_double(c.error_rate) << '\n';
    }
    for (Convention conv : conventions) {
      const auto e = efficiency(count_resources(t, conv));
      out << "  " << efficiency_text(e);
      csv += std::to_string(i) + "," + std::to_string(seed) + "," + (r.aborted ? "1" : "0") + "," +
             std::to_string(r.attempts) + "," + to_string(conv) + "," + std::to_string(e.counts.c) + "," +
             std::to_string(e.counts.q) + "," + std::to_string(e.counts.b) + "," + std::to_string(e.counts.q_decoy) +
             "," + format_percent(e.eta1) + "," + format_percent(e.eta2) + "\n";
    }
    if (r.aborted) code = kExitAborted;
  }
  if (o.csv) write_file(*o.csv, csv);
  return code;
}

inline int replay_command(const std::string& path, std::ostream& out) {
  const std::string doc = read_file(path);
  const Transcript stored = parse_transcript(doc);
  const std::string again = serialize_transcript(regenerate(stored));
  if (again != doc) {
    out << "replay MISMATCH: regenerated transcript differs from " << path << '\n';
    return kExitAborted;
  }
  out << "replay OK: " << stored.events.size() << " events reproduced byte for byte\n";
  for (Convention conv : {Convention::without_decoys, Convention::with_decoys})
    out << "  " << efficiency_text(efficiency(count_resources(stored, conv)));
  return kExitOk;
}

/// Entry point; exit codes 0 ok, 1 abort or replay mismatch, 2 bad input.
inline int cli_main(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Controlled deterministic secure quantum communication simulator", "cdsqc"};
  app.require_subcommand(1);

  RunOptions ro;
  auto* run = app.add_subcommand("run", "run protocol sessions");
  run->add_option("--protocol", ro.protocol, "cdsqc | cbdsqc | cdsqc_alt2 | cdsqc_alt3")->capture_default_str();
  run->add_option("--subprotocol", ro.subprotocol, "pp | cl | dll | pp_gv | cl_gv | dll_gv")->capture_default_str();
  run->add_option("--channel", ro.channel, "bell | ghz-like[:...] | dense:state=,p= | swap:s=,m=,l= | controlled:... | controlled5:... | cat:m=")
      ->capture_default_str();
  run->add_option("--n", ro.n, "number of blocks")->capture_default_str();
  run->add_option("--check", ro.check, "bb84 | gv")->capture_default_str();
  run->add_option("--decoy-fraction", ro.decoy_fraction, "fraction of each transmitted sequence that is decoys")
      ->capture_default_str();
  run->add_option("--error-threshold", ro.error_threshold, "abort when a check error rate exceeds this")
      ->capture_default_str();
  run->add_option("--max-attempts", ro.max_attempts, "restarts allowed after an abort")->capture_default_str();
  run->add_option("--seed", ro.seed, "base seed")->capture_default_str();
  run->add_option("--attack", ro.attack, "none | intercept-resend | intercept-resend-computational | bell-pairing")
      ->capture_default_str();
  run->add_option("--attack-prob", ro.attack_prob, "per-qubit (per-pair) attack probability")->capture_default_str();
  run->add_option("--pairing", ro.pairing, "bell-pairing guess: adjacent | random")->capture_default_str();
  run->add_option("--tap", ro.taps, "tapped link (repeatable); default all");
  run->add_option("--message", ro.message, "Alice's message, hex or 0b-binary; random if omitted");
  run->add_option("--message-back", ro.message_back, "Bob's message (cbdsqc)");
  run->add_option("--out", ro.out, "transcript file");
  run->add_option("--csv", ro.csv, "efficiency CSV file");
  run->add_option("--convention", ro.convention, "with-decoys | without-decoys | both")->capture_default_str();
  run->add_option("--repeat", ro.repeat, "sessions with seeds seed, seed+1, ...")->capture_default_str()->check(
      CLI::PositiveNumber);

  auto* report = app.add_subcommand("report", "efficiency and detection reports");
  report->require_subcommand(1);
  std::optional<std::string> report_csv;
  std::size_t t1_n = 8;
  std::uint64_t report_seed = 1;
  auto* table1 = report->add_subcommand("table1", "efficiency comparison table");
  table1->add_option("--n", t1_n, "blocks per live session")->capture_default_str();
  table1->add_option("--seed", report_seed, "seed")->capture_default_str();
  table1->add_option("--csv", report_csv, "also write CSV here");
  std::size_t trials = 200, det_n = 16;
  auto* detection = report->add_subcommand("detection", "abort and mismatch rates under attack");
  detection->add_option("--trials", trials, "sessions per row")->capture_default_str();
  detection->add_option("--n", det_n, "blocks per session")->capture_default_str();
  detection->add_option("--seed", report_seed, "base seed")->capture_default_str();
  detection->add_option("--csv", report_csv, "also write CSV here");
  std::string eff_path, eff_conv = "both";
  auto* eff = report->add_subcommand("efficiency", "resource counts of a stored transcript");
  eff->add_option("--transcript", eff_path, "transcript file")->required();
  eff->add_option("--convention", eff_conv, "with-decoys | without-decoys | both")->capture_default_str();

  std::string replay_path;
  auto* replay = app.add_subcommand("replay", "re-run a transcript and compare byte for byte");
  replay->add_option("file", replay_path, "transcript file")->required();

  std::string flow = "proposed";
  std::size_t symbols = 10000;
  std::uint64_t scenario_seed = 0;
  auto* scenario = app.add_subcommand("semi-honest", "insider scenario: Alice bypassing Charlie");
  scenario->add_option("--flow", flow, "hh-style | proposed")->capture_default_str();
  scenario->add_option("--symbols", symbols, "2-bit symbols sent")->capture_default_str();
  scenario->add_option("--seed", scenario_seed, "seed")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (run->parsed()) return run_command(ro, out);
    if (table1->parsed()) {
      const auto rows = table1_reproduce(t1_n, report_seed);
      out << table1_text(rows);
      if (report_csv) write_file(*report_csv, table1_csv(rows));
      return kExitOk;
    }
    if (detection->parsed()) {
      const auto rows = detection_report(trials, det_n, report_seed);
      out << detection_csv(rows);
      if (report_csv) write_file(*report_csv, detection_csv(rows));
      return kExitOk;
    }
    if (eff->parsed()) {
      const Transcript t = parse_transcript(read_file(eff_path));
      for (Convention conv : conventions_from(eff_conv)) out << efficiency_text(efficiency(count_resources(t, conv)));
      return kExitOk;
    }
    if (replay->parsed()) return replay_command(replay_path, out);
    if (scenario->parsed()) {
      const auto r = run_semi_honest_scenario(parse_flow(flow), symbols, scenario_seed);
      out << "flow=" << to_string(parse_flow(flow)) << " symbols=" << r.symbols << " recovered_before_disclosure="
          << r.correct << " accuracy=" << detail::format_double(r.accuracy())
          << " control_bypassed=" << (r.control_bypassed ? "true" : "false") << '\n';
      return kExitOk;
    }
  } catch (const std::exception& e) {
    err << "cdsqc: " << e.what() << '\n';
    return kExitConfig;
  }
  return kExitConfig;
}

}  // namespace cdsqc
