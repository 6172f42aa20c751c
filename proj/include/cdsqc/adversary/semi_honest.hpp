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

#include <array>
#include <cstdint>
#include <string>

#include "cdsqc/catalog/dense_coding.hpp"
#include "cdsqc/errors.hpp"
#include "cdsqc/protocol/session.hpp"

namespace cdsqc {

enum class SemiHonestFlow { hh_style_alice_prepares, proposed_charlie_prepares };

inline std::string to_string(SemiHonestFlow f) {
  return f == SemiHonestFlow::hh_style_alice_prepares ? "hh-style" : "proposed";
}

inline SemiHonestFlow parse_flow(std::string_view s) {
  if (s == "hh-style" || s == "hh_style_alice_prepares") return SemiHonestFlow::hh_style_alice_prepares;
  if (s == "proposed" || s == "proposed_charlie_prepares") return SemiHonestFlow::proposed_charlie_prepares;
  throw ConfigError("unknown semi-honest flow '" + std::string(s) + "'");
}

struct SemiHonestOutcome {
  bool control_bypassed = false;
  std::size_t symbols = 0;
  std::size_t correct = 0;  // symbols Bob recovered before any disclosure
  Transcript evidence;

  double accuracy() const { return symbols ? static_cast<double>(correct) / static_cast<double>(symbols) : 0.0; }
};

namespace detail {

inline std::size_t count_correct_symbols(const std::string& sent, const std::string& got, std::size_t width) {
  std::size_t ok = 0;
  for (std::size_t i = 0; i + width <= sent.size(); i += width)
    if (sent.compare(i, width, got, i, width) == 0) ++ok;
  return ok;
}

/// Alice, not Charlie, prepares the channel: a Bell pair for herself and
/// Bob plus a separable |0> handed to Charlie in place of his share.
inline SemiHonestOutcome hh_style(std::size_t symbols, std::uint64_t seed) {
  SeededRng rng(seed);
  QubitRegister reg;
  Transcript t;
  t.header.seed = seed;
  t.header.config = "flow=hh-style;symbols=" + std::to_string(symbols);
  t.header.adversary = "semi-honest:p=1,taps=all";
  const std::string message = random_bits(2 * symbols, rng);
  t.header.messages = {message};
  const DenseCodingTable table = bell_table();
  std::vector<std::array<QubitId, 2>> pairs;
  std::vector<QubitId> charlie;
  for (std::size_t i = 0; i < symbols; ++i) {
    const auto ab = reg.add(make_bell(BellState::psi_plus));
    pairs.push_back({ab[0], ab[1]});
    charlie.push_back(reg.add(make_qubit("0"))[0]);
  }
  t.append(Actor::alice, EventKind::prepare_resource,
           {{"blocks", symbols}, {"channel", "bell+separable"}, {"qubits_per_block", 3}}, 3 * symbols);
  t.append(Actor::alice, EventKind::transmit, {{"link", "alice_to_charlie"}, {"sequence", "separable"}, {"length", symbols}});
  t.append(Actor::alice, EventKind::transmit, {{"link", to_string(Link::alice_to_bob)}, {"sequence", "retained"}, {"length", symbols}});
  for (std::size_t i = 0; i < symbols; ++i)
    reg.apply(table.ops.at(bits_to_index(std::string_view(message).substr(2 * i, 2))).gate, std::array<QubitId, 1>{pairs[i][0]});
  t.append(Actor::alice, EventKind::encode, {{"lane", to_string(Lane::alice_to_bob)}, {"units", symbols}, {"bits", 2 * symbols}});
  t.append(Actor::alice, EventKind::transmit, {{"link", to_string(Link::alice_to_bob)}, {"sequence", "encoded"}, {"length", symbols}});
  std::string got;
  for (std::size_t i = 0; i < symbols; ++i) {
    const auto out = reg.measure(table.decode_basis, {pairs[i][0], pairs[i][1]}, rng);
    got += index_to_bits(table.decode_label(out.label).value_or(0), 2);
  }
  t.append(Actor::bob, EventKind::decode,
           {{"lane", to_string(Lane::alice_to_bob)}, {"units", symbols}, {"bits", got.size()}, {"pre_disclosure", true}});
  std::string flags;
  for (auto q : charlie) flags += reg.measure(MeasurementBasis::computational(), {q}, rng).label;
  t.append(Actor::charlie, EventKind::disclose_control, {{"outcomes", flags}, {"strict_bits", flags.size()}}, 0,
           flags.size());
  SemiHonestOutcome out;
  out.symbols = symbols;
  out.correct = count_correct_symbols(message, got, 2);
  out.control_bypassed = out.correct == symbols;
  t.result = SessionResult{false, 1, {got}, {}};
  out.evidence = std::move(t);
  return out;
}

/// Charlie prepares and permutes; Alice's only freedom is her encoding, so
/// Bob is left guessing the pairing before the disclosure.
inline SemiHonestOutcome proposed(std::size_t symbols, std::uint64_t seed) {
  SessionConfig cfg;
  cfg.protocol = Protocol::cdsqc;
  cfg.subprotocol = Subprotocol::cl;
  cfg.n = std::max<std::size_t>(symbols, 2);
  cfg.seed = seed;
  Session s(cfg);
  s.charlie_prepare();
  if (!s.charlie_distribute()) throw ProtocolError("unexpected abort in semi-honest scenario");
  SeededRng msg_rng(seed ^ 0x5bd1e995ULL);
  const std::string message = random_bits(2 * cfg.n, msg_rng);
  if (!s.alice_encode(message)) throw ProtocolError("unexpected abort in semi-honest scenario");
  const std::string got = s.guess_decode(Lane::alice_to_bob, Permutation::identity(cfg.n));
  SemiHonestOutcome out;
  out.symbols = cfg.n;
  out.correct = count_correct_symbols(message, got, 2);
  out.control_bypassed = out.correct == out.symbols;
  Transcript t = s.transcript();
  t.header.seed = seed;
  t.header.config = format_config(cfg);
  t.header.adversary = "semi-honest:p=1,taps=all";
  t.header.messages = {message};
  t.result = SessionResult{false, 1, {got}, s.result().checks};
  out.evidence = std::move(t);
  return out;
}

}  // namespace detail

/// Insider attack in which Alice tries to communicate without Charlie's
/// consent. Bypassed means Bob recovered every symbol before any disclosure.
inline SemiHonestOutcome run_semi_honest_scenario(SemiHonestFlow flow, std::size_t symbols = 10000,
                                                  std::uint64_t seed = 0) {
  if (symbols == 0) throw ConfigError("semi-honest scenario needs at least one symbol");
  return flow == SemiHonestFlow::hh_style_alice_prepares ? detail::hh_style(symbols, seed)
                                                         : detail::proposed(symbols, seed);
}

}  // namespace cdsqc
