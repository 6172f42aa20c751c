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
#include <bit>
#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cdsqc/adversary/attack.hpp"
#include "cdsqc/eavesdrop/decoys.hpp"
#include "cdsqc/protocol/config.hpp"
#include "cdsqc/protocol/particles.hpp"
#include "cdsqc/protocol/plan.hpp"
#include "cdsqc/protocol/transcript.hpp"

namespace cdsqc {

enum class Phase { created, prepared, distributed, encoded, disclosed, decoded, aborted };

inline const char* to_string(Phase p) {
  switch (p) {
    case Phase::created: return "created";
    case Phase::prepared: return "prepared";
    case Phase::distributed: return "distributed";
    case Phase::encoded: return "encoded";
    case Phase::disclosed: return "disclosed";
    case Phase::decoded: return "decoded";
    case Phase::aborted: return "aborted";
  }
  return "?";
}

/// Bit strings are '0'/'1' text, most significant bit first.
inline void check_bits(std::string_view bits) {
  for (char c : bits)
    if (c != '0' && c != '1') throw ConfigError("message must be a string of 0 and 1");
}

inline std::uint32_t bits_to_index(std::string_view bits) {
  std::uint32_t v = 0;
  for (char c : bits) v = (v << 1) | (c == '1' ? 1U : 0U);
  return v;
}

inline std::string index_to_bits(std::uint32_t v, std::size_t width) {
  std::string s(width, '0');
  for (std::size_t i = 0; i < width; ++i)
    if ((v >> (width - 1 - i)) & 1U) s[i] = '1';
  return s;
}

inline std::string random_bits(std::size_t n, SeededRng& rng) {
  std::string s(n, '0');
  for (auto& c : s) c = rng.below(2) ? '1' : '0';
  return s;
}

struct LaneState {
  Lane lane = Lane::alice_to_bob;
  std::vector<std::pair<std::size_t, std::size_t>> units;  // (block, unit index in block plan)
  ParticleSequence sender_seq;      // sender's qubits, unit order
  ParticleSequence retained_seq;    // receiver's qubits, unit order (P_B)
  std::optional<Permutation> pi;    // Charlie's private permutation of retained_seq
  ParticleSequence retained_sent;   // pi applied (P_B')
  ParticleSequence sender_held;     // as received by the sender, decoys removed
  ParticleSequence receiver_held;   // receiver's retained qubits, decoys removed
  ParticleSequence receiver_got;    // encoded qubits received from the sender
  bool encoded = false;
  bool decoded = false;
  std::optional<Permutation> disclosed_pi;
  std::string delivered;
};

/// One protocol run. Roles are methods; each checks that the protocol has
/// reached the right step and records its traffic in the transcript.
class Session {
 public:
  Session(SessionConfig cfg, AttackModel attack = {})
      : Session(cfg, std::move(attack), SeededRng(cfg.seed), Transcript{}) {}

  Session(SessionConfig cfg, AttackModel attack, SeededRng rng, Transcript transcript)
      : cfg_(std::move(cfg)),
        attack_(std::move(attack)),
        plan_(plan_session(cfg_)),
        rng_(std::move(rng)),
        transcript_(std::move(transcript)) {
    validate(attack_);
    for (Lane l : plan_.lanes) lanes_[l].lane = l;
  }

  const SessionConfig& config() const { return cfg_; }
  const SessionPlan& plan() const { return plan_; }
  Phase phase() const { return phase_; }
  const Transcript& transcript() const { return transcript_; }
  const QubitRegister& qubits() const { return reg_; }
  QubitRegister& qubits() { return reg_; }
  SeededRng& rng() { return rng_; }
  const std::vector<CheckReport>& checks() const { return checks_; }
  const std::vector<AttackLog>& attack_logs() const { return attack_logs_; }
  const LaneState& lane(Lane l) const { return lanes_.at(l); }
  std::size_t capacity(Lane l) const { return plan_.capacity.at(l); }
  const std::vector<std::vector<QubitId>>& block_qubits() const { return block_qubits_; }
  const ParticleSequence& controller_seq() const { return controller_seq_; }
  const std::string& controller_outcomes() const { return outcomes_; }

  SeededRng take_rng() && { return std::move(rng_); }
  Transcript take_transcript() && { return std::move(transcript_); }

  /// Prepares every block, forms the particle sequences and draws the
  /// private permutations.
  void charlie_prepare() {
    require(Phase::created, "charlie_prepare");
    const std::size_t blocks = plan_.blocks.size();
    std::uint64_t data_qubits = 0;
    std::optional<StateVector> shared;
    if (!plan_.controlled) {
      shared = cfg_.protocol == Protocol::cbdsqc ? make_bell(BellState::psi_plus) : resource_state(cfg_.channel);
    } else if (plan_.full_state) {
      shared = make_controlled_state(cfg_.channel);
    }
    for (std::size_t b = 0; b < blocks; ++b) {
      const auto& bp = *plan_.blocks[b];
      data_qubits += bp.slots - (bp.controller ? 1 : 0);
      if (shared) {
        block_qubits_.push_back(reg_.add(*shared));
      } else {
        block_qubits_.push_back(add_sampled_branch(bp));
      }
    }
    transcript_.append(Actor::charlie, EventKind::prepare_resource,
                       {{"blocks", blocks},
                        {"channel", channel_label()},
                        {"qubits_per_block", plan_.blocks.front()->slots}},
                       data_qubits);
    if (plan_.controlled) {
      for (std::size_t b = 0; b < blocks; ++b)
        controller_seq_.push_back({b, *plan_.blocks[b]->controller, ParticleKind::message, kNoDecoy,
                                   block_qubits_[b][*plan_.blocks[b]->controller]});
      transcript_.append(Actor::charlie, EventKind::retain_controller,
                         {{"qubits", blocks}, {"counted", plan_.controller_cost > 0}},
                         plan_.controller_cost * blocks);
    }
    for (std::size_t b = 0; b < blocks; ++b) {
      const auto& bp = *plan_.blocks[b];
      for (std::size_t k = 0; k < bp.units.size(); ++k) {
        const auto& u = bp.units[k];
        auto& ls = lanes_.at(u.lane);
        ls.units.emplace_back(b, k);
        for (auto s : u.sender_slots) ls.sender_seq.push_back(message_ref(b, s));
        for (auto s : u.receiver_slots) ls.retained_seq.push_back(message_ref(b, s));
      }
    }
    for (Lane l : plan_.lanes) {
      auto& ls = lanes_.at(l);
      if (plan_.permuted) {
        ls.pi = Permutation::random(ls.retained_seq.size(), rng_);
        ls.retained_sent = charlie_permute(ls.retained_seq, *ls.pi);
        transcript_.append(Actor::charlie, EventKind::permute,
                           {{"lane", to_string(l)}, {"length", ls.retained_seq.size()}});
      } else {
        ls.retained_sent = ls.retained_seq;
      }
    }
    phase_ = Phase::prepared;
  }

  /// Sends every party its sub-sequences with decoys and runs the checks.
  /// Returns false when a check aborts the session.
  bool charlie_distribute() {
    require(Phase::prepared, "charlie_distribute");
    // Per lane: the sender's sub-sequence, then the receiver's.
    for (Lane l : plan_.lanes) {
      auto& ls = lanes_.at(l);
      for (bool sends : {true, false}) {
        const Actor party = sends ? sender_of(l) : receiver_of(l);
        const Link link = party == Actor::alice ? Link::charlie_to_alice : Link::charlie_to_bob;
        auto got = transmit(Actor::charlie, link, sends ? ls.sender_seq : ls.retained_sent, cfg_.check,
                            sends ? "sender" : "retained", to_string(l));
        if (!got) return false;
        (sends ? ls.sender_held : ls.receiver_held) = std::move(*got);
      }
    }
    phase_ = Phase::distributed;
    return true;
  }

  bool alice_encode(std::string_view bits) { return encode(Lane::alice_to_bob, bits); }
  bool bob_encode(std::string_view bits) { return encode(Lane::bob_to_alice, bits); }

  /// Sender applies the table operations to her qubits and ships them to
  /// the receiver with fresh decoys. Returns false on abort.
  bool encode(Lane l, std::string_view bits) {
    require(Phase::distributed, "encode");
    auto& ls = lane_state(l);
    if (ls.encoded) throw ProtocolError(to_string(l) + " message already encoded");
    check_bits(bits);
    if (bits.size() != capacity(l)) {
      throw ConfigError("message for " + to_string(l) + " must have " + std::to_string(capacity(l)) + " bits, got " +
                        std::to_string(bits.size()));
    }
    std::size_t pos = 0, offset = 0;
    for (auto [b, k] : ls.units) {
      const auto& u = plan_.blocks[b]->units[k];
      const auto& table = u.table(plan_.controlled ? "a" : "");
      const auto msg = bits_to_index(bits.substr(pos, u.bits));
      std::vector<QubitId> q;
      for (std::size_t i = 0; i < u.sender_slots.size(); ++i) q.push_back(ls.sender_held[offset + i].qubit);
      reg_.apply(table.ops.at(msg).gate, q);
      pos += u.bits;
      offset += u.sender_slots.size();
    }
    transcript_.append(sender_of(l), EventKind::encode,
                       {{"lane", to_string(l)}, {"units", ls.units.size()}, {"bits", bits.size()},
                        {"subprotocol", to_string(cfg_.subprotocol)}});
    auto got = transmit(sender_of(l), link_of(l), ls.sender_held, transfer_check(cfg_.subprotocol), "encoded",
                        to_string(l));
    if (!got) return false;
    ls.receiver_got = std::move(*got);
    ls.encoded = true;
    bool all = true;
    for (Lane o : plan_.lanes) all = all && lanes_.at(o).encoded;
    if (all) phase_ = Phase::encoded;
    return true;
  }

  /// Publishes the permutation(s), or measures and announces the controller
  /// qubits.
  void charlie_disclose() {
    if (phase_ != Phase::encoded) {
      throw ProtocolError(std::string("charlie_disclose called before encoding completed (phase ") +
                          to_string(phase_) + ")");
    }
    if (plan_.permuted) {
      for (Lane l : plan_.lanes) {
        auto& ls = lanes_.at(l);
        ls.disclosed_pi = ls.pi;
        transcript_.append(Actor::charlie, EventKind::disclose_control,
                           {{"lane", to_string(l)},
                            {"permutation", ls.pi->mapping()},
                            {"strict_bits", permutation_bits(ls.pi->size())}},
                           0, ls.pi->size());
      }
    } else {
      outcomes_.clear();
      for (const auto& c : controller_seq_) outcomes_ += reg_.measure(plan_.controller_basis, {c.qubit}, rng_).label;
      transcript_.append(Actor::charlie, EventKind::disclose_control,
                         {{"outcomes", outcomes_}, {"strict_bits", outcomes_.size()}}, 0, outcomes_.size());
    }
    phase_ = Phase::disclosed;
  }

  std::string bob_decode() { return decode(Lane::alice_to_bob); }
  std::string alice_decode() { return decode(Lane::bob_to_alice); }

  /// Receiver restores the order with the disclosed permutation, measures
  /// every unit jointly and reads the table of the announced branch.
  std::string decode(Lane l) {
    auto& ls = lane_state(l);
    if (phase_ != Phase::disclosed) {
      throw ProtocolError("decode refused: Charlie has not disclosed (phase " + std::string(to_string(phase_)) + ")");
    }
    if (ls.decoded) throw ProtocolError(to_string(l) + " already decoded");
    const auto restore = plan_.permuted ? ls.disclosed_pi->inverse() : Permutation::identity(ls.receiver_held.size());
    ls.delivered = measure_units(l, restore, std::nullopt, false);
    ls.decoded = true;
    bool all = true;
    for (Lane o : plan_.lanes) all = all && lanes_.at(o).decoded;
    if (all) phase_ = Phase::decoded;
    return ls.delivered;
  }

  /// Receiver's attempt without the disclosure: `pairing` is applied to the
  /// retained qubits the way the disclosed inverse would be; `branch` is the
  /// guessed controller outcome for controlled families.
  std::string guess_decode(Lane l, const Permutation& pairing, const std::string& branch = "a") {
    if (phase_ != Phase::encoded) throw ProtocolError("guess_decode needs the encoded qubits in hand");
    auto& ls = lane_state(l);
    if (ls.decoded) throw ProtocolError(to_string(l) + " already decoded");
    ls.decoded = true;
    return measure_units(l, pairing, branch, true);
  }

  /// Exact per-unit outcome distributions of the receiver's joint
  /// measurement under `pairing`, without touching the state.
  std::vector<OutcomeDistribution> decode_distributions(Lane l, const Permutation& pairing,
                                                        const std::string& branch = "a") const {
    const auto& ls = lanes_.at(l);
    std::vector<OutcomeDistribution> out;
    const auto held = pairing.apply(ls.receiver_held);
    std::size_t os = 0, orr = 0;
    for (auto [b, k] : ls.units) {
      const auto& u = plan_.blocks[b]->units[k];
      const auto q = unit_qubits(u, ls.receiver_got, held, os, orr);
      out.push_back(reg_.enumerate(u.table(plan_.controlled ? branch : "").decode_basis, q));
      os += u.sender_slots.size();
      orr += u.receiver_slots.size();
    }
    return out;
  }

  /// Pairing that the disclosed inverse permutation would give.
  Permutation true_pairing(Lane l) const {
    const auto& ls = lanes_.at(l);
    return ls.pi ? ls.pi->inverse() : Permutation::identity(ls.retained_seq.size());
  }

  /// Closes the attempt; delivered messages are empty unless decoded.
  SessionResult result() const {
    SessionResult r;
    r.aborted = phase_ == Phase::aborted;
    r.attempts = 1;
    for (Lane l : plan_.lanes) r.delivered.push_back(lanes_.at(l).delivered);
    for (auto c : checks_) {
      c.detail.clear();
      r.checks.push_back(std::move(c));
    }
    return r;
  }

 private:
  void require(Phase want, const char* op) const {
    if (phase_ != want) {
      throw ProtocolError(std::string(op) + " called in phase " + to_string(phase_) + ", expected " + to_string(want));
    }
  }

  LaneState& lane_state(Lane l) {
    auto it = lanes_.find(l);
    if (it == lanes_.end()) throw ConfigError(to_string(l) + " is not part of a " + to_string(cfg_.protocol) + " session");
    return it->second;
  }

  ParticleRef message_ref(std::size_t b, std::size_t slot) const {
    return {b, slot, ParticleKind::message, kNoDecoy, block_qubits_[b][slot]};
  }

  std::string channel_label() const {
    try {
      return format_channel(cfg_.channel);
    } catch (const ConfigError&) {
      return to_string(cfg_.channel.family);
    }
  }

  std::vector<QubitId> add_sampled_branch(const BlockPlan& bp) {
    const double pa = std::norm(plan_.branches[0].amplitude);
    const double pb = std::norm(plan_.branches[1].amplitude);
    const auto& br = plan_.branches[rng_.uniform() * (pa + pb) < pa ? 0 : 1];
    std::vector<QubitId> slots(bp.slots);
    for (const auto& comp : br.components) {
      const auto ids = reg_.add(comp.state);
      for (std::size_t i = 0; i < ids.size(); ++i) slots[comp.slots[i]] = ids[i];
    }
    slots[*bp.controller] = reg_.add(br.flag)[0];
    return slots;
  }

  std::vector<QubitId> unit_qubits(const UnitPlan& u, const ParticleSequence& from_sender,
                                   const ParticleSequence& held, std::size_t os, std::size_t orr) const {
    std::vector<QubitId> q;
    for (auto s : u.slots) {
      auto it = std::find(u.sender_slots.begin(), u.sender_slots.end(), s);
      if (it != u.sender_slots.end()) {
        q.push_back(from_sender.at(os + static_cast<std::size_t>(it - u.sender_slots.begin())).qubit);
      } else {
        auto jt = std::find(u.receiver_slots.begin(), u.receiver_slots.end(), s);
        q.push_back(held.at(orr + static_cast<std::size_t>(jt - u.receiver_slots.begin())).qubit);
      }
    }
    return q;
  }

  std::string measure_units(Lane l, const Permutation& restore, std::optional<std::string> branch_guess,
                            bool guessed) {
    auto& ls = lanes_.at(l);
    const auto held = restore.apply(ls.receiver_held);
    std::string bits;
    std::size_t os = 0, orr = 0, undecodable = 0;
    for (auto [b, k] : ls.units) {
      const auto& u = plan_.blocks[b]->units[k];
      std::string branch;
      if (plan_.controlled) branch = branch_guess ? *branch_guess : std::string(1, outcomes_.at(b));
      const auto& table = u.table(branch);
      const auto q = unit_qubits(u, ls.receiver_got, held, os, orr);
      const auto out = reg_.measure(table.decode_basis, q, rng_);
      const auto m = table.decode_label(out.label);
      if (!m) ++undecodable;
      bits += index_to_bits(m.value_or(0), u.bits);
      os += u.sender_slots.size();
      orr += u.receiver_slots.size();
    }
    Json payload{{"lane", to_string(l)}, {"units", ls.units.size()}, {"bits", bits.size()}, {"undecodable", undecodable}};
    if (guessed) payload["pre_disclosure"] = true;
    transcript_.append(receiver_of(l), EventKind::decode, std::move(payload));
    return bits;
  }

  /// One quantum transmission with decoy protection. Returns the message
  /// particles as held by the receiver, or nullopt after an abort.
  std::optional<ParticleSequence> transmit(Actor from, Link link, const ParticleSequence& msg, CheckMode mode,
                                           const std::string& role, const std::string& lane) {
    const std::size_t d = decoy_count(msg.size(), cfg_.decoy_fraction, mode);
    const Json where{{"link", to_string(link)}, {"lane", lane}, {"sequence", role}};
    auto with = [&](Json extra) {
      Json p = where;
      p.update(extra);
      return p;
    };
    DecoyBatch batch = prepare_decoys(mode, d, rng_);
    const ParticleSequence decoys = materialize(batch, reg_, next_decoy_id_);
    next_decoy_id_ += d;
    if (d > 0) transcript_.append(from, EventKind::prepare_decoys, with({{"mode", to_string(mode)}, {"count", d}}), d);
    const DecoyInsertion ins = insert_decoys(msg, decoys, rng_);
    if (d > 0) transcript_.append(from, EventKind::insert_decoys, with({{"length", ins.sequence.size()}}));
    transcript_.append(from, EventKind::transmit, with({{"length", ins.sequence.size()}}));
    if (attack_.taps_link(link)) {
      const auto in_flight = qubits_of(ins.sequence);
      auto log = apply_attack(attack_, TapPoint{link}, reg_, in_flight, rng_);
      transcript_.append(Actor::eve, EventKind::attack,
                         with({{"attack", to_string(attack_.kind)}, {"attacked", log.attacked}}));
      attack_logs_.push_back(std::move(log));
    }
    const Actor to = receiver_of(link);
    transcript_.append(to, EventKind::acknowledge, where);
    if (d == 0) return ins.sequence;

    const std::uint64_t pos_bits = static_cast<std::uint64_t>(d) *
                                   static_cast<std::uint64_t>(std::bit_width(ins.sequence.size() - 1));
    transcript_.append(from, EventKind::disclose_decoys, with({{"positions", ins.positions}}), 0, pos_bits);
    std::vector<QubitId> received;
    for (auto p : ins.positions) received.push_back(ins.sequence[p].qubit);
    CheckReport rep = mode == CheckMode::bb84
                          ? bb84_check(batch, reg_, received, transcript_, link, rng_)
                          : gv_check(batch, reg_, received, batch.pairing(), transcript_, link, rng_);
    Json detail = Json::array();
    for (const auto& x : rep.detail)
      detail.push_back({x.decoy, x.prepared, x.measured, x.compared, x.mismatch});
    transcript_.append(to, EventKind::check_result,
                       with({{"mode", to_string(mode)},
                             {"compared", rep.compared},
                             {"mismatches", rep.mismatches},
                             {"error_rate", rep.error_rate},
                             {"detail", std::move(detail)}}),
                       0, 2 * rep.detail.size());
    const double rate = rep.error_rate;
    checks_.push_back(std::move(rep));
    if (rate > cfg_.error_threshold) {
      transcript_.append(to, EventKind::abort, with({{"error_rate", rate}, {"threshold", cfg_.error_threshold}}));
      phase_ = Phase::aborted;
      return std::nullopt;
    }
    return remove_decoys(ins.sequence, ins.positions).first;
  }

  SessionConfig cfg_;
  AttackModel attack_;
  SessionPlan plan_;
  SeededRng rng_;
  Transcript transcript_;
  QubitRegister reg_;
  Phase phase_ = Phase::created;
  std::map<Lane, LaneState> lanes_;
  std::vector<std::vector<QubitId>> block_qubits_;
  ParticleSequence controller_seq_;
  std::string outcomes_;
  std::vector<CheckReport> checks_;
  std::vector<AttackLog> attack_logs_;
  std::size_t next_decoy_id_ = 0;
};

/// Runs the whole protocol: up to max_attempts attempts, restarting from
/// preparation after an abort. `messages` holds one bit string per lane.
inline Transcript run_session(const SessionConfig& cfg, const std::vector<std::string>& messages,
                              const AttackModel& attack = {}) {
  const SessionPlan plan = plan_session(cfg);
  validate(attack);
  if (attack.kind == AttackKind::semi_honest_alice_substitution) {
    throw ConfigError("semi-honest substitution is an insider scenario; run it with the semi-honest scenario");
  }
  if (messages.size() != plan.lanes.size()) {
    throw ConfigError(to_string(cfg.protocol) + " needs " + std::to_string(plan.lanes.size()) + " message(s)");
  }
  for (std::size_t i = 0; i < messages.size(); ++i) {
    check_bits(messages[i]);
    if (messages[i].size() != plan.capacity.at(plan.lanes[i])) {
      throw ConfigError("message " + std::to_string(i + 1) + " must have " +
                        std::to_string(plan.capacity.at(plan.lanes[i])) + " bits, got " +
                        std::to_string(messages[i].size()));
    }
  }
  Transcript t;
  t.header.seed = cfg.seed;
  t.header.config = format_config(cfg);
  t.header.adversary = format_attack(attack);
  t.header.messages = messages;
  SeededRng rng(cfg.seed);
  SessionResult total;
  for (std::size_t attempt = 1; attempt <= cfg.max_attempts; ++attempt) {
    if (attempt > 1) t.append(Actor::charlie, EventKind::restart, {{"attempt", attempt}});
    Session s(cfg, attack, std::move(rng), std::move(t));
    bool ok = true;
    s.charlie_prepare();
    ok = s.charlie_distribute();
    for (std::size_t i = 0; ok && i < plan.lanes.size(); ++i) ok = s.encode(plan.lanes[i], messages[i]);
    if (ok) {
      s.charlie_disclose();
      for (Lane l : plan.lanes) s.decode(l);
    }
    SessionResult r = s.result();
    total.aborted = r.aborted;
    total.attempts = attempt;
    total.delivered = r.delivered;
    total.checks.insert(total.checks.end(), r.checks.begin(), r.checks.end());
    rng = std::move(s).take_rng();
    t = std::move(s).take_transcript();
    if (ok) break;
  }
  t.result = std::move(total);
  return t;
}

}  // namespace cdsqc
