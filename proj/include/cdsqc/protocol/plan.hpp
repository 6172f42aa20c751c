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
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cdsqc/catalog/dense_coding.hpp"
#include "cdsqc/catalog/states.hpp"
#include "cdsqc/protocol/config.hpp"

namespace cdsqc {

/// Controlled blocks up to this size are simulated whole and Charlie really
/// measures his qubit at disclosure; larger ones draw the branch when the
/// block is prepared (same statistics, the controller qubit is untouched
/// until then).
inline constexpr std::size_t kFullStateLimit = 8;

using DenseTablePtr = std::shared_ptr<const DenseCodingTable>;

/// A group of block slots that carries one dense-coded symbol.
struct UnitPlan {
  Lane lane = Lane::alice_to_bob;
  std::vector<std::size_t> slots;           // measured together, in this order
  std::vector<std::size_t> sender_slots;    // encoder qubits (subset, ascending)
  std::vector<std::size_t> receiver_slots;  // kept by the receiver (subset, ascending)
  std::map<std::string, DenseTablePtr> tables;  // by controller branch; "" when uncontrolled
  std::size_t bits = 0;

  const DenseCodingTable& table(const std::string& branch) const {
    auto it = tables.find(branch);
    if (it == tables.end()) it = tables.begin();
    return *it->second;
  }
};

struct BlockPlan {
  std::size_t slots = 0;  // including the controller
  std::optional<std::size_t> controller;
  std::vector<UnitPlan> units;
};

/// Everything about a session that does not depend on randomness.
struct SessionPlan {
  std::vector<Lane> lanes;
  std::vector<std::shared_ptr<const BlockPlan>> blocks;
  bool controlled = false;
  bool permuted = false;
  bool full_state = true;
  std::vector<ControlBranch> branches;
  std::uint64_t controller_cost = 0;  // counted qubits per retained controller
  std::map<Lane, std::size_t> capacity;
  MeasurementBasis controller_basis = MeasurementBasis::computational();
};

namespace detail {

inline std::vector<EncodingOp> pauli_ops() {
  return {{"I", gates::identity()}, {"X", gates::x()}, {"iY", gates::iy()}, {"Z", gates::z()}};
}

inline bool is_bell_unit(const StateVector& s, std::size_t enc_count) {
  if (s.num_qubits() != 2 || enc_count != 1) return false;
  for (auto b : {BellState::psi_plus, BellState::psi_minus, BellState::phi_plus, BellState::phi_minus})
    if (fidelity(s, make_bell(b)) > 1.0 - 1e-12) return true;
  return false;
}

inline std::vector<std::size_t> positions_within(const std::vector<std::size_t>& slots,
                                                 const std::vector<std::size_t>& subset) {
  std::vector<std::size_t> pos;
  for (auto s : subset) pos.push_back(static_cast<std::size_t>(std::find(slots.begin(), slots.end(), s) - slots.begin()));
  return pos;
}

inline std::vector<std::size_t> range(std::size_t from, std::size_t to) {
  std::vector<std::size_t> v;
  for (std::size_t i = from; i < to; ++i) v.push_back(i);
  return v;
}

inline std::vector<std::size_t> intersect(const std::vector<std::size_t>& a, const std::vector<std::size_t>& held) {
  std::vector<std::size_t> out;
  for (auto s : a)
    if (std::find(held.begin(), held.end(), s) != held.end()) out.push_back(s);
  std::sort(out.begin(), out.end());
  return out;
}

/// Tables for one unit over per-branch resource states sharing one set of
/// sender operations (the sender never learns the branch).
inline std::map<std::string, DenseTablePtr> unit_tables(const std::vector<std::pair<std::string, StateVector>>& states,
                                                        const std::vector<std::size_t>& enc, bool one_bit) {
  const StateVector& first = states.front().second;
  std::vector<EncodingOp> ops;
  std::optional<MeasurementBasis> basis;
  if (is_bell_unit(first, enc.size())) {
    ops = pauli_ops();
    basis = MeasurementBasis::bell();
  } else {
    ops = pauli_search(first, enc);
  }
  std::map<std::string, DenseTablePtr> out;
  for (const auto& [label, st] : states) {
    auto full = build_table(st, enc, ops, basis);
    if (one_bit) full = build_table(st, enc, {full.ops[0], full.ops[1]}, full.decode_basis);
    out[label] = std::make_shared<const DenseCodingTable>(std::move(full));
  }
  return out;
}

inline std::size_t alt3_encoder_qubits(const ChannelSpec& spec) {
  return spec.family == ChannelFamily::ghz_like ? 1 : spec.encoder_qubits;
}

}  // namespace detail

inline SessionPlan plan_session(const SessionConfig& cfg) {
  validate(cfg);
  const ChannelSpec& spec = cfg.channel;
  const bool one_bit = cdsqc::one_bit(cfg.subprotocol);
  SessionPlan plan;
  plan.lanes = {Lane::alice_to_bob};
  if (cfg.protocol == Protocol::cbdsqc) plan.lanes.push_back(Lane::bob_to_alice);

  if (!spec.is_controlled() || cfg.protocol == Protocol::cdsqc) {
    plan.permuted = true;
    if (cfg.protocol == Protocol::cbdsqc) {
      // 2n Bell blocks: first n carry Alice->Bob, last n Bob->Alice.
      const StateVector psi = make_bell(BellState::psi_plus);
      for (Lane lane : plan.lanes) {
        auto bp = std::make_shared<BlockPlan>();
        bp->slots = 2;
        UnitPlan u;
        u.lane = lane;
        u.slots = {0, 1};
        u.sender_slots = {lane == Lane::alice_to_bob ? std::size_t{0} : std::size_t{1}};
        u.receiver_slots = {lane == Lane::alice_to_bob ? std::size_t{1} : std::size_t{0}};
        u.tables = detail::unit_tables({{"", psi}}, u.sender_slots, one_bit);
        u.bits = u.tables.at("")->bits;
        bp->units.push_back(std::move(u));
        for (std::size_t i = 0; i < cfg.n; ++i) plan.blocks.push_back(bp);
      }
    } else {
      auto bp = std::make_shared<BlockPlan>();
      bp->slots = spec.total_qubits;
      UnitPlan u;
      u.slots = detail::range(0, spec.total_qubits);
      u.sender_slots = detail::range(0, spec.encoder_qubits);
      u.receiver_slots = detail::range(spec.encoder_qubits, spec.total_qubits);
      auto full = dense_coding_table(spec);
      if (one_bit) {
        full = build_table(resource_state(spec), u.sender_slots, {full.ops[0], full.ops[1]}, full.decode_basis);
      }
      u.bits = full.bits;
      u.tables[""] = std::make_shared<const DenseCodingTable>(std::move(full));
      bp->units.push_back(std::move(u));
      for (std::size_t i = 0; i < cfg.n; ++i) plan.blocks.push_back(bp);
    }
  } else {
    plan.controlled = true;
    plan.branches = controlled_branches(spec);
    const auto& comps = plan.branches.front().components;
    std::size_t data_slots = 0;
    for (const auto& c : comps) data_slots += c.slots.size();
    std::vector<std::size_t> alice, bob;
    if (cfg.protocol == Protocol::cdsqc_alt3) {
      const std::size_t p = detail::alt3_encoder_qubits(spec);
      alice = detail::range(0, p);
      bob = detail::range(p, data_slots);
    } else {
      const std::size_t n_b = comps.front().state.num_qubits(), p = spec.encoder_qubits;
      alice = detail::range(0, p);
      for (auto s : detail::range(n_b + p, 2 * n_b)) alice.push_back(s);
      bob = detail::range(p, n_b + p);
    }
    auto bp = std::make_shared<BlockPlan>();
    bp->slots = data_slots + 1;
    bp->controller = data_slots;
    for (std::size_t k = 0; k < comps.size(); ++k) {
      UnitPlan u;
      u.lane = (cfg.protocol == Protocol::cbdsqc && k == 1) ? Lane::bob_to_alice : Lane::alice_to_bob;
      u.slots = comps[k].slots;
      const auto& snd = u.lane == Lane::alice_to_bob ? alice : bob;
      const auto& rcv = u.lane == Lane::alice_to_bob ? bob : alice;
      u.sender_slots = detail::intersect(u.slots, snd);
      u.receiver_slots = detail::intersect(u.slots, rcv);
      if (u.sender_slots.empty() || u.receiver_slots.empty()) {
        throw ConfigError("controlled channel leaves a party without qubits of a coding unit");
      }
      std::vector<std::pair<std::string, StateVector>> states;
      for (const auto& br : plan.branches) states.emplace_back(br.label, br.components[k].state);
      u.tables = detail::unit_tables(states, detail::positions_within(u.slots, u.sender_slots), one_bit);
      u.bits = u.tables.begin()->second->bits;
      bp->units.push_back(std::move(u));
    }
    for (std::size_t i = 0; i < cfg.n; ++i) plan.blocks.push_back(bp);
    plan.full_state = bp->slots <= kFullStateLimit;
    plan.controller_cost = spec.family == ChannelFamily::cat_controlled ? 0 : 1;
    std::vector<StateVector> flags;
    for (const auto& br : plan.branches) flags.push_back(br.flag);
    plan.controller_basis = MeasurementBasis::custom({"a", "b"}, flags);
  }
  for (Lane l : plan.lanes) plan.capacity[l] = 0;
  for (const auto& b : plan.blocks)
    for (const auto& u : b->units) plan.capacity[u.lane] += u.bits;
  return plan;
}

}  // namespace cdsqc
