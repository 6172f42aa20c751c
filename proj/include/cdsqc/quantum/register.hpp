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
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "cdsqc/quantum/gate.hpp"
#include "cdsqc/quantum/measurement.hpp"
#include "cdsqc/quantum/state_vector.hpp"
#include "cdsqc/rng.hpp"

namespace cdsqc {

using QubitId = std::size_t;

// Global register kept as a set of independent blocks. Blocks are merged
// when an operation spans several of them and split again after every
// measurement: a rank-one projection leaves the measured qubits in product
// with the rest, so transient blocks never grow past two operands.
class QubitRegister {
 public:
  explicit QubitRegister(std::size_t block_limit = kDefaultBlockLimit) : block_limit_(block_limit) {}

  /// Adds a fresh block; its qubits get consecutive ids in slot order.
  std::vector<QubitId> add(const StateVector& block) {
    if (block.num_qubits() > block_limit_) {
      throw CapacityError("block of " + std::to_string(block.num_qubits()) +
                          " qubits exceeds block limit");
    }
    std::vector<QubitId> ids;
    for (std::size_t i = 0; i < block.num_qubits(); ++i) {
      ids.push_back(owner_.size());
      owner_.push_back(blocks_.size());
    }
    blocks_.push_back({ids, block});
    return ids;
  }

  std::size_t size() const { return owner_.size(); }
  std::size_t block_limit() const { return block_limit_; }

  std::size_t live_blocks() const {
    std::size_t n = 0;
    for (const auto& b : blocks_) n += b.members.empty() ? 0 : 1;
    return n;
  }

  void apply(const Gate& gate, std::span<const QubitId> qubits) {
    const std::size_t b = gather(qubits);
    auto& blk = blocks_[b];
    blk.state = cdsqc::apply_gate(blk.state, gate, positions(blk, qubits));
  }

  /// Samples a measurement; measured qubits end in their own block.
  SampledOutcome measure(const MeasurementBasis& basis, std::span<const QubitId> qubits,
                         SeededRng& rng) {
    const std::size_t b = gather(qubits);
    const auto pos = positions(blocks_[b], qubits);
    auto result = measure_sampled(blocks_[b].state, basis, pos, rng);
    split_measured(b, qubits, basis.vector(result.index), result.post);
    return result;
  }

  SampledOutcome measure(const MeasurementBasis& basis, std::initializer_list<QubitId> qubits,
                         SeededRng& rng) {
    return measure(basis, std::span<const QubitId>(qubits.begin(), qubits.size()), rng);
  }

  /// Exact distribution without disturbing the register. Post states are over
  /// the joint state of the touched blocks in the order given by joint_order().
  OutcomeDistribution enumerate(const MeasurementBasis& basis, std::span<const QubitId> qubits) const {
    const auto [state, order] = joint(qubits);
    std::vector<std::size_t> pos;
    for (auto q : qubits) pos.push_back(index_in(order, q));
    return measure_enumerate(state, basis, pos);
  }

  /// State of exactly `qubits`, which must make up whole blocks (any order).
  StateVector state_of(std::span<const QubitId> qubits) const {
    const auto [state, order] = joint(qubits);
    if (order.size() != qubits.size()) {
      throw std::invalid_argument("state_of: qubits are entangled with others outside the set");
    }
    std::vector<std::size_t> perm;
    for (auto q : qubits) perm.push_back(index_in(order, q));
    return permute_qubits(state, perm);
  }

  StateVector state_of(std::initializer_list<QubitId> qubits) const {
    return state_of(std::span<const QubitId>(qubits.begin(), qubits.size()));
  }

  /// Block-mates of `q` (including q) in block slot order.
  const std::vector<QubitId>& block_members(QubitId q) const { return blocks_.at(owner_.at(q)).members; }

 private:
  struct Block {
    std::vector<QubitId> members;
    StateVector state;
  };

  static std::size_t index_in(const std::vector<QubitId>& order, QubitId q) {
    return static_cast<std::size_t>(std::find(order.begin(), order.end(), q) - order.begin());
  }

  static std::vector<std::size_t> positions(const Block& blk, std::span<const QubitId> qubits) {
    std::vector<std::size_t> pos;
    for (auto q : qubits) pos.push_back(index_in(blk.members, q));
    return pos;
  }

  void check_ids(std::span<const QubitId> qubits) const {
    for (std::size_t i = 0; i < qubits.size(); ++i) {
      if (qubits[i] >= owner_.size()) throw std::out_of_range("unknown qubit id");
      for (std::size_t j = i + 1; j < qubits.size(); ++j)
        if (qubits[i] == qubits[j]) throw std::invalid_argument("duplicate qubit id");
    }
  }

  std::vector<std::size_t> distinct_blocks(std::span<const QubitId> qubits) const {
    check_ids(qubits);
    std::vector<std::size_t> bs;
    for (auto q : qubits)
      if (std::find(bs.begin(), bs.end(), owner_[q]) == bs.end()) bs.push_back(owner_[q]);
    return bs;
  }

  std::pair<StateVector, std::vector<QubitId>> joint(std::span<const QubitId> qubits) const {
    const auto bs = distinct_blocks(qubits);
    StateVector s = blocks_[bs[0]].state;
    std::vector<QubitId> order = blocks_[bs[0]].members;
    for (std::size_t i = 1; i < bs.size(); ++i) {
      s = tensor(s, blocks_[bs[i]].state, block_limit_);
      order.insert(order.end(), blocks_[bs[i]].members.begin(), blocks_[bs[i]].members.end());
    }
    return {s, order};
  }

  std::size_t gather(std::span<const QubitId> qubits) {
    const auto bs = distinct_blocks(qubits);
    const std::size_t target = bs[0];
    for (std::size_t i = 1; i < bs.size(); ++i) {
      auto& src = blocks_[bs[i]];
      blocks_[target].state = tensor(blocks_[target].state, src.state, block_limit_);
      for (auto q : src.members) owner_[q] = target;
      blocks_[target].members.insert(blocks_[target].members.end(), src.members.begin(),
                                     src.members.end());
      src.members.clear();
      src.state = StateVector{};
    }
    return target;
  }

  void split_measured(std::size_t b, std::span<const QubitId> qubits, const StateVector& v,
                      const StateVector& post) {
    auto& blk = blocks_[b];
    if (blk.members.size() == qubits.size()) {
      // Whole block measured: store in the requested qubit order.
      blk.members.assign(qubits.begin(), qubits.end());
      blk.state = v;
      return;
    }
    const auto pos = positions(blk, qubits);
    StateVector rest = residual_after(post, v, pos);
    std::vector<QubitId> rest_members;
    for (auto q : blk.members)
      if (std::find(qubits.begin(), qubits.end(), q) == qubits.end()) rest_members.push_back(q);
    blk.members = std::move(rest_members);
    blk.state = std::move(rest);
    const std::size_t nb = blocks_.size();
    blocks_.push_back({std::vector<QubitId>(qubits.begin(), qubits.end()), v});
    for (auto q : qubits) owner_[q] = nb;
  }

  std::size_t block_limit_;
  std::vector<Block> blocks_;
  std::vector<std::size_t> owner_;
};

}  // namespace cdsqc
