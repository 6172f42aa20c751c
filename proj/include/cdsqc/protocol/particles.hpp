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
#include <cmath>
#include <cstdint>
#include <numeric>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cdsqc/errors.hpp"
#include "cdsqc/quantum/register.hpp"
#include "cdsqc/rng.hpp"

namespace cdsqc {

enum class ParticleKind { message, decoy };

inline constexpr std::size_t kNoDecoy = static_cast<std::size_t>(-1);

/// One travelling qubit: slot `slot` of resource block `block`, or a decoy.
struct ParticleRef {
  std::size_t block = 0;
  std::size_t slot = 0;
  ParticleKind kind = ParticleKind::message;
  std::size_t decoy_id = kNoDecoy;
  QubitId qubit = 0;

  friend bool operator==(const ParticleRef&, const ParticleRef&) = default;
};

using ParticleSequence = std::vector<ParticleRef>;

inline std::vector<QubitId> qubits_of(const ParticleSequence& seq) {
  std::vector<QubitId> out;
  out.reserve(seq.size());
  for (const auto& p : seq) out.push_back(p.qubit);
  return out;
}

/// Throws if a message (block, slot) or a decoy id repeats.
inline void check_unique(const ParticleSequence& seq) {
  std::set<std::pair<std::size_t, std::size_t>> msgs;
  std::set<std::size_t> decoys;
  for (const auto& p : seq) {
    const bool fresh = p.kind == ParticleKind::message ? msgs.insert({p.block, p.slot}).second
                                                       : decoys.insert(p.decoy_id).second;
    if (!fresh) throw std::invalid_argument("particle sequence has a duplicate entry");
  }
}

/// Bijection on {0..n-1}. apply() gives result[i] = input[mapping[i]].
class Permutation {
 public:
  Permutation() = default;

  static Permutation identity(std::size_t n) {
    Permutation p;
    p.mapping_.resize(n);
    std::iota(p.mapping_.begin(), p.mapping_.end(), std::size_t{0});
    return p;
  }

  static Permutation from_mapping(std::vector<std::size_t> mapping) {
    std::vector<bool> seen(mapping.size(), false);
    for (auto m : mapping) {
      if (m >= mapping.size() || seen[m]) throw ConfigError("mapping is not a bijection");
      seen[m] = true;
    }
    Permutation p;
    p.mapping_ = std::move(mapping);
    return p;
  }

  /// Uniform over S_n (Fisher-Yates).
  static Permutation random(std::size_t n, SeededRng& rng) {
    Permutation p = identity(n);
    rng.shuffle(std::span<std::size_t>(p.mapping_));
    return p;
  }

  std::size_t size() const { return mapping_.size(); }
  const std::vector<std::size_t>& mapping() const { return mapping_; }
  std::size_t operator[](std::size_t i) const { return mapping_.at(i); }

  Permutation inverse() const {
    std::vector<std::size_t> inv(mapping_.size());
    for (std::size_t i = 0; i < mapping_.size(); ++i) inv[mapping_[i]] = i;
    return from_mapping(std::move(inv));
  }

  /// (this * other).apply(x) == this->apply(other.apply(x)).
  Permutation compose(const Permutation& other) const {
    if (other.size() != size()) throw std::invalid_argument("permutation sizes differ");
    std::vector<std::size_t> m(size());
    for (std::size_t i = 0; i < size(); ++i) m[i] = other.mapping_[mapping_[i]];
    return from_mapping(std::move(m));
  }

  bool is_identity() const {
    for (std::size_t i = 0; i < mapping_.size(); ++i)
      if (mapping_[i] != i) return false;
    return true;
  }

  template <class T>
  std::vector<T> apply(const std::vector<T>& in) const {
    if (in.size() != mapping_.size()) {
      throw std::invalid_argument("permutation of size " + std::to_string(size()) +
                                  " applied to sequence of length " + std::to_string(in.size()));
    }
    std::vector<T> out;
    out.reserve(in.size());
    for (auto m : mapping_) out.push_back(in[m]);
    return out;
  }

  friend bool operator==(const Permutation&, const Permutation&) = default;

 private:
  std::vector<std::size_t> mapping_;
};

/// Number of positions where two permutations differ.
inline std::size_t hamming(const Permutation& a, const Permutation& b) {
  if (a.size() != b.size()) throw std::invalid_argument("permutation sizes differ");
  std::size_t d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d += a[i] != b[i] ? 1 : 0;
  return d;
}

/// ceil(log2 n!), the bits needed to name one element of S_n.
inline std::uint64_t permutation_bits(std::size_t n) {
  double lg = 0.0;
  for (std::size_t k = 2; k <= n; ++k) lg += std::log2(static_cast<double>(k));
  return static_cast<std::uint64_t>(std::ceil(lg - 1e-9));
}

inline ParticleSequence charlie_permute(const ParticleSequence& seq, const Permutation& pi) {
  if (pi.size() != seq.size()) throw ConfigError("permutation length does not match the sequence");
  return pi.apply(seq);
}

struct DecoyInsertion {
  ParticleSequence sequence;
  std::vector<std::size_t> positions;  // positions[k] = index of decoys[k] in `sequence`
};

/// Places the decoys at a uniformly random subset of positions, in random
/// order; the message particles keep their relative order.
inline DecoyInsertion insert_decoys(const ParticleSequence& seq, const ParticleSequence& decoys, SeededRng& rng) {
  const std::size_t total = seq.size() + decoys.size();
  std::vector<std::size_t> slots(total);
  std::iota(slots.begin(), slots.end(), std::size_t{0});
  // Partial Fisher-Yates: the first |decoys| entries are a uniform random
  // ordered sample without replacement.
  for (std::size_t i = 0; i < decoys.size(); ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(total - i));
    std::swap(slots[i], slots[j]);
  }
  DecoyInsertion out;
  out.positions.assign(slots.begin(), slots.begin() + static_cast<std::ptrdiff_t>(decoys.size()));
  std::vector<std::size_t> owner(total, kNoDecoy);
  for (std::size_t k = 0; k < decoys.size(); ++k) owner[out.positions[k]] = k;
  out.sequence.reserve(total);
  std::size_t next = 0;
  for (std::size_t i = 0; i < total; ++i)
    out.sequence.push_back(owner[i] == kNoDecoy ? seq[next++] : decoys[owner[i]]);
  return out;
}

/// Inverse of insert_decoys given the recorded positions.
inline std::pair<ParticleSequence, ParticleSequence> remove_decoys(const ParticleSequence& seq,
                                                                   const std::vector<std::size_t>& positions) {
  std::vector<bool> is_decoy(seq.size(), false);
  ParticleSequence decoys;
  for (auto p : positions) {
    if (p >= seq.size() || is_decoy[p]) throw std::invalid_argument("bad decoy position");
    is_decoy[p] = true;
    decoys.push_back(seq[p]);
  }
  ParticleSequence rest;
  for (std::size_t i = 0; i < seq.size(); ++i)
    if (!is_decoy[i]) rest.push_back(seq[i]);
  return {std::move(rest), std::move(decoys)};
}

}  // namespace cdsqc
