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

#include <bit>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cdsqc/catalog/states.hpp"
#include "cdsqc/errors.hpp"
#include "cdsqc/quantum/gate.hpp"
#include "cdsqc/quantum/measurement.hpp"

namespace cdsqc {

struct EncodingOp {
  std::string name;
  Gate gate;  // acts on the table's encoder positions, in order
};

/// Message index -> encoder operation, and decode-basis label -> message
/// index. Message index k is written as `bits` binary digits, MSB first.
struct DenseCodingTable {
  std::size_t bits = 0;
  std::vector<std::size_t> encoder_positions;
  std::vector<EncodingOp> ops;
  MeasurementBasis decode_basis;
  std::map<std::string, std::uint32_t> decode;

  std::size_t capacity() const { return ops.size(); }

  /// nullopt when the label is not an encoded state.
  std::optional<std::uint32_t> decode_label(const std::string& label) const {
    auto it = decode.find(label);
    if (it == decode.end()) return std::nullopt;
    return it->second;
  }

  StateVector encode(const StateVector& resource, std::uint32_t message) const {
    return apply_gate(resource, ops.at(message).gate, encoder_positions);
  }
};

/// Builds a table from explicit operations. Encoded states must be
/// mutually orthogonal; without `basis` the decode basis is the encoded
/// states themselves (labels "m<k>"), completed by Gram-Schmidt ("x<j>").
inline DenseCodingTable build_table(const StateVector& resource, std::vector<std::size_t> encoder_positions,
                                    std::vector<EncodingOp> ops,
                                    std::optional<MeasurementBasis> basis = std::nullopt) {
  if (ops.empty() || !std::has_single_bit(ops.size())) {
    throw ConfigError("dense-coding table size must be a power of two");
  }
  std::vector<StateVector> encoded;
  for (const auto& op : ops) encoded.push_back(apply_gate(resource, op.gate, encoder_positions));
  for (std::size_t i = 0; i < encoded.size(); ++i)
    for (std::size_t j = i + 1; j < encoded.size(); ++j)
      if (fidelity(encoded[i], encoded[j]) > kTolerance)
        throw ConfigError("encoded states " + ops[i].name + " and " + ops[j].name + " are not orthogonal");

  if (!basis) {
    std::vector<std::string> labels;
    for (std::size_t k = 0; k < encoded.size(); ++k) labels.push_back("m" + std::to_string(k));
    auto vectors = complete_basis(encoded);
    for (std::size_t j = encoded.size(); j < vectors.size(); ++j) labels.push_back("x" + std::to_string(j - encoded.size()));
    basis = MeasurementBasis::custom(std::move(labels), std::move(vectors));
  }
  if (basis->arity() != resource.num_qubits()) throw ConfigError("decode basis must span the whole resource");

  std::map<std::string, std::uint32_t> decode;
  for (std::size_t k = 0; k < encoded.size(); ++k) {
    bool found = false;
    for (std::size_t i = 0; i < basis->size(); ++i) {
      if (fidelity(basis->vector(i), encoded[k]) > 1.0 - 1e-9) {
        decode[basis->labels()[i]] = static_cast<std::uint32_t>(k);
        found = true;
        break;
      }
    }
    if (!found) throw ConfigError("encoded state " + ops[k].name + " is not a decode-basis vector");
  }
  return {static_cast<std::size_t>(std::countr_zero(ops.size())), std::move(encoder_positions),
          std::move(ops), std::move(*basis), std::move(decode)};
}

/// 00 -> I, 01 -> X, 10 -> iY, 11 -> Z on qubit 0 of `resource` (psi+ by
/// default), decoded in the Bell basis.
inline DenseCodingTable bell_table(const StateVector& resource = make_bell(BellState::psi_plus)) {
  return build_table(resource, {0},
                     {{"I", gates::identity()}, {"X", gates::x()}, {"iY", gates::iy()}, {"Z", gates::z()}},
                     MeasurementBasis::bell());
}

namespace detail {

inline Gate pauli_of(int k) {
  switch (k) {
    case 0: return gates::identity();
    case 1: return gates::x();
    case 2: return gates::iy();
    default: return gates::z();
  }
}

inline const char* pauli_name(int k) {
  static const char* names[] = {"I", "X", "iY", "Z"};
  return names[k];
}

// Pauli word for index w over p qubits, first qubit most significant.
inline EncodingOp pauli_word(std::size_t w, std::size_t p) {
  std::optional<Gate> g;
  std::string name;
  for (std::size_t q = 0; q < p; ++q) {
    const int k = static_cast<int>((w >> (2 * (p - 1 - q))) & 3U);
    Gate gq = pauli_of(k);
    g = g ? kron(*g, gq) : gq;
    name += (q ? "*" : "") + std::string(pauli_name(k));
  }
  return {name, *g};
}

// Bron-Kerbosch with pivoting over <= 64 vertices; keeps the first maximum
// clique found, which makes the result deterministic.
inline void max_clique(std::uint64_t r, std::uint64_t p, std::uint64_t x, const std::vector<std::uint64_t>& adj,
                       std::uint64_t& best) {
  if (p == 0 && x == 0) {
    if (std::popcount(r) > std::popcount(best)) best = r;
    return;
  }
  if (std::popcount(r) + std::popcount(p) <= std::popcount(best)) return;
  const std::uint64_t px = p | x;
  const int pivot = std::countr_zero(px);
  std::uint64_t cand = p & ~adj[static_cast<std::size_t>(pivot)];
  while (cand) {
    const int v = std::countr_zero(cand);
    const std::uint64_t bit = std::uint64_t{1} << v;
    max_clique(r | bit, p & adj[static_cast<std::size_t>(v)], x & adj[static_cast<std::size_t>(v)], adj, best);
    p &= ~bit;
    x |= bit;
    cand &= ~bit;
  }
}

}  // namespace detail

/// Largest set of Pauli products on `encoder_positions` giving mutually
/// orthogonal encoded states (containing the identity), floored to a power
/// of two and kept in lexicographic word order.
inline std::vector<EncodingOp> pauli_search(const StateVector& resource,
                                            const std::vector<std::size_t>& encoder_positions) {
  const std::size_t p = encoder_positions.size();
  if (p == 0 || p > 3) throw ConfigError("Pauli search supports 1 to 3 encoder qubits");
  const std::size_t count = std::size_t{1} << (2 * p);
  std::vector<EncodingOp> words;
  std::vector<StateVector> encoded;
  for (std::size_t w = 0; w < count; ++w) {
    words.push_back(detail::pauli_word(w, p));
    encoded.push_back(apply_gate(resource, words.back().gate, encoder_positions));
  }
  std::vector<std::uint64_t> adj(count, 0);
  for (std::size_t i = 0; i < count; ++i)
    for (std::size_t j = 0; j < count; ++j)
      if (i != j && fidelity(encoded[i], encoded[j]) < kTolerance) adj[i] |= std::uint64_t{1} << j;

  std::uint64_t best = 1;  // identity alone
  detail::max_clique(1, adj[0], 0, adj, best);
  const std::size_t keep = std::bit_floor(static_cast<std::size_t>(std::popcount(best)));
  std::vector<EncodingOp> ops;
  for (std::size_t w = 0; w < count && ops.size() < keep; ++w)
    if ((best >> w) & 1U) ops.push_back(words[w]);
  return ops;
}

/// Alice's relabelling U_k: e_i -> e_(i xor k), identity on the complement of
/// span{e_i}.
inline std::vector<EncodingOp> swap_relabel_ops(const SwapParams& p) {
  const std::size_t dim = std::size_t{1} << p.m;
  const auto full = complete_basis(p.e);
  std::vector<EncodingOp> ops;
  for (std::size_t k = 0; k < p.e.size(); ++k) {
    std::vector<Complex> mat(dim * dim, Complex{0.0, 0.0});
    for (std::size_t i = 0; i < full.size(); ++i) {
      const StateVector& from = full[i];
      const StateVector& to = i < p.e.size() ? p.e[i ^ k] : full[i];
      for (std::size_t r = 0; r < dim; ++r)
        for (std::size_t c = 0; c < dim; ++c) mat[r * dim + c] += to[r] * std::conj(from[c]);
    }
    ops.push_back({"R" + std::to_string(k), Gate::make(p.m, std::move(mat), "R" + std::to_string(k))});
  }
  return ops;
}

/// Table of a non-controlled family. Controlled families get per-branch
/// tables from the protocol engine.
inline DenseCodingTable dense_coding_table(const ChannelSpec& spec) {
  require_valid(spec);
  std::vector<std::size_t> enc(spec.encoder_qubits);
  for (std::size_t i = 0; i < enc.size(); ++i) enc[i] = i;
  switch (spec.family) {
    case ChannelFamily::bell: return bell_table();
    case ChannelFamily::ghz_like:
    case ChannelFamily::n_qubit_dense: {
      const StateVector r = resource_state(spec);
      return build_table(r, enc, pauli_search(r, enc));
    }
    case ChannelFamily::swap_generic: {
      const auto& p = std::get<SwapParams>(spec.params);
      return build_table(make_swap_state(spec), enc, swap_relabel_ops(p));
    }
    default:
      throw ConfigError(std::string("family ") + to_string(spec.family) +
                        " has no single dense-coding table; decode depends on the controller outcome");
  }
}

}  // namespace cdsqc
