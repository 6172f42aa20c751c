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
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "cdsqc/catalog/channel_spec.hpp"

namespace cdsqc {

struct Validation {
  bool ok = true;
  std::vector<std::string> diagnostics;

  explicit operator bool() const { return ok; }
  void fail(std::string why) {
    ok = false;
    diagnostics.push_back(std::move(why));
  }
  std::string message() const {
    std::string s;
    for (const auto& d : diagnostics) s += (s.empty() ? "" : "; ") + d;
    return s;
  }
};

namespace detail {

inline bool same_state(const StateVector& x, const StateVector& y) {
  return x.num_qubits() == y.num_qubits() && fidelity(x, y) > 1.0 - kTolerance;
}

inline void check_orthonormal(const std::vector<StateVector>& set, const char* name, Validation& v) {
  for (std::size_t i = 0; i < set.size(); ++i) {
    if (std::abs(set[i].norm() - 1.0) > kTolerance) v.fail(std::string(name) + " set has an unnormalized member");
    for (std::size_t j = i + 1; j < set.size(); ++j) {
      if (set[j].num_qubits() != set[i].num_qubits()) {
        v.fail(std::string(name) + " set mixes qubit counts");
        return;
      }
      if (std::norm(inner(set[i], set[j])) > kTolerance) {
        v.fail(std::string(name) + " set is not orthonormal (members " + std::to_string(i + 1) + ", " +
               std::to_string(j + 1) + ")");
      }
    }
  }
}

// Every single-qubit marginal maximally mixed.
inline bool maximally_entangled(const StateVector& s) {
  const std::size_t n = s.num_qubits();
  for (std::size_t q = 0; q < n; ++q) {
    const std::size_t bit = std::size_t{1} << bit_of(n, q);
    double p0 = 0.0;
    Complex off{0.0, 0.0};
    for (std::size_t i = 0; i < s.dimension(); ++i) {
      if (i & bit) continue;
      p0 += std::norm(s[i]);
      off += s[i] * std::conj(s[i | bit]);
    }
    if (std::abs(p0 - 0.5) > 1e-9 || std::abs(off) > 1e-9) return false;
  }
  return true;
}

}  // namespace detail

/// Checks every constraint of the family; diagnostics name what failed.
inline Validation validate_conditions(const ChannelSpec& spec) {
  Validation v;
  switch (spec.family) {
    case ChannelFamily::bell:
      if (spec.total_qubits != 2 || spec.encoder_qubits != 1) v.fail("bell channel requires N = 2, p = 1");
      break;
    case ChannelFamily::n_qubit_dense: {
      const auto* d = std::get_if<DenseParams>(&spec.params);
      if (!d) {
        v.fail("dense channel without a state");
        break;
      }
      const std::size_t n = d->state.num_qubits();
      if (n != spec.total_qubits) v.fail("dense state size differs from N");
      if (2 * spec.encoder_qubits < n || spec.encoder_qubits >= n) v.fail("dense coding split needs N/2 <= p < N");
      break;
    }
    case ChannelFamily::swap_generic: {
      const auto* p = std::get_if<SwapParams>(&spec.params);
      if (!p) {
        v.fail("swap channel without bases");
        break;
      }
      if (p->s < 1) v.fail("swap channel requires s >= 1");
      if (p->m < p->s || p->m < 2) v.fail("swap channel requires m >= s and m >= 2");
      if (p->l < p->s) v.fail("swap channel requires l >= s");
      const std::size_t want = std::size_t{1} << p->s;
      if (p->e.size() != want) v.fail("e set must have 2^s members");
      if (p->f.size() != want) v.fail("f set must have 2^s members");
      for (const auto& e : p->e) {
        if (e.num_qubits() != p->m) v.fail("e member is not an m-qubit state");
        else if (!detail::maximally_entangled(e)) v.fail("e member is not maximally entangled");
      }
      for (const auto& f : p->f)
        if (f.num_qubits() != p->l) v.fail("f member is not an l-qubit state");
      detail::check_orthonormal(p->e, "e", v);
      detail::check_orthonormal(p->f, "f", v);
      break;
    }
    case ChannelFamily::ghz_like:
    case ChannelFamily::controlled_n_plus_1:
    case ChannelFamily::controlled_2n_plus_1:
    case ChannelFamily::five_qubit_bcst: {
      const auto* c = std::get_if<ControlledParams>(&spec.params);
      if (!c) {
        v.fail("controlled channel without branch states");
        break;
      }
      if (c->a.num_qubits() != 1 || c->b.num_qubits() != 1) v.fail("controller states must be single qubits");
      else if (std::norm(inner(c->a, c->b)) > kTolerance) v.fail("controller states violate <a|b> = 0");
      const bool two_n = spec.family == ChannelFamily::controlled_2n_plus_1 ||
                         spec.family == ChannelFamily::five_qubit_bcst;
      if (c->branches.size() != (two_n ? 4u : 2u)) {
        v.fail(two_n ? "2N+1 channel needs psi1..psi4" : "N+1 channel needs psi1, psi2");
        break;
      }
      for (const auto& s : c->branches)
        if (s.num_qubits() != c->branches.front().num_qubits()) v.fail("branch states differ in size");
      if (!two_n) {
        if (detail::same_state(c->branches[0], c->branches[1]))
          v.fail("condition violated: psi1 must differ from psi2 (controller would be unentangled)");
      } else {
        if (detail::same_state(c->branches[0], c->branches[2]))
          v.fail("condition violated: psi1 must differ from psi3");
        if (detail::same_state(c->branches[1], c->branches[3]))
          v.fail("condition violated: psi2 must differ from psi4");
      }
      if (spec.family == ChannelFamily::five_qubit_bcst && c->branches.front().num_qubits() != 2)
        v.fail("five-qubit channel needs 2-qubit branch states");
      break;
    }
    case ChannelFamily::cat_controlled: {
      const auto* c = std::get_if<CatParams>(&spec.params);
      if (!c || c->m < 1) v.fail("cat channel requires m >= 1");
      break;
    }
  }
  return v;
}

inline void require_valid(const ChannelSpec& spec) {
  auto v = validate_conditions(spec);
  if (!v) {
    const bool condition = v.message().find("condition violated") != std::string::npos ||
                           v.message().find("<a|b>") != std::string::npos;
    if (condition) throw ConditionError(v.message());
    throw ConfigError(v.message());
  }
}

struct BranchComponent {
  StateVector state;
  std::vector<std::size_t> slots;  // block slots occupied, in the state's qubit order
};

/// One term of a controlled state: sum over branches of
/// amplitude * (components placed on their slots) (x) |flag>.
struct ControlBranch {
  std::string label;  // controller outcome label, "a" or "b"
  StateVector flag;
  Complex amplitude;
  std::vector<BranchComponent> components;
};

/// Branch decomposition of a controlled channel. Slot order is encoder
/// qubits, receiver qubits, controller last; the (2N+1) family keeps
/// psi1 then psi2 (A1 B1 A2 B2 C for N = 2). Cat_i components are
/// pairwise 2-qubit cats (slot i with slot m + i) so the 2m qubits admit
/// maximal dense coding.
inline std::vector<ControlBranch> controlled_branches(const ChannelSpec& spec) {
  require_valid(spec);
  const double h = 1.0 / std::sqrt(2.0);
  std::vector<ControlBranch> out;
  if (spec.family == ChannelFamily::cat_controlled) {
    const std::size_t m = std::get<CatParams>(spec.params).m;
    for (int k = 0; k < 2; ++k) {
      ControlBranch br{k == 0 ? "a" : "b", make_qubit(k == 0 ? "0" : "1"), Complex{h, 0}, {}};
      for (std::size_t i = 0; i < m; ++i)
        br.components.push_back({make_bell(k == 0 ? BellState::psi_plus : BellState::psi_minus), {i, m + i}});
      out.push_back(std::move(br));
    }
    return out;
  }
  const auto* c = std::get_if<ControlledParams>(&spec.params);
  if (!c) throw ConfigError(std::string("family ") + to_string(spec.family) + " is not controlled");
  const std::size_t n = c->branches.front().num_qubits();
  const Complex sb = c->sign >= 0 ? Complex{h, 0} : Complex{-h, 0};
  auto slots = [](std::size_t from, std::size_t count) {
    std::vector<std::size_t> s(count);
    for (std::size_t i = 0; i < count; ++i) s[i] = from + i;
    return s;
  };
  if (c->branches.size() == 2) {
    out.push_back({"a", c->a, Complex{h, 0}, {{c->branches[0], slots(0, n)}}});
    out.push_back({"b", c->b, sb, {{c->branches[1], slots(0, n)}}});
  } else {
    out.push_back({"a", c->a, Complex{h, 0}, {{c->branches[0], slots(0, n)}, {c->branches[1], slots(n, n)}}});
    out.push_back({"b", c->b, sb, {{c->branches[2], slots(0, n)}, {c->branches[3], slots(n, n)}}});
  }
  return out;
}

/// Places components on their slots: one dense state over `total_slots`.
inline StateVector assemble(const std::vector<BranchComponent>& comps, std::size_t total_slots,
                            std::size_t block_limit = kDefaultBlockLimit) {
  std::vector<StateVector> parts;
  std::vector<std::size_t> tensor_slots;
  for (const auto& comp : comps) {
    parts.push_back(comp.state);
    tensor_slots.insert(tensor_slots.end(), comp.slots.begin(), comp.slots.end());
  }
  if (tensor_slots.size() != total_slots) throw std::invalid_argument("components do not cover the block");
  if (total_slots > block_limit) throw CapacityError("block exceeds dense limit");
  const StateVector joint = tensor_all(parts, block_limit);
  std::vector<std::size_t> order(total_slots);
  for (std::size_t k = 0; k < total_slots; ++k) {
    auto it = std::find(tensor_slots.begin(), tensor_slots.end(), k);
    if (it == tensor_slots.end()) throw std::invalid_argument("slot not covered");
    order[k] = static_cast<std::size_t>(it - tensor_slots.begin());
  }
  return permute_qubits(joint, order);
}

inline StateVector combine_branches(const std::vector<ControlBranch>& branches,
                                    std::size_t block_limit = kDefaultBlockLimit) {
  std::size_t slots = 0;
  for (const auto& comp : branches.front().components) slots += comp.slots.size();
  if (slots + 1 > block_limit) {
    throw CapacityError("controlled block of " + std::to_string(slots + 1) + " qubits exceeds block limit");
  }
  std::vector<Complex> amps(std::size_t{2} << slots, Complex{0.0, 0.0});
  for (const auto& br : branches) {
    const StateVector term = tensor(assemble(br.components, slots, block_limit), br.flag, block_limit);
    for (std::size_t i = 0; i < amps.size(); ++i) amps[i] += br.amplitude * term[i];
  }
  return StateVector::from_amplitudes(std::move(amps));
}

/// (|psi1>|a> +- |psi2>|b>)/sqrt2, or the (2N+1)-qubit form; controller last.
inline StateVector make_controlled_state(const ChannelSpec& spec,
                                         std::size_t block_limit = kDefaultBlockLimit) {
  if (spec.family == ChannelFamily::cat_controlled) return combine_branches(controlled_branches(spec), block_limit);
  if (!std::holds_alternative<ControlledParams>(spec.params)) {
    throw ConfigError(std::string("family ") + to_string(spec.family) + " is not a controlled family");
  }
  return combine_branches(controlled_branches(spec), block_limit);
}

/// (|Cat1>|0> + |Cat2>|1>)/sqrt2 over 2m + 1 qubits.
inline StateVector make_cat_controlled(std::size_t m, std::size_t block_limit = kDefaultBlockLimit) {
  if (m < 1) throw std::invalid_argument("cat channel requires m >= 1");
  if (2 * m + 1 > block_limit) throw CapacityError("cat block of " + std::to_string(2 * m + 1) + " qubits exceeds block limit");
  return combine_branches(controlled_branches(cat_channel(m)), block_limit);
}

/// 2^(-s/2) sum_i |e_i>|f_i> over m + l qubits.
inline StateVector make_swap_state(const ChannelSpec& spec, std::size_t block_limit = kDefaultBlockLimit) {
  if (spec.family != ChannelFamily::swap_generic) throw ConfigError("not a swap channel");
  require_valid(spec);
  const auto& p = std::get<SwapParams>(spec.params);
  if (p.m + p.l > block_limit) throw CapacityError("swap block exceeds block limit");
  const double w = 1.0 / std::sqrt(static_cast<double>(p.e.size()));
  std::vector<Complex> amps(std::size_t{1} << (p.m + p.l), Complex{0.0, 0.0});
  for (std::size_t i = 0; i < p.e.size(); ++i) {
    const StateVector t = tensor(p.e[i], p.f[i], block_limit);
    for (std::size_t k = 0; k < amps.size(); ++k) amps[k] += w * t[k];
  }
  return StateVector::from_amplitudes(std::move(amps));
}

/// Initial state of one block for non-controlled use.
inline StateVector resource_state(const ChannelSpec& spec, std::size_t block_limit = kDefaultBlockLimit) {
  switch (spec.family) {
    case ChannelFamily::bell: return make_bell(BellState::psi_plus);
    case ChannelFamily::n_qubit_dense:
      require_valid(spec);
      return std::get<DenseParams>(spec.params).state;
    case ChannelFamily::swap_generic: return make_swap_state(spec, block_limit);
    case ChannelFamily::ghz_like: return make_controlled_state(spec, block_limit);
    default: return make_controlled_state(spec, block_limit);
  }
}

}  // namespace cdsqc
