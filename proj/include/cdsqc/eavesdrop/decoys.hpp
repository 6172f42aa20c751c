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

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cdsqc/catalog/channel_spec.hpp"
#include "cdsqc/eavesdrop/check_report.hpp"
#include "cdsqc/errors.hpp"
#include "cdsqc/protocol/particles.hpp"
#include "cdsqc/protocol/transcript.hpp"
#include "cdsqc/quantum/register.hpp"
#include "cdsqc/rng.hpp"

namespace cdsqc {

struct DecoyInfo {
  std::string prepared;             // bb84: "0", "1", "+", "-"; gv: "psi+"
  std::size_t partner = kNoDecoy;   // gv only

  friend bool operator==(const DecoyInfo&, const DecoyInfo&) = default;
};

/// Sender-side record of one link's decoys. Private until disclosure.
struct DecoyBatch {
  CheckMode mode = CheckMode::bb84;
  std::vector<DecoyInfo> decoys;

  std::size_t size() const { return decoys.size(); }

  StateVector state(std::size_t i) const {
    if (mode == CheckMode::bb84) return make_qubit(decoys.at(i).prepared);
    return make_bell(BellState::psi_plus);
  }

  /// gv partner pairs (i < partner), in ascending i.
  std::vector<std::pair<std::size_t, std::size_t>> pairing() const {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t i = 0; i < decoys.size(); ++i)
      if (decoys[i].partner != kNoDecoy && i < decoys[i].partner) out.emplace_back(i, decoys[i].partner);
    return out;
  }
};

inline bool is_diagonal(const std::string& label) { return label == "+" || label == "-"; }

/// bb84: one below(4) draw per decoy picks |0>,|1>,|+>,|->. gv: count/2
/// psi+ pairs, partners adjacent in preparation order.
inline DecoyBatch prepare_decoys(CheckMode mode, std::size_t count, SeededRng& rng) {
  DecoyBatch b{mode, {}};
  if (mode == CheckMode::bb84) {
    static const char* names[] = {"0", "1", "+", "-"};
    for (std::size_t i = 0; i < count; ++i) b.decoys.push_back({names[rng.below(4)], kNoDecoy});
  } else {
    if (count % 2 != 0) throw ConfigError("gv decoys come in psi+ pairs; count must be even");
    for (std::size_t i = 0; i < count; i += 2) {
      b.decoys.push_back({"psi+", i + 1});
      b.decoys.push_back({"psi+", i});
    }
  }
  return b;
}

/// Puts the batch's states into the register; decoy ids start at `first_id`.
inline ParticleSequence materialize(const DecoyBatch& batch, QubitRegister& reg, std::size_t first_id) {
  ParticleSequence out(batch.size());
  for (std::size_t i = 0; i < batch.size(); ++i) {
    if (batch.mode == CheckMode::gv && batch.decoys[i].partner < i) continue;
    const auto ids = reg.add(batch.state(i));
    out[i] = {0, 0, ParticleKind::decoy, first_id + i, ids[0]};
    if (batch.mode == CheckMode::gv) {
      const std::size_t j = batch.decoys[i].partner;
      out[j] = {0, 0, ParticleKind::decoy, first_id + j, ids[1]};
    }
  }
  return out;
}

/// Throws unless the link's last transmission has been acknowledged.
inline void require_acknowledged(const Transcript& t, Link link) {
  const auto sent = t.last_on_link(EventKind::transmit, link);
  const auto ack = t.last_on_link(EventKind::acknowledge, link);
  if (!sent || !ack || *ack < *sent) {
    throw ProtocolError("decoy check on " + to_string(link) + " before the receiver's acknowledgment");
  }
}

/// Receiver measures every decoy in a random basis (one below(2) draw each,
/// in decoy order); only basis-matched decoys are compared.
inline CheckReport bb84_check(const DecoyBatch& batch, QubitRegister& reg, std::span<const QubitId> received,
                              const Transcript& t, Link link, SeededRng& rng) {
  if (batch.mode != CheckMode::bb84) throw ConfigError("bb84_check on a gv batch");
  if (received.size() != batch.size()) throw std::invalid_argument("received decoy count differs from batch");
  require_acknowledged(t, link);
  static const MeasurementBasis z = MeasurementBasis::computational();
  static const MeasurementBasis x = MeasurementBasis::diagonal();
  CheckReport r{link, CheckMode::bb84, 0, 0, 0.0, {}};
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const bool diag = rng.below(2) == 1;
    const auto out = reg.measure(diag ? x : z, {received[i]}, rng);
    const auto& prep = batch.decoys[i].prepared;
    CheckDetail d{i, prep, out.label, diag == is_diagonal(prep), false};
    if (d.compared) {
      ++r.compared;
      d.mismatch = out.label != prep;
      r.mismatches += d.mismatch ? 1 : 0;
    }
    r.detail.push_back(std::move(d));
  }
  r.error_rate = rate_of(r.mismatches, r.compared);
  return r;
}

/// Bell-measures each disclosed partner pair; any outcome other than psi+
/// is a mismatch. One comparison per pair.
inline CheckReport gv_check(const DecoyBatch& batch, QubitRegister& reg, std::span<const QubitId> received,
                            const std::vector<std::pair<std::size_t, std::size_t>>& pairing, const Transcript& t,
                            Link link, SeededRng& rng) {
  if (batch.mode != CheckMode::gv) throw ConfigError("gv_check on a bb84 batch");
  if (received.size() != batch.size()) throw std::invalid_argument("received decoy count differs from batch");
  std::vector<bool> used(batch.size(), false);
  for (auto [a, b] : pairing) {
    if (a >= used.size() || b >= used.size() || a == b || used[a] || used[b])
      throw std::invalid_argument("gv pairing is not a perfect matching");
    used[a] = used[b] = true;
  }
  if (pairing.size() * 2 != batch.size()) throw std::invalid_argument("gv pairing is not a perfect matching");
  require_acknowledged(t, link);
  static const MeasurementBasis bell = MeasurementBasis::bell();
  CheckReport r{link, CheckMode::gv, 0, 0, 0.0, {}};
  for (std::size_t k = 0; k < pairing.size(); ++k) {
    const auto [a, b] = pairing[k];
    const auto out = reg.measure(bell, {received[a], received[b]}, rng);
    CheckDetail d{k, "psi+", out.label, true, out.label != "psi+"};
    ++r.compared;
    r.mismatches += d.mismatch ? 1 : 0;
    r.detail.push_back(std::move(d));
  }
  r.error_rate = rate_of(r.mismatches, r.compared);
  return r;
}

}  // namespace cdsqc
