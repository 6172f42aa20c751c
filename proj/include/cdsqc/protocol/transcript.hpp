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
#include <optional>
#include <string>
#include <vector>

#include "cdsqc/eavesdrop/check_report.hpp"
#include "cdsqc/protocol/types.hpp"
#include "json.hpp"

namespace cdsqc {

using Json = nlohmann::json;

enum class EventKind {
  prepare_resource,
  retain_controller,
  permute,
  prepare_decoys,
  insert_decoys,
  transmit,
  attack,
  acknowledge,
  disclose_decoys,
  check_result,
  abort,
  restart,
  encode,
  disclose_control,
  decode,
};

namespace detail {
inline constexpr NameTable<EventKind, 15> kEventKinds{{
    {EventKind::prepare_resource, "prepare_resource"},
    {EventKind::retain_controller, "retain_controller"},
    {EventKind::permute, "permute"},
    {EventKind::prepare_decoys, "prepare_decoys"},
    {EventKind::insert_decoys, "insert_decoys"},
    {EventKind::transmit, "transmit"},
    {EventKind::attack, "attack"},
    {EventKind::acknowledge, "acknowledge"},
    {EventKind::disclose_decoys, "disclose_decoys"},
    {EventKind::check_result, "check_result"},
    {EventKind::abort, "abort"},
    {EventKind::restart, "restart"},
    {EventKind::encode, "encode"},
    {EventKind::disclose_control, "disclose_control"},
    {EventKind::decode, "decode"},
}};
}  // namespace detail

inline std::string to_string(EventKind k) { return detail::name_of(detail::kEventKinds, k); }
inline EventKind parse_event_kind(std::string_view s) { return detail::parse_name(detail::kEventKinds, s, "event kind"); }

struct Event {
  std::size_t seq = 0;
  Actor actor = Actor::charlie;
  EventKind kind = EventKind::prepare_resource;
  Json payload = Json::object();
  std::uint64_t qubit_cost = 0;
  std::uint64_t classical_bit_cost = 0;

  friend bool operator==(const Event&, const Event&) = default;
};

struct SessionResult {
  bool aborted = false;
  std::size_t attempts = 0;
  std::vector<std::string> delivered;  // bit strings, one per lane
  std::vector<CheckReport> checks;     // summaries (no per-decoy detail)

  friend bool operator==(const SessionResult&, const SessionResult&) = default;
};

inline constexpr const char* kTranscriptFormat = "cdsqc-transcript";
inline constexpr const char* kTranscriptVersion = "1";

struct TranscriptHeader {
  std::string format = kTranscriptFormat;
  std::string version = kTranscriptVersion;
  std::uint64_t seed = 0;
  std::string config;     // canonical config text
  std::string adversary;  // canonical attack text
  std::vector<std::string> messages;

  friend bool operator==(const TranscriptHeader&, const TranscriptHeader&) = default;
};

struct Transcript {
  TranscriptHeader header;
  std::vector<Event> events;
  std::optional<SessionResult> result;

  const Event& append(Actor actor, EventKind kind, Json payload = Json::object(), std::uint64_t qubits = 0,
                      std::uint64_t bits = 0) {
    events.push_back({events.size(), actor, kind, std::move(payload), qubits, bits});
    return events.back();
  }

  bool complete() const { return result.has_value(); }

  /// Index of the last event of `kind` whose payload "link" equals `link`.
  std::optional<std::size_t> last_on_link(EventKind kind, Link link) const {
    const std::string name = to_string(link);
    for (std::size_t i = events.size(); i-- > 0;) {
      const auto& e = events[i];
      if (e.kind == kind && e.payload.contains("link") && e.payload["link"] == name) return i;
    }
    return std::nullopt;
  }

  friend bool operator==(const Transcript&, const Transcript&) = default;
};

}  // namespace cdsqc
