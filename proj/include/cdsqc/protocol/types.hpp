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
#include <string>
#include <string_view>
#include <utility>

#include "cdsqc/errors.hpp"

namespace cdsqc {

enum class Actor { charlie, alice, bob, eve };
enum class Link { charlie_to_alice, charlie_to_bob, alice_to_bob, bob_to_alice };
enum class Lane { alice_to_bob, bob_to_alice };
enum class Protocol { cdsqc, cbdsqc, cdsqc_alt2, cdsqc_alt3 };
enum class Subprotocol { pp, cl, dll, pp_gv, cl_gv, dll_gv };
enum class CheckMode { bb84, gv };

namespace detail {

template <class E, std::size_t N>
using NameTable = std::array<std::pair<E, std::string_view>, N>;

template <class E, std::size_t N>
std::string name_of(const NameTable<E, N>& t, E e) {
  for (const auto& [k, v] : t)
    if (k == e) return std::string(v);
  throw std::logic_error("unnamed enumerator");
}

template <class E, std::size_t N>
E parse_name(const NameTable<E, N>& t, std::string_view s, const char* what) {
  for (const auto& [k, v] : t)
    if (v == s) return k;
  throw ConfigError(std::string("unknown ") + what + " '" + std::string(s) + "'");
}

inline constexpr NameTable<Actor, 4> kActors{{{Actor::charlie, "charlie"}, {Actor::alice, "alice"},
                                              {Actor::bob, "bob"}, {Actor::eve, "eve"}}};
inline constexpr NameTable<Link, 4> kLinks{{{Link::charlie_to_alice, "charlie_to_alice"},
                                            {Link::charlie_to_bob, "charlie_to_bob"},
                                            {Link::alice_to_bob, "alice_to_bob"},
                                            {Link::bob_to_alice, "bob_to_alice"}}};
inline constexpr NameTable<Lane, 2> kLanes{{{Lane::alice_to_bob, "alice_to_bob"}, {Lane::bob_to_alice, "bob_to_alice"}}};
inline constexpr NameTable<Protocol, 4> kProtocols{{{Protocol::cdsqc, "cdsqc"},
                                                    {Protocol::cbdsqc, "cbdsqc"},
                                                    {Protocol::cdsqc_alt2, "cdsqc_alt2"},
                                                    {Protocol::cdsqc_alt3, "cdsqc_alt3"}}};
inline constexpr NameTable<Subprotocol, 6> kSubprotocols{{{Subprotocol::pp, "pp"},
                                                          {Subprotocol::cl, "cl"},
                                                          {Subprotocol::dll, "dll"},
                                                          {Subprotocol::pp_gv, "pp_gv"},
                                                          {Subprotocol::cl_gv, "cl_gv"},
                                                          {Subprotocol::dll_gv, "dll_gv"}}};
inline constexpr NameTable<CheckMode, 2> kChecks{{{CheckMode::bb84, "bb84"}, {CheckMode::gv, "gv"}}};

}  // namespace detail

inline std::string to_string(Actor a) { return detail::name_of(detail::kActors, a); }
inline std::string to_string(Link l) { return detail::name_of(detail::kLinks, l); }
inline std::string to_string(Lane l) { return detail::name_of(detail::kLanes, l); }
inline std::string to_string(Protocol p) { return detail::name_of(detail::kProtocols, p); }
inline std::string to_string(Subprotocol s) { return detail::name_of(detail::kSubprotocols, s); }
inline std::string to_string(CheckMode c) { return detail::name_of(detail::kChecks, c); }

inline Actor parse_actor(std::string_view s) { return detail::parse_name(detail::kActors, s, "actor"); }
inline Link parse_link(std::string_view s) { return detail::parse_name(detail::kLinks, s, "link"); }
inline Lane parse_lane(std::string_view s) { return detail::parse_name(detail::kLanes, s, "lane"); }
inline Protocol parse_protocol(std::string_view s) { return detail::parse_name(detail::kProtocols, s, "protocol"); }
inline Subprotocol parse_subprotocol(std::string_view s) {
  return detail::parse_name(detail::kSubprotocols, s, "subprotocol");
}
inline CheckMode parse_check_mode(std::string_view s) { return detail::parse_name(detail::kChecks, s, "check"); }

inline Actor sender_of(Lane l) { return l == Lane::alice_to_bob ? Actor::alice : Actor::bob; }
inline Actor receiver_of(Lane l) { return l == Lane::alice_to_bob ? Actor::bob : Actor::alice; }
inline Link link_of(Lane l) { return l == Lane::alice_to_bob ? Link::alice_to_bob : Link::bob_to_alice; }
inline Actor receiver_of(Link l) {
  switch (l) {
    case Link::charlie_to_alice:
    case Link::bob_to_alice: return Actor::alice;
    default: return Actor::bob;
  }
}
inline Actor sender_of(Link l) {
  switch (l) {
    case Link::alice_to_bob: return Actor::alice;
    case Link::bob_to_alice: return Actor::bob;
    default: return Actor::charlie;
  }
}

/// pp variants carry one bit per coding unit.
inline bool one_bit(Subprotocol s) { return s == Subprotocol::pp || s == Subprotocol::pp_gv; }

/// Check used on the sender-to-receiver leg.
inline CheckMode transfer_check(Subprotocol s) {
  return (s == Subprotocol::pp_gv || s == Subprotocol::cl_gv || s == Subprotocol::dll_gv) ? CheckMode::gv
                                                                                           : CheckMode::bb84;
}

}  // namespace cdsqc
