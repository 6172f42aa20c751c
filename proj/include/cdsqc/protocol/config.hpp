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

#include <cmath>
#include <cstdint>
#include <string>

#include "cdsqc/adversary/attack.hpp"
#include "cdsqc/catalog/channel_text.hpp"
#include "cdsqc/catalog/states.hpp"
#include "cdsqc/protocol/types.hpp"

namespace cdsqc {

struct SessionConfig {
  Protocol protocol = Protocol::cdsqc;
  Subprotocol subprotocol = Subprotocol::cl;
  ChannelSpec channel = bell_channel();
  std::size_t n = 2;
  CheckMode check = CheckMode::bb84;  // Charlie's distribution legs
  double decoy_fraction = 0.5;
  std::uint64_t seed = 0;
  double error_threshold = 0.0;
  std::size_t max_attempts = 1;
};

inline bool accepts_channel(Protocol p, ChannelFamily f) {
  switch (p) {
    case Protocol::cdsqc:
      return f == ChannelFamily::bell || f == ChannelFamily::ghz_like || f == ChannelFamily::n_qubit_dense;
    case Protocol::cdsqc_alt2: return f == ChannelFamily::swap_generic;
    case Protocol::cdsqc_alt3:
      return f == ChannelFamily::ghz_like || f == ChannelFamily::controlled_n_plus_1 ||
             f == ChannelFamily::cat_controlled;
    case Protocol::cbdsqc:
      return f == ChannelFamily::bell || f == ChannelFamily::five_qubit_bcst ||
             f == ChannelFamily::controlled_2n_plus_1;
  }
  return false;
}

inline void validate(const SessionConfig& c) {
  if (!accepts_channel(c.protocol, c.channel.family)) {
    throw ConfigError("protocol " + to_string(c.protocol) + " cannot run on a " + to_string(c.channel.family) +
                      " channel");
  }
  require_valid(c.channel);
  const std::size_t min_n = c.protocol == Protocol::cdsqc_alt3 ? 1 : 2;
  if (c.n < min_n) throw ConfigError("n must be at least " + std::to_string(min_n) + " for " + to_string(c.protocol));
  if (!(c.decoy_fraction >= 0.0 && c.decoy_fraction < 1.0)) throw ConfigError("decoy fraction must lie in [0, 1)");
  if (!(c.error_threshold >= 0.0 && c.error_threshold <= 1.0)) throw ConfigError("error threshold must lie in [0, 1]");
  if (c.max_attempts < 1) throw ConfigError("max_attempts must be at least 1");
}

/// Decoys for a transmitted sub-sequence of k qubits: k f / (1 - f), so that
/// a fraction f of the travelling qubits are decoys. gv rounds up to pairs.
inline std::size_t decoy_count(std::size_t k, double fraction, CheckMode mode) {
  if (fraction <= 0.0 || k == 0) return 0;
  auto d = static_cast<std::size_t>(std::llround(static_cast<double>(k) * fraction / (1.0 - fraction)));
  if (mode == CheckMode::gv && d % 2 == 1) ++d;
  return d;
}

/// "protocol=..;subprotocol=..;channel=..;n=..;check=..;decoy_fraction=..;
/// error_threshold=..;max_attempts=.." (the seed travels separately).
inline std::string format_config(const SessionConfig& c) {
  return "protocol=" + to_string(c.protocol) + ";subprotocol=" + to_string(c.subprotocol) +
         ";channel=" + format_channel(c.channel) + ";n=" + std::to_string(c.n) + ";check=" + to_string(c.check) +
         ";decoy_fraction=" + detail::format_double(c.decoy_fraction) +
         ";error_threshold=" + detail::format_double(c.error_threshold) +
         ";max_attempts=" + std::to_string(c.max_attempts);
}

inline SessionConfig parse_config(std::string_view text, std::uint64_t seed = 0) {
  SessionConfig c;
  c.seed = seed;
  std::size_t start = 0;
  while (start < text.size()) {
    const auto end = std::min(text.find(';', start), text.size());
    const auto item = text.substr(start, end - start);
    const auto eq = item.find('=');
    if (eq == std::string_view::npos) throw ConfigError("malformed config item '" + std::string(item) + "'");
    const auto key = item.substr(0, eq);
    const std::string val(item.substr(eq + 1));
    if (key == "protocol") c.protocol = parse_protocol(val);
    else if (key == "subprotocol") c.subprotocol = parse_subprotocol(val);
    else if (key == "channel") c.channel = parse_channel(val);
    else if (key == "n") c.n = detail::parse_size(val, "n");
    else if (key == "check") c.check = parse_check_mode(val);
    else if (key == "decoy_fraction") c.decoy_fraction = detail::parse_double(val, "decoy fraction");
    else if (key == "error_threshold") c.error_threshold = detail::parse_double(val, "error threshold");
    else if (key == "max_attempts") c.max_attempts = detail::parse_size(val, "max_attempts");
    else throw ConfigError("unknown config key '" + std::string(key) + "'");
    start = end + 1;
  }
  validate(c);
  return c;
}

}  // namespace cdsqc
