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

#include <charconv>
#include <map>
#include <string>
#include <string_view>

#include "cdsqc/catalog/channel_spec.hpp"
#include "cdsqc/errors.hpp"

namespace cdsqc {

namespace detail {

inline std::map<std::string, std::string> parse_params(std::string_view s, std::string_view what) {
  std::map<std::string, std::string> out;
  std::size_t start = 0;
  while (start < s.size()) {
    const auto end = std::min(s.find(',', start), s.size());
    const auto item = s.substr(start, end - start);
    const auto eq = item.find('=');
    if (eq == std::string_view::npos || eq == 0) {
      throw ConfigError("malformed " + std::string(what) + " parameter '" + std::string(item) + "'");
    }
    if (!out.emplace(std::string(item.substr(0, eq)), std::string(item.substr(eq + 1))).second) {
      throw ConfigError("repeated " + std::string(what) + " parameter '" + std::string(item.substr(0, eq)) + "'");
    }
    start = end + 1;
  }
  return out;
}

inline std::size_t parse_size(const std::string& s, const char* what) {
  std::size_t v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size() || s.empty()) {
    throw ConfigError(std::string("bad ") + what + " '" + s + "'");
  }
  return v;
}

class ParamReader {
 public:
  ParamReader(std::map<std::string, std::string> p, std::string family) : p_(std::move(p)), family_(std::move(family)) {}

  std::string get(const std::string& key, const std::string& fallback) {
    auto it = p_.find(key);
    if (it == p_.end()) return fallback;
    std::string v = it->second;
    p_.erase(it);
    return v;
  }

  std::string require(const std::string& key) {
    auto it = p_.find(key);
    if (it == p_.end()) throw ConfigError(family_ + " channel needs '" + key + "'");
    std::string v = it->second;
    p_.erase(it);
    return v;
  }

  void finish() const {
    if (!p_.empty()) throw ConfigError("unknown " + family_ + " parameter '" + p_.begin()->first + "'");
  }

 private:
  std::map<std::string, std::string> p_;
  std::string family_;
};

inline int parse_sign(const std::string& s) {
  if (s == "+" || s == "plus") return +1;
  if (s == "-" || s == "minus") return -1;
  throw ConfigError("sign must be + or -, got '" + s + "'");
}

inline std::string controlled_tail(const ControlledParams& c) {
  if (c.branch_names.size() != c.branches.size() || c.a_name == "custom") {
    throw ConfigError("controlled channel with custom states has no text form");
  }
  std::string s;
  for (std::size_t i = 0; i < c.branch_names.size(); ++i)
    s += "psi" + std::to_string(i + 1) + "=" + c.branch_names[i] + ",";
  return s + "a=" + c.a_name + ",b=" + c.b_name + ",sign=" + (c.sign >= 0 ? "+" : "-");
}

}  // namespace detail

/// bell | ghz-like[:psi1=,psi2=,a=,b=,sign=] | dense:state=ghz|ghz-like|w,p=<int>
/// | swap:s=,m=,l= | controlled:psi1=,psi2=,a=,b=,sign= | controlled5:psi1..psi4,a,b,sign
/// | cat:m=<int>
inline ChannelSpec parse_channel(std::string_view text) {
  const auto colon = text.find(':');
  const std::string family(text.substr(0, colon));
  const std::string_view tail = colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1);
  detail::ParamReader r(detail::parse_params(tail, family), family);
  ChannelSpec spec;
  if (family == "bell") {
    spec = bell_channel();
  } else if (family == "ghz-like" || family == "controlled") {
    const auto psi1 = parse_bell(r.get("psi1", "psi+"));
    const auto psi2 = parse_bell(r.get("psi2", "phi+"));
    const auto a = r.get("a", "0"), b = r.get("b", "1");
    const int sign = detail::parse_sign(r.get("sign", "+"));
    spec = family == "ghz-like" ? ghz_like_channel(psi1, psi2, a, b, sign) : controlled_channel(psi1, psi2, a, b, sign);
  } else if (family == "controlled5") {
    BellState psi[4];
    for (int i = 0; i < 4; ++i) psi[i] = parse_bell(r.require("psi" + std::to_string(i + 1)));
    const auto a = r.get("a", "0"), b = r.get("b", "1");
    spec = five_qubit_channel(psi[0], psi[1], psi[2], psi[3], a, b, detail::parse_sign(r.get("sign", "+")));
  } else if (family == "dense") {
    const auto state = r.require("state");
    spec = dense_channel(state, detail::parse_size(r.get("p", "2"), "p"));
  } else if (family == "swap") {
    spec = swap_channel(detail::parse_size(r.require("s"), "s"), detail::parse_size(r.require("m"), "m"),
                        detail::parse_size(r.require("l"), "l"));
  } else if (family == "cat") {
    const auto m = detail::parse_size(r.require("m"), "m");
    if (m < 1) throw ConfigError("cat channel requires m >= 1");
    spec = cat_channel(m);
  } else {
    throw ConfigError("unknown channel family '" + family + "'");
  }
  r.finish();
  return spec;
}

/// Canonical text; every parameter spelled out.
inline std::string format_channel(const ChannelSpec& spec) {
  switch (spec.family) {
    case ChannelFamily::bell: return "bell";
    case ChannelFamily::ghz_like:
      return "ghz-like:" + detail::controlled_tail(std::get<ControlledParams>(spec.params));
    case ChannelFamily::controlled_n_plus_1:
      return "controlled:" + detail::controlled_tail(std::get<ControlledParams>(spec.params));
    case ChannelFamily::five_qubit_bcst:
      return "controlled5:" + detail::controlled_tail(std::get<ControlledParams>(spec.params));
    case ChannelFamily::n_qubit_dense: {
      const auto& d = std::get<DenseParams>(spec.params);
      if (d.state_name == "custom") throw ConfigError("dense channel with a custom state has no text form");
      return "dense:state=" + d.state_name + ",p=" + std::to_string(spec.encoder_qubits);
    }
    case ChannelFamily::swap_generic: {
      const auto& p = std::get<SwapParams>(spec.params);
      if (!p.default_bases) throw ConfigError("swap channel with custom bases has no text form");
      return "swap:s=" + std::to_string(p.s) + ",m=" + std::to_string(p.m) + ",l=" + std::to_string(p.l);
    }
    case ChannelFamily::cat_controlled: return "cat:m=" + std::to_string(std::get<CatParams>(spec.params).m);
    case ChannelFamily::controlled_2n_plus_1: throw ConfigError("custom 2N+1 channel has no text form");
  }
  throw ConfigError("unknown channel family");
}

}  // namespace cdsqc
