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

#include <istream>
#include <sstream>
#include <string>
#include <string_view>

#include "cdsqc/errors.hpp"
#include "cdsqc/protocol/transcript.hpp"

namespace cdsqc {

// One JSON object per line: a header, the events in order, then the
// result. Keys are sorted, output is compact, so equal transcripts give
// equal bytes.

inline Json to_json(const CheckReport& c) {
  return {{"link", to_string(c.link)},
          {"mode", to_string(c.mode)},
          {"compared", c.compared},
          {"mismatches", c.mismatches},
          {"error_rate", c.error_rate}};
}

inline std::string serialize_transcript(const Transcript& t) {
  std::string out;
  const auto& h = t.header;
  out += Json{{"type", "header"},
              {"format", h.format},
              {"version", h.version},
              {"seed", h.seed},
              {"config", h.config},
              {"adversary", h.adversary},
              {"messages", h.messages}}
             .dump();
  out += '\n';
  for (const auto& e : t.events) {
    out += Json{{"type", "event"},
                {"seq", e.seq},
                {"actor", to_string(e.actor)},
                {"kind", to_string(e.kind)},
                {"payload", e.payload},
                {"qubit_cost", e.qubit_cost},
                {"classical_bit_cost", e.classical_bit_cost}}
               .dump();
    out += '\n';
  }
  if (t.result) {
    Json checks = Json::array();
    for (const auto& c : t.result->checks) checks.push_back(to_json(c));
    out += Json{{"type", "result"},
                {"aborted", t.result->aborted},
                {"attempts", t.result->attempts},
                {"delivered", t.result->delivered},
                {"checks", std::move(checks)}}
               .dump();
    out += '\n';
  }
  return out;
}

namespace detail {

class LineReader {
 public:
  LineReader(const Json& j, std::size_t line) : j_(j), line_(line) {}

  const Json& at(const char* key) const {
    if (!j_.is_object() || !j_.contains(key)) fail(std::string("missing field '") + key + "'");
    return j_.at(key);
  }

  template <typename T>
  T get(const char* key) const {
    try {
      return at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
      fail(std::string("field '") + key + "' has the wrong type");
    }
  }

  template <typename F>
  auto name(const char* key, F parse) const {
    const auto s = get<std::string>(key);
    try {
      return parse(s);
    } catch (const Error& e) {
      fail(e.what());
    }
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("line " + std::to_string(line_) + ": " + what);
  }

 private:
  const Json& j_;
  std::size_t line_;
};

}  // namespace detail

inline Transcript parse_transcript(std::istream& in) {
  Transcript t;
  std::string text;
  std::size_t line = 0;
  bool have_header = false, have_result = false;
  while (std::getline(in, text)) {
    ++line;
    if (text.empty()) continue;
    Json j;
    try {
      j = Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError("line " + std::to_string(line) + ": malformed JSON (" + e.what() + ")");
    }
    const detail::LineReader r(j, line);
    const auto type = r.get<std::string>("type");
    if (have_result) r.fail("content after the result record");
    if (!have_header) {
      if (type != "header") r.fail("expected the header record first");
      const auto format = r.get<std::string>("format");
      if (format != kTranscriptFormat) r.fail("not a transcript document (format '" + format + "')");
      const auto version = r.get<std::string>("version");
      if (version != kTranscriptVersion) {
        r.fail("version mismatch: document has '" + version + "', expected '" + kTranscriptVersion + "'");
      }
      t.header.format = format;
      t.header.version = version;
      t.header.seed = r.get<std::uint64_t>("seed");
      t.header.config = r.get<std::string>("config");
      t.header.adversary = r.get<std::string>("adversary");
      t.header.messages = r.get<std::vector<std::string>>("messages");
      have_header = true;
    } else if (type == "event") {
      Event e;
      e.seq = r.get<std::size_t>("seq");
      if (e.seq != t.events.size()) {
        r.fail("event seq " + std::to_string(e.seq) + " out of order, expected " + std::to_string(t.events.size()));
      }
      e.actor = r.name("actor", parse_actor);
      e.kind = r.name("kind", parse_event_kind);
      e.payload = r.at("payload");
      if (!e.payload.is_object()) r.fail("payload must be an object");
      e.qubit_cost = r.get<std::uint64_t>("qubit_cost");
      e.classical_bit_cost = r.get<std::uint64_t>("classical_bit_cost");
      t.events.push_back(std::move(e));
    } else if (type == "result") {
      SessionResult res;
      res.aborted = r.get<bool>("aborted");
      res.attempts = r.get<std::size_t>("attempts");
      res.delivered = r.get<std::vector<std::string>>("delivered");
      const Json& checks = r.at("checks");
      if (!checks.is_array()) r.fail("checks must be an array");
      for (const auto& cj : checks) {
        const detail::LineReader cr(cj, line);
        CheckReport c;
        c.link = cr.name("link", parse_link);
        c.mode = cr.name("mode", parse_check_mode);
        c.compared = cr.get<std::size_t>("compared");
        c.mismatches = cr.get<std::size_t>("mismatches");
        c.error_rate = cr.get<double>("error_rate");
        res.checks.push_back(std::move(c));
      }
      t.result = std::move(res);
      have_result = true;
    } else {
      r.fail("unknown record type '" + type + "'");
    }
  }
  if (!have_header) throw ParseError("empty document");
  return t;
}

inline Transcript parse_transcript(std::string_view doc) {
  std::istringstream in{std::string(doc)};
  return parse_transcript(in);
}

}  // namespace cdsqc
