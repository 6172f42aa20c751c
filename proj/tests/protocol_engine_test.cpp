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

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

#include "cdsqc/catalog/channel_text.hpp"
#include "cdsqc/protocol/session.hpp"
#include "gtest/gtest.h"

using namespace cdsqc;

namespace {

SessionConfig bell_config(std::size_t n, Subprotocol sub = Subprotocol::cl, std::uint64_t seed = 0) {
  SessionConfig c;
  c.protocol = Protocol::cdsqc;
  c.subprotocol = sub;
  c.n = n;
  c.seed = seed;
  return c;
}

SessionConfig config_of(const std::string& protocol, const std::string& channel, std::size_t n,
                        std::uint64_t seed = 0) {
  return parse_config("protocol=" + protocol + ";subprotocol=cl;channel=" + channel + ";n=" + std::to_string(n) +
                          ";check=bb84;decoy_fraction=0.5;error_threshold=0;max_attempts=1",
                      seed);
}

std::vector<QubitId> block_of(const Session& s, std::size_t b) { return s.block_qubits().at(b); }

bool same_up_to_phase(const StateVector& a, const StateVector& b) { return fidelity(a, b) > 1.0 - 1e-12; }

}  // namespace

TEST(CharliePrepare, BellSequences) {
  Session s(bell_config(2));
  s.charlie_prepare();
  const auto& l = s.lane(Lane::alice_to_bob);
  ASSERT_EQ(l.sender_seq.size(), 2u);
  EXPECT_EQ(l.sender_seq[0].block, 0u);
  EXPECT_EQ(l.sender_seq[0].slot, 0u);
  EXPECT_EQ(l.sender_seq[1].block, 1u);
  EXPECT_EQ(l.sender_seq[1].slot, 0u);
  EXPECT_EQ(l.retained_seq[0].block, 0u);
  EXPECT_EQ(l.retained_seq[0].slot, 1u);
  EXPECT_EQ(l.retained_seq[1].block, 1u);
  EXPECT_EQ(l.retained_seq[1].slot, 1u);
  for (std::size_t b = 0; b < 2; ++b) {
    EXPECT_TRUE(same_up_to_phase(s.qubits().state_of(block_of(s, b)), make_bell(BellState::psi_plus)));
  }
  EXPECT_EQ(s.phase(), Phase::prepared);
}

TEST(CharliePrepare, GhzLikeAlt3RetainsLastSlot) {
  Session s(config_of("cdsqc_alt3", "ghz-like", 1));
  s.charlie_prepare();
  ASSERT_EQ(s.controller_seq().size(), 1u);
  EXPECT_EQ(s.controller_seq()[0].slot, 2u);
  EXPECT_EQ(s.lane(Lane::alice_to_bob).sender_seq[0].slot, 0u);
  EXPECT_EQ(s.lane(Lane::alice_to_bob).retained_seq[0].slot, 1u);
  EXPECT_FALSE(s.lane(Lane::alice_to_bob).pi.has_value());
}

TEST(CharliePrepare, RejectsSingleBlockAndWrongChannel) {
  EXPECT_THROW(Session(bell_config(1)), ConfigError);
  EXPECT_THROW(Session(config_of("cdsqc_alt2", "bell", 2)), ConfigError);
  EXPECT_THROW(Session(config_of("cdsqc_alt3", "bell", 2)), ConfigError);
}

TEST(CharliePermute, Examples) {
  ParticleSequence pb = {{0, 1, ParticleKind::message, kNoDecoy, 1}, {1, 1, ParticleKind::message, kNoDecoy, 3}};
  EXPECT_EQ(charlie_permute(pb, Permutation::identity(2)), pb);
  const auto swapped = charlie_permute(pb, Permutation::from_mapping({1, 0}));
  EXPECT_EQ(swapped[0].block, 1u);
  EXPECT_EQ(swapped[1].block, 0u);

  ParticleSequence four;
  for (std::size_t i = 0; i < 4; ++i) four.push_back({i, 1, ParticleKind::message, kNoDecoy, i});
  const auto pi = Permutation::from_mapping({2, 0, 3, 1});
  const auto moved = charlie_permute(four, pi);
  EXPECT_EQ(moved[0].block, 2u);
  EXPECT_EQ(moved[3].block, 1u);
  EXPECT_EQ(pi.inverse().apply(moved), four);
  EXPECT_TRUE(pi.inverse().compose(pi).is_identity());
  EXPECT_THROW(charlie_permute(four, Permutation::identity(3)), ConfigError);
}

TEST(Permutation, Validation) {
  EXPECT_THROW(Permutation::from_mapping({0, 0}), ConfigError);
  EXPECT_THROW(Permutation::from_mapping({0, 2}), ConfigError);
  SeededRng rng(1);
  for (int i = 0; i < 50; ++i) {
    const auto p = Permutation::random(7, rng);
    std::vector<std::size_t> m = p.mapping();
    std::sort(m.begin(), m.end());
    for (std::size_t k = 0; k < 7; ++k) EXPECT_EQ(m[k], k);
  }
  EXPECT_EQ(permutation_bits(4), 5u);  // log2 24 = 4.58
  EXPECT_EQ(permutation_bits(1), 0u);
  EXPECT_EQ(hamming(Permutation::from_mapping({1, 0, 2}), Permutation::identity(3)), 2u);
}

TEST(InsertDecoys, RemovalRestoresOrder) {
  SeededRng rng(3);
  ParticleSequence msg = {{0, 0, ParticleKind::message, kNoDecoy, 0}, {1, 0, ParticleKind::message, kNoDecoy, 1}};
  ParticleSequence dec = {{0, 0, ParticleKind::decoy, 0, 2}, {0, 0, ParticleKind::decoy, 1, 3}};
  const auto ins = insert_decoys(msg, dec, rng);
  ASSERT_EQ(ins.sequence.size(), 4u);
  for (std::size_t k = 0; k < 2; ++k) EXPECT_EQ(ins.sequence[ins.positions[k]], dec[k]);
  const auto [rest, decoys] = remove_decoys(ins.sequence, ins.positions);
  EXPECT_EQ(rest, msg);
  EXPECT_EQ(decoys, dec);

  const auto none = insert_decoys(msg, {}, rng);
  EXPECT_EQ(none.sequence, msg);
  EXPECT_TRUE(none.positions.empty());
}

// Each of the 200 slots holds a decoy with probability 1/2 per run; the
// per-slot counts over 10,000 runs are tested against that binomial.
TEST(InsertDecoys, PositionsUniformChiSquare) {
  const std::size_t n = 100, runs = 10000, slots = 2 * n;
  ParticleSequence msg, dec;
  for (std::size_t i = 0; i < n; ++i) {
    msg.push_back({i, 0, ParticleKind::message, kNoDecoy, i});
    dec.push_back({0, 0, ParticleKind::decoy, i, n + i});
  }
  std::vector<double> count(slots, 0.0);
  SeededRng rng(2024);
  for (std::size_t r = 0; r < runs; ++r)
    for (auto p : insert_decoys(msg, dec, rng).positions) count[p] += 1.0;
  const double expect = runs * 0.5, var = runs * 0.25;
  double stat = 0.0;
  for (double c : count) stat += (c - expect) * (c - expect) / var;
  // Slot counts sum to n * runs exactly, which removes one degree of freedom.
  const boost::math::chi_squared dist(static_cast<double>(slots - 1));
  const double p = boost::math::cdf(boost::math::complement(dist, stat * (slots - 1) / slots));
  EXPECT_GT(p, 0.01) << "chi2=" << stat;
}

TEST(InsertDecoys, DecoyCountFollowsFraction) {
  EXPECT_EQ(decoy_count(8, 0.5, CheckMode::bb84), 8u);
  EXPECT_EQ(decoy_count(8, 0.0, CheckMode::bb84), 0u);
  EXPECT_EQ(decoy_count(3, 0.5, CheckMode::gv), 4u);
  EXPECT_EQ(decoy_count(6, 0.25, CheckMode::bb84), 2u);
}

TEST(Encode, ClMessage01AppliesX) {
  auto cfg = bell_config(2);
  Session s(cfg);
  s.charlie_prepare();
  ASSERT_TRUE(s.charlie_distribute());
  ASSERT_TRUE(s.alice_encode("0100"));
  // Block 0 now (X (x) I)|psi+> = |phi+>, block 1 untouched.
  EXPECT_TRUE(same_up_to_phase(s.qubits().state_of(block_of(s, 0)), make_bell(BellState::phi_plus)));
  EXPECT_TRUE(same_up_to_phase(s.qubits().state_of(block_of(s, 1)), make_bell(BellState::psi_plus)));
}

TEST(Encode, Cl1110AppliesZThenIY) {
  Session s(bell_config(2));
  s.charlie_prepare();
  ASSERT_TRUE(s.charlie_distribute());
  ASSERT_TRUE(s.alice_encode("1110"));
  const StateVector psi = make_bell(BellState::psi_plus);
  const std::vector<std::size_t> first{0};
  EXPECT_TRUE(same_up_to_phase(s.qubits().state_of(block_of(s, 0)), apply_gate(psi, gates::z(), first)));
  EXPECT_TRUE(same_up_to_phase(s.qubits().state_of(block_of(s, 1)), apply_gate(psi, gates::iy(), first)));
}

TEST(Encode, PpZeroIsIdentityAndLengthChecked) {
  Session s(bell_config(2, Subprotocol::pp));
  s.charlie_prepare();
  ASSERT_TRUE(s.charlie_distribute());
  EXPECT_THROW(s.alice_encode("0000"), ConfigError);
  EXPECT_THROW(s.alice_encode("0x"), ConfigError);
  ASSERT_TRUE(s.alice_encode("01"));
  EXPECT_TRUE(same_up_to_phase(s.qubits().state_of(block_of(s, 0)), make_bell(BellState::psi_plus)));
  EXPECT_TRUE(same_up_to_phase(s.qubits().state_of(block_of(s, 1)), make_bell(BellState::phi_plus)));
}

TEST(Disclose, OrderingEnforced) {
  Session s(bell_config(4));
  EXPECT_THROW(s.charlie_distribute(), ProtocolError);
  s.charlie_prepare();
  ASSERT_TRUE(s.charlie_distribute());
  EXPECT_THROW(s.charlie_disclose(), ProtocolError);
  EXPECT_THROW(s.bob_decode(), ProtocolError);
  ASSERT_TRUE(s.alice_encode("01101100"));
  EXPECT_THROW(s.bob_decode(), ProtocolError);
  s.charlie_disclose();
  EXPECT_EQ(s.bob_decode(), "01101100");
  EXPECT_THROW(s.bob_decode(), ProtocolError);
  EXPECT_THROW(s.alice_decode(), ConfigError);
}

TEST(Disclose, BitCosts) {
  const auto cost = [](const Transcript& t) {
    std::vector<std::uint64_t> c;
    for (const auto& e : t.events)
      if (e.kind == EventKind::disclose_control) c.push_back(e.classical_bit_cost);
    return c;
  };
  const auto t4 = run_session(bell_config(4), {"00011011"});
  EXPECT_EQ(cost(t4), std::vector<std::uint64_t>{4});
  const auto ta = run_session(config_of("cdsqc_alt3", "ghz-like", 1), {"10"});
  EXPECT_EQ(cost(ta), std::vector<std::uint64_t>{1});
  const auto tb = run_session(config_of("cbdsqc", "bell", 3), {"000110", "111001"});
  EXPECT_EQ(cost(tb), (std::vector<std::uint64_t>{3, 3}));
  for (const auto& e : t4.events) {
    if (e.kind == EventKind::disclose_control) {
      EXPECT_EQ(e.payload.at("strict_bits").get<std::uint64_t>(), 5u);
      EXPECT_EQ(e.payload.at("permutation").size(), 4u);
    }
  }
}

TEST(Decode, Alt3UsesAnnouncedBranchTable) {
  // GHZ-like: branch a leaves psi+ on (A, B), branch b leaves phi+.
  std::set<char> seen;
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    Session s(config_of("cdsqc_alt3", "ghz-like", 1, seed));
    s.charlie_prepare();
    ASSERT_TRUE(s.charlie_distribute());
    ASSERT_TRUE(s.alice_encode("01"));
    s.charlie_disclose();
    const char outcome = s.controller_outcomes().at(0);
    seen.insert(outcome);
    const auto& u = s.plan().blocks[0]->units[0];
    const auto encoded = u.table(std::string(1, outcome)).encode(
        make_bell(outcome == 'a' ? BellState::psi_plus : BellState::phi_plus), 1);
    EXPECT_TRUE(same_up_to_phase(s.qubits().state_of({block_of(s, 0)[0], block_of(s, 0)[1]}), encoded));
    EXPECT_EQ(s.bob_decode(), "01");
  }
  EXPECT_EQ(seen, (std::set<char>{'a', 'b'}));
}

// Before Charlie announces, Bob's Bell statistics are the even mixture of
// the two branch tables' encoded states.
TEST(Decode, Alt3PreAnnouncementIsEvenMixture) {
  for (std::size_t n : {1u, 2u, 3u}) {
    Session s(config_of("cdsqc_alt3", "ghz-like", n, 5));
    s.charlie_prepare();
    ASSERT_TRUE(s.charlie_distribute());
    const std::string msg = std::string("011011").substr(0, 2 * n);
    ASSERT_TRUE(s.alice_encode(msg));
    const auto dists = s.decode_distributions(Lane::alice_to_bob, Permutation::identity(n));
    const auto& u = s.plan().blocks[0]->units[0];
    for (std::size_t k = 0; k < n; ++k) {
      const auto m = bits_to_index(std::string_view(msg).substr(2 * k, 2));
      std::map<std::string, double> expect;
      for (const std::string br : {"a", "b"}) {
        const auto& table = u.table(br);
        const auto st = table.encode(make_bell(br == "a" ? BellState::psi_plus : BellState::phi_plus), m);
        for (std::size_t i = 0; i < table.decode_basis.size(); ++i)
          expect[table.decode_basis.labels()[i]] += 0.5 * std::norm(inner(table.decode_basis.vector(i), st));
      }
      for (const auto& e : dists[k].entries) EXPECT_NEAR(e.probability, expect[e.label], 1e-12) << e.label;
    }
  }
}

TEST(Decode, WrongPairingIsUniform) {
  Session s(bell_config(3, Subprotocol::cl, 9));
  s.charlie_prepare();
  ASSERT_TRUE(s.charlie_distribute());
  ASSERT_TRUE(s.alice_encode("000000"));
  const auto right = s.true_pairing(Lane::alice_to_bob);
  const auto wrong = right.compose(Permutation::from_mapping({1, 2, 0}));
  for (const auto& d : s.decode_distributions(Lane::alice_to_bob, wrong))
    for (const auto& e : d.entries) EXPECT_NEAR(e.probability, 0.25, 1e-12);
  for (const auto& d : s.decode_distributions(Lane::alice_to_bob, right)) EXPECT_NEAR(d.probability("psi+"), 1.0, 1e-12);
}

TEST(RunSession, HonestCdsqcN4) {
  const auto t = run_session(bell_config(4, Subprotocol::cl, 7), {"10110001"});
  ASSERT_TRUE(t.complete());
  EXPECT_FALSE(t.result->aborted);
  EXPECT_EQ(t.result->delivered, std::vector<std::string>{"10110001"});
  for (const auto& c : t.result->checks) EXPECT_EQ(c.error_rate, 0.0);
}

TEST(RunSession, CbdsqcDeliversBothWays) {
  const auto t = run_session(config_of("cbdsqc", "bell", 4, 3), {"11100100", "00011011"});
  EXPECT_FALSE(t.result->aborted);
  EXPECT_EQ(t.result->delivered, (std::vector<std::string>{"11100100", "00011011"}));
  EXPECT_THROW(run_session(config_of("cbdsqc", "bell", 4), {"11100100"}), ConfigError);
}

TEST(RunSession, EverySubprotocolEveryMessage) {
  for (auto sub : {Subprotocol::pp, Subprotocol::cl, Subprotocol::dll, Subprotocol::pp_gv, Subprotocol::cl_gv,
                   Subprotocol::dll_gv}) {
    const std::size_t width = one_bit(sub) ? 2 : 4;
    for (std::uint32_t m = 0; m < (1u << width); ++m) {
      const std::string msg = index_to_bits(m, width);
      const auto t = run_session(bell_config(2, sub, m), {msg});
      EXPECT_EQ(t.result->delivered[0], msg) << to_string(sub);
    }
  }
}

TEST(RunSession, AllChannelFamilies) {
  const std::vector<std::pair<std::string, std::string>> cases = {
      {"cdsqc", "ghz-like"},
      {"cdsqc", "dense:state=ghz,p=2"},
      {"cdsqc", "dense:state=w,p=2"},
      {"cdsqc_alt2", "swap:s=1,m=2,l=1"},
      {"cdsqc_alt2", "swap:s=2,m=3,l=2"},
      {"cdsqc_alt3", "controlled:psi1=phi-,psi2=psi+,a=+,b=-,sign=-"},
      {"cdsqc_alt3", "cat:m=2"},
      {"cdsqc_alt3", "cat:m=5"},
      {"cbdsqc", "controlled5:psi1=psi+,psi2=phi+,psi3=psi-,psi4=phi-"},
  };
  for (const auto& [protocol, channel] : cases) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const auto cfg = config_of(protocol, channel, 3, seed);
      const auto plan = plan_session(cfg);
      SeededRng rng(seed + 100);
      std::vector<std::string> msgs;
      for (Lane l : plan.lanes) msgs.push_back(random_bits(plan.capacity.at(l), rng));
      const auto t = run_session(cfg, msgs);
      EXPECT_FALSE(t.result->aborted);
      EXPECT_EQ(t.result->delivered, msgs) << protocol << " " << channel;
    }
  }
}

TEST(RunSession, PpCapacityIsHalfOfCl) {
  EXPECT_EQ(plan_session(bell_config(6, Subprotocol::pp)).capacity.at(Lane::alice_to_bob), 6u);
  EXPECT_EQ(plan_session(bell_config(6, Subprotocol::cl)).capacity.at(Lane::alice_to_bob), 12u);
}

TEST(RunSession, Deterministic) {
  auto cfg = bell_config(5, Subprotocol::cl_gv, 42);
  const auto a = run_session(cfg, {"0110110001"});
  const auto b = run_session(cfg, {"0110110001"});
  EXPECT_EQ(a, b);
  cfg.seed = 43;
  EXPECT_NE(run_session(cfg, {"0110110001"}).events, a.events);
}

TEST(RunSession, AbortAndRestart) {
  auto cfg = bell_config(32, Subprotocol::cl, 1);
  cfg.max_attempts = 3;
  AttackModel eve;
  eve.kind = AttackKind::intercept_resend_random_basis;
  const std::string msg(64, '1');
  const auto t = run_session(cfg, {msg}, eve);
  EXPECT_TRUE(t.result->aborted);
  EXPECT_EQ(t.result->attempts, 3u);
  std::size_t aborts = 0, restarts = 0;
  for (const auto& e : t.events) {
    aborts += e.kind == EventKind::abort;
    restarts += e.kind == EventKind::restart;
  }
  EXPECT_EQ(aborts, 3u);
  EXPECT_EQ(restarts, 2u);
  cfg.error_threshold = 1.0;
  const auto tolerant = run_session(cfg, {msg}, eve);
  EXPECT_FALSE(tolerant.result->aborted);
  EXPECT_EQ(tolerant.result->attempts, 1u);
}

TEST(RunSession, EventOrderFollowsSteps) {
  const auto t = run_session(bell_config(3), {"000111"});
  std::vector<EventKind> kinds;
  for (const auto& e : t.events) kinds.push_back(e.kind);
  auto first = [&](EventKind k) { return std::find(kinds.begin(), kinds.end(), k) - kinds.begin(); };
  EXPECT_LT(first(EventKind::prepare_resource), first(EventKind::permute));
  EXPECT_LT(first(EventKind::permute), first(EventKind::insert_decoys));
  EXPECT_LT(first(EventKind::acknowledge), first(EventKind::disclose_decoys));
  EXPECT_LT(first(EventKind::check_result), first(EventKind::encode));
  EXPECT_LT(first(EventKind::encode), first(EventKind::disclose_control));
  EXPECT_LT(first(EventKind::disclose_control), first(EventKind::decode));
  for (std::size_t i = 0; i < t.events.size(); ++i) EXPECT_EQ(t.events[i].seq, i);
}

TEST(RunSession, CbdsqcHalvesAreSymmetric) {
  const auto t = run_session(config_of("cbdsqc", "bell", 3, 8), {"010101", "101010"});
  std::map<std::string, std::vector<std::pair<std::string, std::string>>> by_lane;
  for (const auto& e : t.events) {
    if (!e.payload.contains("lane")) continue;
    by_lane[e.payload["lane"]].emplace_back(to_string(e.kind), e.payload.value("sequence", ""));
  }
  EXPECT_EQ(by_lane["alice_to_bob"], by_lane["bob_to_alice"]);
  std::map<Actor, int> encoders;
  for (const auto& e : t.events)
    if (e.kind == EventKind::encode) ++encoders[e.actor];
  EXPECT_EQ(encoders[Actor::alice], 1);
  EXPECT_EQ(encoders[Actor::bob], 1);
}

TEST(RunSession, LargeCatBlockRuns) {
  const auto cfg = config_of("cdsqc_alt3", "cat:m=50", 1, 4);
  SeededRng rng(1);
  const std::string msg = random_bits(100, rng);
  const auto t = run_session(cfg, {msg});
  EXPECT_EQ(t.result->delivered[0], msg);
}
