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
#include <string>
#include <vector>

#include "cdsqc/adversary/attack.hpp"
#include "cdsqc/adversary/semi_honest.hpp"
#include "cdsqc/protocol/session.hpp"
#include "gtest/gtest.h"

using namespace cdsqc;

namespace {

double three_sigma(double p, double n) { return 3.0 * std::sqrt(p * (1 - p) / n); }

AttackModel model(AttackKind k, double p = 1.0, std::vector<Link> taps = {}) {
  AttackModel m;
  m.kind = k;
  m.probability = p;
  m.taps = std::move(taps);
  return m;
}

// Plug-in mutual information, in bits, of a joint count table.
double mutual_information(const std::map<std::pair<std::string, std::string>, double>& joint) {
  double n = 0;
  std::map<std::string, double> a, b;
  for (const auto& [k, c] : joint) {
    a[k.first] += c;
    b[k.second] += c;
    n += c;
  }
  double mi = 0;
  for (const auto& [k, c] : joint)
    if (c > 0) mi += c / n * std::log2(c * n / (a[k.first] * b[k.second]));
  return mi;
}

}  // namespace

TEST(ApplyAttack, NoneLeavesQubits) {
  QubitRegister reg;
  SeededRng rng(1);
  const auto q = reg.add(make_bell(BellState::psi_plus));
  const auto log = apply_attack(model(AttackKind::none), {Link::charlie_to_bob}, reg, q, rng);
  EXPECT_EQ(log.attacked, 0u);
  EXPECT_NEAR(fidelity(reg.state_of(q), make_bell(BellState::psi_plus)), 1.0, 1e-12);
}

TEST(ApplyAttack, DiagonalEveOnZeroForwardsPlusOrMinus) {
  const std::vector<std::size_t> q0{0};
  const auto dist = measure_enumerate(make_qubit("0"), MeasurementBasis::diagonal(), q0);
  EXPECT_NEAR(dist.probability("+"), 0.5, 1e-12);
  EXPECT_NEAR(dist.probability("-"), 0.5, 1e-12);

  SeededRng rng(2);
  int plus = 0, diag = 0;
  for (int i = 0; i < 4000; ++i) {
    QubitRegister reg;
    const auto q = reg.add(make_qubit("0"));
    const auto log = apply_attack(model(AttackKind::intercept_resend_random_basis), {Link::charlie_to_bob}, reg, q, rng);
    ASSERT_EQ(log.records.size(), 1u);
    if (log.records[0].basis != "x") continue;
    ++diag;
    const auto fwd = reg.state_of(q);
    const bool is_plus = fidelity(fwd, make_qubit("+")) > 1 - 1e-12;
    EXPECT_TRUE(is_plus || fidelity(fwd, make_qubit("-")) > 1 - 1e-12);
    plus += is_plus;
  }
  EXPECT_NEAR(diag / 4000.0, 0.5, three_sigma(0.5, 4000));
  EXPECT_NEAR(plus / double(diag), 0.5, three_sigma(0.5, diag));
}

TEST(ApplyAttack, ComputationalVariantAlwaysZ) {
  QubitRegister reg;
  SeededRng rng(3);
  std::vector<QubitId> q;
  for (int i = 0; i < 10; ++i) q.push_back(reg.add(make_qubit("+"))[0]);
  const auto log = apply_attack(model(AttackKind::intercept_resend_computational), {Link::alice_to_bob}, reg, q, rng);
  for (const auto& r : log.records) EXPECT_EQ(r.basis, "z");
}

TEST(ApplyAttack, WrongBellPairingLeavesUniformPartners) {
  QubitRegister reg;
  const auto p = reg.add(make_bell(BellState::psi_plus));
  const auto r = reg.add(make_bell(BellState::psi_plus));
  SeededRng rng(4);
  const std::vector<QubitId> flight{p[1], r[1]};
  // Oracle: Eve's Bell measurement on the cross pair, then each branch's
  // partner-pair statistics.
  const auto before = reg.enumerate(MeasurementBasis::bell(), flight);
  for (const auto& e : before.entries) EXPECT_NEAR(e.probability, 0.25, 1e-12);
  apply_attack(model(AttackKind::bell_pairing), {Link::charlie_to_bob}, reg, flight, rng);
  const std::vector<QubitId> partners{p[0], r[0]};
  // Swapped: the partners now hold one definite Bell state.
  double top = 0.0;
  for (const auto& e : reg.enumerate(MeasurementBasis::bell(), partners).entries) top = std::max(top, e.probability);
  EXPECT_NEAR(top, 1.0, 1e-12);
  // Over many runs the (p0, r0) outcome is uniform.
  std::map<std::string, int> seen;
  for (int i = 0; i < 8000; ++i) {
    QubitRegister g;
    const auto a = g.add(make_bell(BellState::psi_plus));
    const auto b = g.add(make_bell(BellState::psi_plus));
    const std::vector<QubitId> f{a[1], b[1]};
    apply_attack(model(AttackKind::bell_pairing), {Link::charlie_to_bob}, g, f, rng);
    ++seen[g.measure(MeasurementBasis::bell(), {a[0], b[0]}, rng).label];
  }
  ASSERT_EQ(seen.size(), 4u);
  for (const auto& [label, n] : seen) EXPECT_NEAR(n / 8000.0, 0.25, three_sigma(0.25, 8000)) << label;
}

TEST(ApplyAttack, RandomPairingShufflesFirst) {
  QubitRegister reg;
  SeededRng rng(5);
  std::vector<QubitId> q;
  for (int i = 0; i < 8; ++i) q.push_back(reg.add(make_qubit("0"))[0]);
  auto m = model(AttackKind::bell_pairing);
  m.pairing = PairingStrategy::random;
  const auto log = apply_attack(m, {Link::charlie_to_bob}, reg, q, rng);
  EXPECT_EQ(log.attacked, 8u);
  bool any_non_adjacent = false;
  for (const auto& r : log.records) any_non_adjacent |= !(r.partner == r.position + 1 && r.position % 2 == 0);
  EXPECT_TRUE(any_non_adjacent);
}

TEST(ApplyAttack, SemiHonestIsNotALinkAttack) {
  QubitRegister reg;
  SeededRng rng(6);
  const auto q = reg.add(make_qubit("0"));
  EXPECT_THROW(apply_attack(model(AttackKind::semi_honest_alice_substitution), {Link::charlie_to_bob}, reg, q, rng),
               ConfigError);
  SessionConfig cfg;
  EXPECT_THROW(run_session(cfg, {"0000"}, model(AttackKind::semi_honest_alice_substitution)), ConfigError);
  EXPECT_THROW(validate(model(AttackKind::intercept_resend_random_basis, 1.5)), ConfigError);
}

// Basis-matched error rate scales as q/4.
TEST(ApplyAttack, PartialInterceptRate) {
  for (double p : {0.5, 1.0}) {
    QubitRegister reg;
    SeededRng rng(static_cast<std::uint64_t>(p * 100));
    const auto batch = prepare_decoys(CheckMode::bb84, 20000, rng);
    const auto q = qubits_of(materialize(batch, reg, 0));
    apply_attack(model(AttackKind::intercept_resend_random_basis, p), {Link::charlie_to_bob}, reg, q, rng);
    Transcript t;
    t.append(Actor::charlie, EventKind::transmit, {{"link", "charlie_to_bob"}});
    t.append(Actor::bob, EventKind::acknowledge, {{"link", "charlie_to_bob"}});
    const auto r = bb84_check(batch, reg, q, t, Link::charlie_to_bob, rng);
    EXPECT_NEAR(r.error_rate, p / 4, three_sigma(p / 4, static_cast<double>(r.compared))) << p;
  }
}

TEST(ApplyAttack, NoneTranscriptEqualsHonest) {
  SessionConfig cfg;
  cfg.n = 4;
  cfg.seed = 11;
  const auto honest = run_session(cfg, {"01011010"});
  auto none = run_session(cfg, {"01011010"}, model(AttackKind::none, 1.0, {Link::charlie_to_bob}));
  EXPECT_EQ(none.events, honest.events);
  EXPECT_EQ(none.result, honest.result);
}

// Eve Bell-measures adjacent qubits on Alice's distribution leg; encoding
// happens afterwards, so her labels carry no information on the message.
TEST(ApplyAttack, BellPairingLearnsNothingAboutMessage) {
  std::map<std::pair<std::string, std::string>, double> joint;
  SessionConfig cfg;
  cfg.n = 2;
  cfg.error_threshold = 1.0;
  const auto eve = model(AttackKind::bell_pairing, 1.0, {Link::charlie_to_alice});
  for (std::uint64_t s = 0; s < 10000; ++s) {
    cfg.seed = s;
    SeededRng mrng(s * 7919 + 1);
    const std::string msg = random_bits(4, mrng);
    Session session(cfg, eve);
    session.charlie_prepare();
    ASSERT_TRUE(session.charlie_distribute());
    ASSERT_TRUE(session.alice_encode(msg));
    ASSERT_FALSE(session.attack_logs().empty());
    joint[{session.attack_logs().front().records.front().label, msg.substr(0, 2)}] += 1;
  }
  EXPECT_LT(mutual_information(joint), 0.01);
}

TEST(AttackText, RoundTrip) {
  for (const std::string s : {"none", "intercept-resend:p=1,taps=all", "intercept-resend-computational:p=0.5,taps=charlie_to_bob",
                              "bell-pairing:p=1,pairing=random,taps=charlie_to_alice+alice_to_bob"}) {
    EXPECT_EQ(format_attack(parse_attack(s)), s);
  }
  EXPECT_THROW(parse_attack("tickle"), ConfigError);
  EXPECT_THROW(parse_attack("intercept-resend:q=1"), ConfigError);
  EXPECT_THROW(parse_attack("intercept-resend:p=2"), ConfigError);
}

TEST(SemiHonest, HhStyleBypassesControl) {
  const auto r = run_semi_honest_scenario(SemiHonestFlow::hh_style_alice_prepares, 500, 1);
  EXPECT_TRUE(r.control_bypassed);
  EXPECT_EQ(r.correct, 500u);
  ASSERT_TRUE(r.evidence.complete());
  // Bob decoded before Charlie said anything.
  std::size_t decode = 0, disclose = 0;
  for (const auto& e : r.evidence.events) {
    if (e.kind == EventKind::decode) decode = e.seq;
    if (e.kind == EventKind::disclose_control) disclose = e.seq;
  }
  EXPECT_LT(decode, disclose);
}

TEST(SemiHonest, ProposedFlowKeepsControl) {
  const auto r = run_semi_honest_scenario(SemiHonestFlow::proposed_charlie_prepares, 10000, 2);
  EXPECT_FALSE(r.control_bypassed);
  EXPECT_NEAR(r.accuracy(), 0.25, 0.02);
  for (const auto& e : r.evidence.events) EXPECT_NE(e.kind, EventKind::disclose_control);
}
