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

#include <cmath>
#include <map>
#include <set>
#include <vector>

#include "cdsqc/catalog/dense_coding.hpp"
#include "cdsqc/catalog/states.hpp"
#include "cdsqc/quantum/measurement.hpp"
#include "gtest/gtest.h"

using namespace cdsqc;

namespace {

const double kH = 1.0 / std::sqrt(2.0);
const BellState kAllBell[] = {BellState::psi_plus, BellState::psi_minus, BellState::phi_plus,
                              BellState::phi_minus};

// Projects the last qubit onto |c> and renormalises; plain index arithmetic.
std::pair<double, StateVector> project_last(const StateVector& s, const StateVector& c) {
  const std::size_t rest = s.dimension() / 2;
  std::vector<Complex> out(rest);
  double p = 0;
  for (std::size_t i = 0; i < rest; ++i) {
    out[i] = std::conj(c[0]) * s[2 * i] + std::conj(c[1]) * s[2 * i + 1];
    p += std::norm(out[i]);
  }
  if (p > 0)
    for (auto& a : out) a /= std::sqrt(p);
  return {p, StateVector::from_amplitudes(out, true)};
}

}  // namespace

TEST(Bell, Amplitudes) {
  auto pp = make_bell(BellState::psi_plus);
  EXPECT_NEAR(pp[0].real(), kH, 1e-15);
  EXPECT_NEAR(pp[3].real(), kH, 1e-15);
  auto fp = make_bell(BellState::phi_plus);
  EXPECT_NEAR(fp[1].real(), kH, 1e-15);
  EXPECT_NEAR(fp[2].real(), kH, 1e-15);
  EXPECT_EQ(fp[0], Complex{0.0});
  auto pm = make_bell(BellState::psi_minus);
  EXPECT_NEAR(pm[0].real(), kH, 1e-15);
  EXPECT_NEAR(pm[3].real(), -kH, 1e-15);
  auto fm = make_bell(BellState::phi_minus);
  EXPECT_NEAR(fm[1].real(), kH, 1e-15);
  EXPECT_NEAR(fm[2].real(), -kH, 1e-15);
  for (auto b : kAllBell) EXPECT_EQ(parse_bell(to_string(b)), b);
  EXPECT_THROW(parse_bell("psi"), std::exception);
}

TEST(Controlled, GhzLikeAmplitudes) {
  const auto s = make_controlled_state(ghz_like_channel());
  ASSERT_EQ(s.num_qubits(), 3u);
  const std::set<std::size_t> hits{0b000, 0b110, 0b011, 0b101};
  for (std::size_t i = 0; i < 8; ++i) EXPECT_NEAR(s[i].real(), hits.count(i) ? 0.5 : 0.0, 1e-15) << i;
}

TEST(Controlled, EqualBranchesRejected) {
  const auto spec = controlled_channel(BellState::psi_plus, BellState::psi_plus);
  EXPECT_FALSE(validate_conditions(spec));
  EXPECT_THROW(make_controlled_state(spec), ConditionError);
  EXPECT_NE(validate_conditions(spec).message().find("psi1 must differ from psi2"), std::string::npos);
}

TEST(Controlled, ValidSpecPasses) {
  EXPECT_TRUE(validate_conditions(controlled_channel(BellState::psi_plus, BellState::phi_minus, "+", "-")));
}

TEST(Controlled, EqualControllerStatesRejected) {
  auto v = validate_conditions(controlled_channel(BellState::psi_plus, BellState::phi_plus, "0", "0"));
  EXPECT_FALSE(v);
  EXPECT_NE(v.message().find("<a|b>"), std::string::npos);
  EXPECT_THROW(require_valid(controlled_channel(BellState::psi_plus, BellState::phi_plus, "+", "0")),
               ConditionError);
}

TEST(Controlled, TwoNPlusOneConditions) {
  auto bad = five_qubit_channel(BellState::psi_plus, BellState::phi_plus, BellState::psi_plus, BellState::psi_minus);
  auto v = validate_conditions(bad);
  EXPECT_FALSE(v);
  EXPECT_NE(v.message().find("psi1 must differ from psi3"), std::string::npos);
  auto bad2 = five_qubit_channel(BellState::psi_plus, BellState::phi_plus, BellState::psi_minus, BellState::phi_plus);
  EXPECT_NE(validate_conditions(bad2).message().find("psi2 must differ from psi4"), std::string::npos);
}

TEST(Controlled, FiveQubitCollapsesToBellProduct) {
  const auto spec = five_qubit_channel(BellState::psi_plus, BellState::psi_plus, BellState::phi_plus, BellState::phi_plus);
  const auto s = make_controlled_state(spec);
  ASSERT_EQ(s.num_qubits(), 5u);
  EXPECT_NEAR(s.norm(), 1.0, 1e-12);
  const auto [p0, post0] = project_last(s, make_qubit("0"));
  const auto [p1, post1] = project_last(s, make_qubit("1"));
  EXPECT_NEAR(p0, 0.5, 1e-12);
  EXPECT_NEAR(p1, 0.5, 1e-12);
  EXPECT_NEAR(fidelity(post0, tensor(make_bell(BellState::psi_plus), make_bell(BellState::psi_plus))), 1.0, 1e-12);
  EXPECT_NEAR(fidelity(post1, tensor(make_bell(BellState::phi_plus), make_bell(BellState::phi_plus))), 1.0, 1e-12);
}

TEST(Controlled, AllGhzLikeSpecsCollapseToBranches) {
  int valid = 0;
  for (auto a : kAllBell) {
    for (auto b : kAllBell) {
      for (int sign : {+1, -1}) {
        const auto spec = ghz_like_channel(a, b, "0", "1", sign);
        if (a == b) {
          EXPECT_THROW(make_controlled_state(spec), ConditionError);
          continue;
        }
        ++valid;
        const auto s = make_controlled_state(spec);
        const auto [p0, post0] = project_last(s, make_qubit("0"));
        const auto [p1, post1] = project_last(s, make_qubit("1"));
        EXPECT_NEAR(p0, 0.5, 1e-12);
        EXPECT_NEAR(p1, 0.5, 1e-12);
        EXPECT_NEAR(fidelity(post0, make_bell(a)), 1.0, 1e-12);
        EXPECT_NEAR(fidelity(post1, make_bell(b)), 1.0, 1e-12);
      }
    }
  }
  EXPECT_EQ(valid, 24);
}

TEST(Controlled, DiagonalControllerBasis) {
  const auto s = make_controlled_state(controlled_channel(BellState::psi_plus, BellState::phi_minus, "+", "-", -1));
  const auto [pa, pa_post] = project_last(s, make_qubit("+"));
  EXPECT_NEAR(pa, 0.5, 1e-12);
  EXPECT_NEAR(fidelity(pa_post, make_bell(BellState::psi_plus)), 1.0, 1e-12);
}

TEST(Cat, OneIsGhzLikeType) {
  const auto s = make_cat_controlled(1);
  ASSERT_EQ(s.num_qubits(), 3u);
  const auto [p0, post0] = project_last(s, make_qubit("0"));
  EXPECT_NEAR(p0, 0.5, 1e-12);
  EXPECT_NEAR(fidelity(post0, make_ghz_cat(2)), 1.0, 1e-12);
  EXPECT_NEAR(fidelity(make_ghz_cat(2), make_bell(BellState::psi_plus)), 1.0, 1e-15);
}

TEST(Cat, TwoCollapsesToPairedBellProduct) {
  const auto s = make_cat_controlled(2);
  ASSERT_EQ(s.num_qubits(), 5u);
  const auto [p0, post0] = project_last(s, make_qubit("0"));
  const auto [p1, post1] = project_last(s, make_qubit("1"));
  EXPECT_NEAR(p0, 0.5, 1e-12);
  // Pairs sit on slots (0,2) and (1,3).
  const auto cat1 = permute_qubits(tensor(make_bell(BellState::psi_plus), make_bell(BellState::psi_plus)), {0, 2, 1, 3});
  const auto cat2 = permute_qubits(tensor(make_bell(BellState::psi_minus), make_bell(BellState::psi_minus)), {0, 2, 1, 3});
  EXPECT_NEAR(fidelity(post0, cat1), 1.0, 1e-12);
  EXPECT_NEAR(fidelity(post1, cat2), 1.0, 1e-12);
  EXPECT_NEAR(fidelity(cat1, cat2), 0.0, 1e-15);
}

TEST(Cat, GhzCatCannotCarryTwoMBits) {
  // A 4-qubit GHZ cat split 2/2 reaches only 8 orthogonal Pauli encodings.
  const auto ops = pauli_search(make_ghz_cat(4), {0, 1});
  EXPECT_EQ(ops.size(), 8u);
  const auto paired = permute_qubits(tensor(make_bell(BellState::psi_plus), make_bell(BellState::psi_plus)), {0, 2, 1, 3});
  EXPECT_EQ(pauli_search(paired, {0, 1}).size(), 16u);
}

TEST(Cat, CapacityLimit) {
  EXPECT_THROW(make_cat_controlled(8), CapacityError);
  EXPECT_NO_THROW(make_cat_controlled(7));
  EXPECT_THROW(make_cat_controlled(0), std::invalid_argument);
}

TEST(Swap, GhzLikeExample) {
  const auto spec = swap_channel(1, {make_bell(BellState::psi_plus), make_bell(BellState::phi_plus)},
                                 {make_qubit("0"), make_qubit("1")});
  const auto s = make_swap_state(spec);
  EXPECT_NEAR(fidelity(s, make_controlled_state(ghz_like_channel())), 1.0, 1e-12);
  // Default bases give the same state.
  EXPECT_NEAR(fidelity(make_swap_state(swap_channel(1, 2, 1)), s), 1.0, 1e-12);
}

TEST(Swap, ClusterType) {
  const auto spec = swap_channel(1, {make_bell(BellState::psi_plus), make_bell(BellState::phi_plus)},
                                 {StateVector::basis(2, 0), StateVector::basis(2, 3)});
  const auto s = make_swap_state(spec);
  EXPECT_EQ(s.num_qubits(), 4u);
  EXPECT_NEAR(s.norm(), 1.0, 1e-12);
}

TEST(Swap, RejectsBadBases) {
  auto overlap = swap_channel(1, {make_bell(BellState::psi_plus), make_bell(BellState::phi_plus)},
                              {make_qubit("0"), make_qubit("+")});
  EXPECT_FALSE(validate_conditions(overlap));
  EXPECT_THROW(make_swap_state(overlap), ConfigError);
  auto size = swap_channel(1, {make_bell(BellState::psi_plus)}, {make_qubit("0")});
  EXPECT_THROW(make_swap_state(size), ConfigError);
  auto product = swap_channel(1, {StateVector::basis(2, 0), StateVector::basis(2, 3)}, {make_qubit("0"), make_qubit("1")});
  EXPECT_THROW(make_swap_state(product), ConfigError);
  EXPECT_THROW(swap_channel(2, 1, 2), ConfigError);
  EXPECT_THROW(swap_channel(2, 2, 1), ConfigError);
}

TEST(Swap, EntangledAcrossCut) {
  // Joint measurement: completed e-basis on the m qubits, computational on
  // the l qubits. The joint distribution must not factor.
  for (auto [s_bits, m, l] : {std::tuple{1, 2, 1}, {1, 2, 2}, {2, 2, 2}, {2, 3, 3}, {1, 3, 2}}) {
    const auto spec = swap_channel(s_bits, m, l);
    const auto& p = std::get<SwapParams>(spec.params);
    const auto state = make_swap_state(spec);
    const auto e_full = complete_basis(p.e);
    std::map<std::pair<std::size_t, std::size_t>, double> joint;
    std::map<std::size_t, double> left, right;
    for (std::size_t i = 0; i < e_full.size(); ++i) {
      for (std::size_t j = 0; j < (std::size_t{1} << l); ++j) {
        const double pr = std::norm(inner(tensor(e_full[i], StateVector::basis(l, j)), state));
        joint[{i, j}] = pr;
        left[i] += pr;
        right[j] += pr;
      }
    }
    double max_dev = 0;
    for (const auto& [k, pr] : joint) max_dev = std::max(max_dev, std::abs(pr - left[k.first] * right[k.second]));
    EXPECT_GT(max_dev, 0.1) << s_bits << m << l;
  }
}

TEST(Swap, GhzBasisStatesAreOrthonormalAndMaximallyEntangled) {
  for (std::size_t m : {2, 3, 4}) {
    std::vector<StateVector> set;
    for (std::size_t i = 0; i < (std::size_t{1} << m); ++i) set.push_back(ghz_basis_state(m, i));
    for (std::size_t i = 0; i < set.size(); ++i)
      for (std::size_t j = 0; j < set.size(); ++j)
        EXPECT_NEAR(fidelity(set[i], set[j]), i == j ? 1.0 : 0.0, 1e-12);
  }
}

TEST(DenseCoding, BellTableMapping) {
  const auto t = dense_coding_table(bell_channel());
  ASSERT_EQ(t.capacity(), 4u);
  EXPECT_EQ(t.bits, 2u);
  const char* names[] = {"I", "X", "iY", "Z"};
  for (int k = 0; k < 4; ++k) EXPECT_EQ(t.ops[k].name, names[k]);
  EXPECT_EQ(t.decode_label("psi+"), 0u);
  EXPECT_EQ(t.decode_label("phi+"), 1u);
  EXPECT_EQ(t.decode_label("phi-"), 2u);
  EXPECT_EQ(t.decode_label("psi-"), 3u);
  EXPECT_EQ(t.decode_label("nope"), std::nullopt);
}

TEST(DenseCoding, BellMessage01) {
  const auto t = bell_table();
  const auto encoded = t.encode(make_bell(BellState::psi_plus), 1);
  const auto d = measure_enumerate(encoded, t.decode_basis, {0, 1});
  ASSERT_EQ(d.entries.size(), 1u);
  EXPECT_EQ(d.entries[0].label, "phi+");
  EXPECT_EQ(t.decode_label(d.entries[0].label), 1u);
}

TEST(DenseCoding, GhzLikeSearchGivesEightOrthogonalStates) {
  const auto spec = dense_channel("ghz-like", 2);
  const auto t = dense_coding_table(spec);
  EXPECT_EQ(t.capacity(), 8u);
  EXPECT_EQ(t.bits, 3u);
  const auto r = resource_state(spec);
  std::vector<StateVector> enc;
  for (std::uint32_t m = 0; m < t.capacity(); ++m) enc.push_back(t.encode(r, m));
  for (std::size_t i = 0; i < enc.size(); ++i)
    for (std::size_t j = i + 1; j < enc.size(); ++j) EXPECT_LT(fidelity(enc[i], enc[j]), 1e-12);
}

TEST(DenseCoding, DecodeEncodeIsIdentity) {
  std::vector<ChannelSpec> specs{bell_channel(), dense_channel("ghz-like", 2), dense_channel("ghz", 2),
                                 ghz_like_channel(), swap_channel(1, 2, 1), swap_channel(2, 2, 2),
                                 swap_channel(2, 3, 2)};
  for (const auto& spec : specs) {
    const auto t = dense_coding_table(spec);
    const auto r = resource_state(spec);
    std::vector<std::size_t> all(r.num_qubits());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    for (std::uint32_t m = 0; m < t.capacity(); ++m) {
      const auto d = measure_enumerate(t.encode(r, m), t.decode_basis, all);
      ASSERT_EQ(d.entries.size(), 1u) << to_string(spec.family) << " m=" << m;
      EXPECT_EQ(t.decode_label(d.entries[0].label), m);
    }
  }
}

TEST(DenseCoding, SwapCapacityIsTwoToS) {
  EXPECT_EQ(dense_coding_table(swap_channel(1, 2, 1)).capacity(), 2u);
  EXPECT_EQ(dense_coding_table(swap_channel(2, 3, 2)).capacity(), 4u);
}

TEST(DenseCoding, WStateSplit) {
  // W state under a 2/1 split carries fewer than 3 bits.
  const auto t = dense_coding_table(dense_channel("w", 2));
  EXPECT_LT(t.capacity(), 8u);
  EXPECT_GE(t.capacity(), 2u);
}

TEST(DenseCoding, UnsupportedFamilies) {
  EXPECT_THROW(dense_coding_table(cat_channel(2)), ConfigError);
  EXPECT_THROW(dense_coding_table(controlled_channel(BellState::psi_plus, BellState::phi_plus)), ConfigError);
  EXPECT_THROW(dense_coding_table(dense_channel("ghz", 1)), ConfigError);
  EXPECT_THROW(dense_channel("cluster", 2), ConfigError);
}

TEST(Constructors, Normalised) {
  EXPECT_NEAR(make_w3().norm(), 1.0, 1e-12);
  for (std::size_t m = 1; m <= 4; ++m) EXPECT_NEAR(make_cat_controlled(m).norm(), 1.0, 1e-12);
  EXPECT_NEAR(make_swap_state(swap_channel(3, 4, 3)).norm(), 1.0, 1e-12);
}
