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
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cdsqc/quantum/state_vector.hpp"
#include "cdsqc/rng.hpp"

namespace cdsqc {

enum class BasisKind { computational, diagonal, bell, custom };

/// Complete orthonormal basis of a k-qubit subsystem, one label per vector.
class MeasurementBasis {
 public:
  static MeasurementBasis custom(std::vector<std::string> labels, std::vector<StateVector> vectors,
                                 BasisKind kind = BasisKind::custom) {
    if (vectors.empty() || labels.size() != vectors.size()) {
      throw std::invalid_argument("basis needs one label per vector");
    }
    const std::size_t k = vectors.front().num_qubits();
    if (vectors.size() != (std::size_t{1} << k)) {
      throw std::invalid_argument("basis vectors do not span the subsystem");
    }
    for (std::size_t i = 0; i < vectors.size(); ++i) {
      if (vectors[i].num_qubits() != k) throw std::invalid_argument("basis vectors differ in size");
      for (std::size_t j = i + 1; j < vectors.size(); ++j) {
        if (std::abs(inner(vectors[i], vectors[j])) > kTolerance * 10) {
          throw std::invalid_argument("basis vectors are not orthogonal");
        }
        if (labels[i] == labels[j]) throw std::invalid_argument("duplicate basis label");
      }
    }
    return MeasurementBasis(kind, k, std::move(labels), std::move(vectors));
  }

  /// Labels are bit strings, e.g. "01".
  static MeasurementBasis computational(std::size_t k = 1) {
    std::vector<std::string> labels;
    std::vector<StateVector> vectors;
    for (std::size_t i = 0; i < (std::size_t{1} << k); ++i) {
      std::string l(k, '0');
      for (std::size_t j = 0; j < k; ++j) l[j] = ((i >> (k - 1 - j)) & 1U) ? '1' : '0';
      labels.push_back(std::move(l));
      vectors.push_back(StateVector::basis(k, i));
    }
    return custom(std::move(labels), std::move(vectors), BasisKind::computational);
  }

  static MeasurementBasis diagonal() {
    const double h = 1.0 / std::sqrt(2.0);
    return custom({"+", "-"},
                  {StateVector::from_amplitudes({h, h}), StateVector::from_amplitudes({h, -h})},
                  BasisKind::diagonal);
  }

  /// psi+- = (|00> +- |11>)/sqrt2, phi+- = (|01> +- |10>)/sqrt2.
  static MeasurementBasis bell() {
    const double h = 1.0 / std::sqrt(2.0);
    return custom({"psi+", "psi-", "phi+", "phi-"},
                  {StateVector::from_amplitudes({h, 0, 0, h}),
                   StateVector::from_amplitudes({h, 0, 0, -h}),
                   StateVector::from_amplitudes({0, h, h, 0}),
                   StateVector::from_amplitudes({0, h, -h, 0})},
                  BasisKind::bell);
  }

  BasisKind kind() const { return kind_; }
  std::size_t arity() const { return arity_; }
  std::size_t size() const { return vectors_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::vector<StateVector>& vectors() const { return vectors_; }
  const StateVector& vector(std::size_t i) const { return vectors_[i]; }

  std::size_t index_of(const std::string& label) const {
    auto it = std::find(labels_.begin(), labels_.end(), label);
    if (it == labels_.end()) throw std::invalid_argument("unknown basis label '" + label + "'");
    return static_cast<std::size_t>(it - labels_.begin());
  }

 private:
  MeasurementBasis(BasisKind kind, std::size_t k, std::vector<std::string> labels,
                   std::vector<StateVector> vectors)
      : kind_(kind), arity_(k), labels_(std::move(labels)), vectors_(std::move(vectors)) {}

  BasisKind kind_;
  std::size_t arity_;
  std::vector<std::string> labels_;
  std::vector<StateVector> vectors_;
};

struct Outcome {
  std::string label;
  double probability = 0.0;
  StateVector post;
};

/// Outcomes with non-negligible probability, in basis order.
struct OutcomeDistribution {
  std::vector<Outcome> entries;

  double probability(const std::string& label) const {
    for (const auto& e : entries)
      if (e.label == label) return e.probability;
    return 0.0;
  }
  double total() const {
    double s = 0.0;
    for (const auto& e : entries) s += e.probability;
    return s;
  }
};

// Probability below which an outcome is treated as impossible.
inline constexpr double kImpossible = 1e-14;

namespace detail {

// Component of `state` along |v> on `targets`: coefficient c(base) for every
// index with the target bits cleared. Returns (probability, coefficients).
inline std::pair<double, std::vector<Complex>> project_coefficients(
    const StateVector& state, const StateVector& v, std::span<const std::size_t> offsets,
    std::size_t mask) {
  std::vector<Complex> coeff(state.dimension(), Complex{0.0, 0.0});
  double prob = 0.0;
  for (std::size_t base = 0; base < state.dimension(); ++base) {
    if (base & mask) continue;
    Complex c{0.0, 0.0};
    for (std::size_t r = 0; r < offsets.size(); ++r) c += std::conj(v[r]) * state[base | offsets[r]];
    coeff[base] = c;
    prob += std::norm(c);
  }
  return {std::clamp(prob, 0.0, 1.0), std::move(coeff)};
}

inline StateVector collapse(const StateVector& state, const StateVector& v,
                            std::span<const std::size_t> offsets, std::size_t mask,
                            const std::vector<Complex>& coeff, double prob) {
  std::vector<Complex> amps(state.dimension(), Complex{0.0, 0.0});
  const double s = 1.0 / std::sqrt(prob);
  for (std::size_t base = 0; base < state.dimension(); ++base) {
    if (base & mask) continue;
    for (std::size_t r = 0; r < offsets.size(); ++r) amps[base | offsets[r]] = v[r] * coeff[base] * s;
  }
  return StateVector::from_amplitudes(std::move(amps), true);
}

inline void check_basis_targets(const StateVector& state, const MeasurementBasis& basis,
                                std::span<const std::size_t> targets) {
  if (targets.size() != basis.arity()) {
    throw std::invalid_argument("basis does not span the target subsystem");
  }
  check_targets(state.num_qubits(), targets);
}

inline std::size_t mask_of(std::span<const std::size_t> offsets) {
  std::size_t m = 0;
  for (auto o : offsets) m |= o;
  return m;
}

}  // namespace detail

/// Exhaustive Born-rule distribution of measuring `targets` in `basis`.
inline OutcomeDistribution measure_enumerate(const StateVector& state, const MeasurementBasis& basis,
                                             std::span<const std::size_t> targets) {
  detail::check_basis_targets(state, basis, targets);
  const auto offsets = target_offsets(state.num_qubits(), targets);
  const auto mask = detail::mask_of(offsets);
  OutcomeDistribution dist;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    auto [p, coeff] = detail::project_coefficients(state, basis.vector(i), offsets, mask);
    if (p <= kImpossible) continue;
    dist.entries.push_back(
        {basis.labels()[i], p, detail::collapse(state, basis.vector(i), offsets, mask, coeff, p)});
  }
  return dist;
}

inline OutcomeDistribution measure_enumerate(const StateVector& state, const MeasurementBasis& basis,
                                             std::initializer_list<std::size_t> targets) {
  return measure_enumerate(state, basis, std::span<const std::size_t>(targets.begin(), targets.size()));
}

struct SampledOutcome {
  std::string label;
  std::size_t index = 0;  // position of the label in the basis
  StateVector post;
};

/// Draws one outcome (one rng.uniform() call) and returns the renormalized
/// post-measurement state.
inline SampledOutcome measure_sampled(const StateVector& state, const MeasurementBasis& basis,
                                      std::span<const std::size_t> targets, SeededRng& rng) {
  detail::check_basis_targets(state, basis, targets);
  const auto offsets = target_offsets(state.num_qubits(), targets);
  const auto mask = detail::mask_of(offsets);
  const double u = rng.uniform();

  std::vector<double> probs(basis.size());
  double total = 0.0;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    probs[i] = detail::project_coefficients(state, basis.vector(i), offsets, mask).first;
    total += probs[i];
  }
  double acc = 0.0;
  std::optional<std::size_t> pick;
  std::optional<std::size_t> last_possible;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    if (probs[i] <= kImpossible) continue;
    last_possible = i;
    acc += probs[i] / total;
    if (u < acc) {
      pick = i;
      break;
    }
  }
  if (!pick) pick = last_possible;  // rounding at the top end
  if (!pick) throw std::logic_error("measurement with no possible outcome");
  auto [p, coeff] = detail::project_coefficients(state, basis.vector(*pick), offsets, mask);
  return {basis.labels()[*pick], *pick,
          detail::collapse(state, basis.vector(*pick), offsets, mask, coeff, p)};
}

inline SampledOutcome measure_sampled(const StateVector& state, const MeasurementBasis& basis,
                                      std::initializer_list<std::size_t> targets, SeededRng& rng) {
  return measure_sampled(state, basis, std::span<const std::size_t>(targets.begin(), targets.size()),
                         rng);
}

/// After projecting `targets` onto |v>, the remaining qubits (ascending
/// order) are left in the returned normalized state.
inline StateVector residual_after(const StateVector& state, const StateVector& v,
                                  std::span<const std::size_t> targets) {
  const std::size_t n = state.num_qubits();
  const std::size_t rest = n - targets.size();
  if (rest == 0) throw std::invalid_argument("no residual qubits");
  std::vector<std::size_t> others;
  for (std::size_t q = 0; q < n; ++q)
    if (std::find(targets.begin(), targets.end(), q) == targets.end()) others.push_back(q);
  const auto offsets = target_offsets(n, targets);
  std::vector<Complex> amps(std::size_t{1} << rest, Complex{0.0, 0.0});
  for (std::size_t ri = 0; ri < amps.size(); ++ri) {
    std::size_t base = 0;
    for (std::size_t k = 0; k < rest; ++k)
      if ((ri >> (rest - 1 - k)) & 1U) base |= std::size_t{1} << bit_of(n, others[k]);
    Complex c{0.0, 0.0};
    for (std::size_t r = 0; r < offsets.size(); ++r) c += std::conj(v[r]) * state[base | offsets[r]];
    amps[ri] = c;
  }
  return StateVector::from_amplitudes(std::move(amps), true);
}

/// Extends an orthonormal set of k-qubit vectors to a full basis by
/// Gram-Schmidt over the computational basis.
inline std::vector<StateVector> complete_basis(std::vector<StateVector> vectors) {
  if (vectors.empty()) throw std::invalid_argument("complete_basis needs a seed vector");
  const std::size_t k = vectors.front().num_qubits();
  const std::size_t dim = std::size_t{1} << k;
  for (std::size_t e = 0; e < dim && vectors.size() < dim; ++e) {
    std::vector<Complex> w(dim, Complex{0.0, 0.0});
    w[e] = 1.0;
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& v : vectors) {
        Complex proj{0.0, 0.0};
        for (std::size_t i = 0; i < dim; ++i) proj += std::conj(v[i]) * w[i];
        for (std::size_t i = 0; i < dim; ++i) w[i] -= proj * v[i];
      }
    }
    double nrm = 0.0;
    for (const auto& a : w) nrm += std::norm(a);
    if (nrm < 1e-8) continue;
    vectors.push_back(StateVector::from_amplitudes(std::move(w), true));
  }
  return vectors;
}

}  // namespace cdsqc
