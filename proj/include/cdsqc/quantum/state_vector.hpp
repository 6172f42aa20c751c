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
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cdsqc/errors.hpp"

namespace cdsqc {

using Complex = std::complex<double>;

/// Tolerance for normalization, unitarity and orthonormality checks.
inline constexpr double kTolerance = 1e-12;

/// Largest block the dense simulator will build.
inline constexpr std::size_t kDefaultBlockLimit = 16;

// Qubit 0 is the most significant bit of a basis-state index, so |q0 q1 ...>
// reads left to right like ket notation.
inline constexpr std::size_t bit_of(std::size_t num_qubits, std::size_t qubit) {
  return num_qubits - 1 - qubit;
}

/// Normalized pure state of a small block of qubits.
class StateVector {
 public:
  /// |0>
  StateVector() : num_qubits_(1), amplitudes_{Complex{1.0, 0.0}, Complex{0.0, 0.0}} {}

  static StateVector basis(std::size_t num_qubits, std::size_t index) {
    check_size(num_qubits);
    std::vector<Complex> amps(std::size_t{1} << num_qubits);
    if (index >= amps.size()) throw std::out_of_range("basis index out of range");
    amps[index] = 1.0;
    return StateVector(num_qubits, std::move(amps));
  }

  /// Validates length (a power of two, at least 2) and unit norm. With
  /// `normalize` the input is rescaled instead of rejected.
  static StateVector from_amplitudes(std::vector<Complex> amps, bool normalize = false) {
    std::size_t n = 0;
    while ((std::size_t{1} << n) < amps.size()) ++n;
    if (amps.size() < 2 || (std::size_t{1} << n) != amps.size()) {
      throw std::invalid_argument("amplitude count must be a power of two >= 2");
    }
    double norm2 = 0.0;
    for (const auto& a : amps) norm2 += std::norm(a);
    if (normalize) {
      if (norm2 <= kTolerance) throw std::invalid_argument("cannot normalize a zero vector");
      const double s = 1.0 / std::sqrt(norm2);
      for (auto& a : amps) a *= s;
    } else if (std::abs(norm2 - 1.0) > kTolerance) {
      throw std::invalid_argument("state is not normalized");
    }
    return StateVector(n, std::move(amps));
  }

  std::size_t num_qubits() const { return num_qubits_; }
  std::size_t dimension() const { return amplitudes_.size(); }
  std::span<const Complex> amplitudes() const { return amplitudes_; }
  const Complex& operator[](std::size_t i) const { return amplitudes_[i]; }

  double norm() const {
    double s = 0.0;
    for (const auto& a : amplitudes_) s += std::norm(a);
    return std::sqrt(s);
  }

  bool operator==(const StateVector&) const = default;

 private:
  friend StateVector make_unchecked(std::size_t, std::vector<Complex>);

  StateVector(std::size_t n, std::vector<Complex> amps)
      : num_qubits_(n), amplitudes_(std::move(amps)) {}

  static void check_size(std::size_t n) {
    if (n == 0 || n > 62) throw std::invalid_argument("qubit count out of range");
  }

  std::size_t num_qubits_;
  std::vector<Complex> amplitudes_;
};

// Internal constructor for kernels that preserve the norm by construction.
inline StateVector make_unchecked(std::size_t n, std::vector<Complex> amps) {
  return StateVector(n, std::move(amps));
}

inline Complex inner(const StateVector& a, const StateVector& b) {
  if (a.num_qubits() != b.num_qubits()) throw std::invalid_argument("dimension mismatch");
  Complex s{0.0, 0.0};
  for (std::size_t i = 0; i < a.dimension(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

/// |<a|b>|^2, clamped to [0, 1].
inline double fidelity(const StateVector& a, const StateVector& b) {
  const double f = std::norm(inner(a, b));
  return f < 0.0 ? 0.0 : (f > 1.0 ? 1.0 : f);
}

/// Kronecker product a (x) b; a's qubits come first.
inline StateVector tensor(const StateVector& a, const StateVector& b,
                          std::size_t block_limit = kDefaultBlockLimit) {
  const std::size_t n = a.num_qubits() + b.num_qubits();
  if (n > block_limit) {
    throw CapacityError("tensor product of " + std::to_string(n) + " qubits exceeds block limit " +
                        std::to_string(block_limit));
  }
  std::vector<Complex> amps(a.dimension() * b.dimension());
  for (std::size_t i = 0; i < a.dimension(); ++i) {
    for (std::size_t j = 0; j < b.dimension(); ++j) amps[i * b.dimension() + j] = a[i] * b[j];
  }
  return make_unchecked(n, std::move(amps));
}

inline StateVector tensor_all(std::span<const StateVector> parts,
                              std::size_t block_limit = kDefaultBlockLimit) {
  if (parts.empty()) throw std::invalid_argument("tensor_all of nothing");
  StateVector out = parts[0];
  for (std::size_t i = 1; i < parts.size(); ++i) out = tensor(out, parts[i], block_limit);
  return out;
}

/// Reorders qubits: qubit k of the result is qubit `order[k]` of `s`.
inline StateVector permute_qubits(const StateVector& s, std::span<const std::size_t> order) {
  const std::size_t n = s.num_qubits();
  if (order.size() != n) throw std::invalid_argument("permute_qubits: order size mismatch");
  std::vector<bool> seen(n, false);
  for (auto q : order) {
    if (q >= n || seen[q]) throw std::invalid_argument("permute_qubits: not a permutation");
    seen[q] = true;
  }
  std::vector<Complex> amps(s.dimension());
  for (std::size_t idx = 0; idx < s.dimension(); ++idx) {
    std::size_t src = 0;
    for (std::size_t k = 0; k < n; ++k) {
      if ((idx >> bit_of(n, k)) & 1U) src |= std::size_t{1} << bit_of(n, order[k]);
    }
    amps[idx] = s[src];
  }
  return make_unchecked(n, std::move(amps));
}

inline StateVector permute_qubits(const StateVector& s, std::initializer_list<std::size_t> order) {
  return permute_qubits(s, std::span<const std::size_t>(order.begin(), order.size()));
}

// Offsets of every assignment of the target qubits, target 0 most significant.
inline std::vector<std::size_t> target_offsets(std::size_t num_qubits,
                                               std::span<const std::size_t> targets) {
  const std::size_t k = targets.size();
  std::vector<std::size_t> offsets(std::size_t{1} << k, 0);
  for (std::size_t r = 0; r < offsets.size(); ++r) {
    std::size_t off = 0;
    for (std::size_t j = 0; j < k; ++j) {
      if ((r >> (k - 1 - j)) & 1U) off |= std::size_t{1} << bit_of(num_qubits, targets[j]);
    }
    offsets[r] = off;
  }
  return offsets;
}

inline void check_targets(std::size_t num_qubits, std::span<const std::size_t> targets) {
  std::vector<bool> seen(num_qubits, false);
  for (auto t : targets) {
    if (t >= num_qubits) throw std::out_of_range("qubit index out of range");
    if (seen[t]) throw std::invalid_argument("duplicate target qubit");
    seen[t] = true;
  }
}

}  // namespace cdsqc
