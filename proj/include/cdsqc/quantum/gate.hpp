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
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cdsqc/quantum/state_vector.hpp"

namespace cdsqc {

/// Unitary acting on `arity` qubits; matrix is row-major 2^arity x 2^arity.
class Gate {
 public:
  static Gate make(std::size_t arity, std::vector<Complex> matrix, std::string name = "U") {
    const std::size_t dim = std::size_t{1} << arity;
    if (arity == 0 || matrix.size() != dim * dim) {
      throw std::invalid_argument("gate matrix has wrong size");
    }
    for (std::size_t i = 0; i < dim; ++i) {
      for (std::size_t j = 0; j < dim; ++j) {
        Complex s{0.0, 0.0};
        for (std::size_t k = 0; k < dim; ++k) s += std::conj(matrix[k * dim + i]) * matrix[k * dim + j];
        const Complex expected = i == j ? Complex{1.0, 0.0} : Complex{0.0, 0.0};
        if (std::abs(s - expected) > kTolerance * static_cast<double>(dim)) {
          throw std::invalid_argument("gate '" + name + "' is not unitary");
        }
      }
    }
    return Gate(arity, std::move(matrix), std::move(name));
  }

  std::size_t arity() const { return arity_; }
  std::size_t dimension() const { return std::size_t{1} << arity_; }
  const std::string& name() const { return name_; }
  std::span<const Complex> matrix() const { return matrix_; }
  const Complex& at(std::size_t row, std::size_t col) const { return matrix_[row * dimension() + col]; }

 private:
  Gate(std::size_t arity, std::vector<Complex> m, std::string name)
      : arity_(arity), matrix_(std::move(m)), name_(std::move(name)) {}

  std::size_t arity_;
  std::vector<Complex> matrix_;
  std::string name_;
};

namespace gates {

inline Gate identity() { return Gate::make(1, {1, 0, 0, 1}, "I"); }
inline Gate x() { return Gate::make(1, {0, 1, 1, 0}, "X"); }
inline Gate z() { return Gate::make(1, {1, 0, 0, -1}, "Z"); }
inline Gate y() { return Gate::make(1, {0, Complex{0, -1}, Complex{0, 1}, 0}, "Y"); }
// iY taken literally as the real matrix [[0, 1], [-1, 0]].
inline Gate iy() { return Gate::make(1, {0, 1, -1, 0}, "iY"); }
inline Gate hadamard() {
  const double h = 1.0 / std::sqrt(2.0);
  return Gate::make(1, {h, h, h, -h}, "H");
}

}  // namespace gates

/// Kronecker product of gates; `a` acts on the leading qubits.
inline Gate kron(const Gate& a, const Gate& b) {
  const std::size_t da = a.dimension(), db = b.dimension(), d = da * db;
  std::vector<Complex> m(d * d);
  for (std::size_t r1 = 0; r1 < da; ++r1)
    for (std::size_t c1 = 0; c1 < da; ++c1)
      for (std::size_t r2 = 0; r2 < db; ++r2)
        for (std::size_t c2 = 0; c2 < db; ++c2)
          m[(r1 * db + r2) * d + (c1 * db + c2)] = a.at(r1, c1) * b.at(r2, c2);
  return Gate::make(a.arity() + b.arity(), std::move(m), a.name() + "*" + b.name());
}

/// Applies `gate` to `targets` (first target is the gate's most significant
/// qubit), identity elsewhere.
inline StateVector apply_gate(const StateVector& state, const Gate& gate,
                              std::span<const std::size_t> targets) {
  if (targets.size() != gate.arity()) throw std::invalid_argument("gate arity mismatch");
  const std::size_t n = state.num_qubits();
  check_targets(n, targets);
  const auto offsets = target_offsets(n, targets);
  std::size_t mask = 0;
  for (auto o : offsets) mask |= o;

  const std::size_t dim = gate.dimension();
  std::vector<Complex> out(state.amplitudes().begin(), state.amplitudes().end());
  std::vector<Complex> local(dim);
  for (std::size_t base = 0; base < state.dimension(); ++base) {
    if (base & mask) continue;
    for (std::size_t r = 0; r < dim; ++r) local[r] = state[base | offsets[r]];
    for (std::size_t r = 0; r < dim; ++r) {
      Complex acc{0.0, 0.0};
      for (std::size_t c = 0; c < dim; ++c) acc += gate.at(r, c) * local[c];
      out[base | offsets[r]] = acc;
    }
  }
  return make_unchecked(n, std::move(out));
}

inline StateVector apply_gate(const StateVector& state, const Gate& gate,
                              std::initializer_list<std::size_t> targets) {
  return apply_gate(state, gate, std::span<const std::size_t>(targets.begin(), targets.size()));
}

}  // namespace cdsqc
