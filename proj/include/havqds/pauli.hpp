// Copyright 2026 The HAVQDS Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace havqds {

using Complex = std::complex<double>;
using Amplitudes = std::vector<Complex>;

/**
 * An n-qubit Pauli string in symplectic form.
 *
 * Bit i of x_mask is set for X or Y on qubit i, bit i of z_mask for Z or Y.
 * The operator is i^{popcount(x & z)} X^x Z^z, so Y = iXZ and every string
 * is Hermitian and squares to the identity.
 *
 * Labels list qubit 0 first: "XIZ" is X on qubit 0 and Z on qubit 2.
 */
class PauliString {
 public:
  PauliString() = default;
  PauliString(unsigned n_qubits, std::uint64_t x_mask, std::uint64_t z_mask);

  static PauliString identity(unsigned n_qubits);
  static PauliString from_label(std::string_view label);
  /// Single-qubit factor `op` (one of 'I', 'X', 'Y', 'Z') on `qubit`.
  static PauliString single(unsigned n_qubits, unsigned qubit, char op);
  static PauliString pair(unsigned n_qubits, unsigned q1, char op1,
                          unsigned q2, char op2);

  unsigned n_qubits() const { return n_qubits_; }
  std::uint64_t x_mask() const { return x_mask_; }
  std::uint64_t z_mask() const { return z_mask_; }
  unsigned weight() const;
  bool is_identity() const { return (x_mask_ | z_mask_) == 0; }
  bool is_diagonal() const { return x_mask_ == 0; }
  char op_at(unsigned qubit) const;
  std::string label() const;

  bool commutes_with(const PauliString& other) const;

  friend bool operator==(const PauliString&, const PauliString&) = default;
  friend auto operator<=>(const PauliString&, const PauliString&) = default;

 private:
  unsigned n_qubits_ = 0;
  std::uint64_t x_mask_ = 0;
  std::uint64_t z_mask_ = 0;
};

/// Real-weighted sum of Pauli strings on a common register.
class WeightedPauliSum {
 public:
  struct Term {
    double coefficient;
    PauliString op;
  };

  WeightedPauliSum() = default;
  explicit WeightedPauliSum(unsigned n_qubits) : n_qubits_(n_qubits) {}

  /// Adds `coefficient * op`, merging into an existing term with the same
  /// string. Terms keep first-insertion order.
  void add(double coefficient, const PauliString& op);
  void add(const WeightedPauliSum& other, double scale = 1.0);

  unsigned n_qubits() const { return n_qubits_; }
  const std::vector<Term>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }
  /// Coefficient of `op`, zero when absent.
  double coefficient(const PauliString& op) const;
  /// Sum of absolute coefficients, an upper bound on the spectral norm.
  double one_norm() const;
  bool is_real() const;

  WeightedPauliSum scaled(double factor) const;

 private:
  unsigned n_qubits_ = 0;
  std::vector<Term> terms_;
};

/// Unit-norm statevector over 2^n computational basis states, qubit 0 the
/// least-significant bit of the index.
class StateVector {
 public:
  StateVector() = default;
  /// Takes ownership of `amplitudes`; throws if the norm deviates from one by
  /// more than kNormTolerance.
  StateVector(unsigned n_qubits, Amplitudes amplitudes);

  static StateVector basis(unsigned n_qubits, std::uint64_t index);
  static StateVector plus(unsigned n_qubits);
  /// Rescales an arbitrary nonzero vector to unit norm.
  static StateVector normalized(unsigned n_qubits, Amplitudes amplitudes);

  unsigned n_qubits() const { return n_qubits_; }
  std::size_t dimension() const { return amplitudes_.size(); }
  std::span<const Complex> amplitudes() const { return amplitudes_; }
  const Complex& operator[](std::size_t i) const { return amplitudes_[i]; }
  double norm() const;

  static constexpr double kNormTolerance = 1e-8;

 private:
  unsigned n_qubits_ = 0;
  Amplitudes amplitudes_;
};

Complex inner_product(std::span<const Complex> bra, std::span<const Complex> ket);
double squared_norm(std::span<const Complex> v);
/// |<a|b>|^2 for unit vectors.
double fidelity(const StateVector& a, const StateVector& b);

StateVector apply_pauli(const PauliString& p, const StateVector& psi);
double expectation(const WeightedPauliSum& h, const StateVector& psi);
double expectation(const PauliString& p, const StateVector& psi);
/// <H^2> - <H>^2 as the squared norm of (H - <H>)|psi>.
double variance(const WeightedPauliSum& h, const StateVector& psi);
/// exp(-i theta P)|psi> = cos(theta)|psi> - i sin(theta) P|psi>.
StateVector apply_rotation(const PauliString& p, double theta, const StateVector& psi);
/// CNOTs in the standard ladder decomposition of exp(-i theta P).
unsigned cnot_cost(const PauliString& p);

/**
 * Precompiled form of a WeightedPauliSum for repeated application.
 *
 * Terms sharing an x_mask are folded into one complex diagonal, so H|psi>
 * costs one pass per distinct flip pattern. A transverse-field Ising
 * Hamiltonian compiles to n + 1 passes regardless of the coupling count.
 */
class PauliSumKernel {
 public:
  explicit PauliSumKernel(const WeightedPauliSum& h);

  unsigned n_qubits() const { return n_qubits_; }
  std::size_t dimension() const { return std::size_t{1} << n_qubits_; }
  /// out = H in. `out` must not alias `in`.
  void apply(std::span<const Complex> in, std::span<Complex> out) const;
  Amplitudes apply(std::span<const Complex> in) const;

 private:
  struct Group {
    std::uint64_t x_mask;
    std::vector<Complex> diagonal;
  };
  unsigned n_qubits_;
  std::vector<Group> groups_;
};

/// In-place kernels on raw amplitude buffers. Callers are responsible for the
/// buffer length being 2^n of the operator.
namespace kernels {

void apply_pauli_into(const PauliString& p, std::span<const Complex> in,
                      std::span<Complex> out);
void apply_pauli_inplace(const PauliString& p, std::span<Complex> v);
void rotate_inplace(const PauliString& p, double theta, std::span<Complex> v);
/// <v|P|v> without the real-part projection.
Complex pauli_expectation(const PauliString& p, std::span<const Complex> v);

}  // namespace kernels

}  // namespace havqds
