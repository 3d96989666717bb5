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

#include "havqds/pauli.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

namespace havqds {

namespace {

constexpr unsigned kMaxQubits = 30;

std::uint64_t register_mask(unsigned n) {
  return n >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
}

// i^k for k mod 4.
Complex i_power(unsigned k) {
  switch (k & 3U) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

Complex y_phase(const PauliString& p) {
  return i_power(static_cast<unsigned>(std::popcount(p.x_mask() & p.z_mask())));
}

inline double z_sign(std::uint64_t b, std::uint64_t z) {
  return (std::popcount(b & z) & 1) ? -1.0 : 1.0;
}

void check_dimension(const PauliString& p, std::size_t dim) {
  if (dim != (std::size_t{1} << p.n_qubits())) {
    throw std::invalid_argument("Pauli string on " + std::to_string(p.n_qubits()) +
                                " qubits applied to vector of length " +
                                std::to_string(dim));
  }
}

void check_dimension(unsigned n_op, unsigned n_state) {
  if (n_op != n_state) {
    throw std::invalid_argument("operator on " + std::to_string(n_op) +
                                " qubits applied to " + std::to_string(n_state) +
                                "-qubit state");
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// PauliString

PauliString::PauliString(unsigned n_qubits, std::uint64_t x_mask, std::uint64_t z_mask)
    : n_qubits_(n_qubits), x_mask_(x_mask), z_mask_(z_mask) {
  if (n_qubits == 0 || n_qubits > kMaxQubits) {
    throw std::invalid_argument("PauliString: qubit count must be in [1, 30]");
  }
  const auto outside = ~register_mask(n_qubits);
  if ((x_mask & outside) != 0 || (z_mask & outside) != 0) {
    throw std::invalid_argument("PauliString: mask bits beyond the register");
  }
}

PauliString PauliString::identity(unsigned n_qubits) { return {n_qubits, 0, 0}; }

PauliString PauliString::from_label(std::string_view label) {
  std::uint64_t x = 0;
  std::uint64_t z = 0;
  for (std::size_t q = 0; q < label.size(); ++q) {
    const std::uint64_t bit = std::uint64_t{1} << q;
    switch (label[q]) {
      case 'I': break;
      case 'X': x |= bit; break;
      case 'Y': x |= bit; z |= bit; break;
      case 'Z': z |= bit; break;
      default:
        throw std::invalid_argument("PauliString: bad label character '" +
                                    std::string(1, label[q]) + "'");
    }
  }
  return {static_cast<unsigned>(label.size()), x, z};
}

PauliString PauliString::single(unsigned n_qubits, unsigned qubit, char op) {
  if (qubit >= n_qubits) throw std::invalid_argument("PauliString: qubit out of range");
  std::string label(n_qubits, 'I');
  label[qubit] = op;
  return from_label(label);
}

PauliString PauliString::pair(unsigned n_qubits, unsigned q1, char op1, unsigned q2,
                              char op2) {
  if (q1 >= n_qubits || q2 >= n_qubits || q1 == q2) {
    throw std::invalid_argument("PauliString: bad qubit pair");
  }
  std::string label(n_qubits, 'I');
  label[q1] = op1;
  label[q2] = op2;
  return from_label(label);
}

unsigned PauliString::weight() const {
  return static_cast<unsigned>(std::popcount(x_mask_ | z_mask_));
}

char PauliString::op_at(unsigned qubit) const {
  const bool x = (x_mask_ >> qubit) & 1U;
  const bool z = (z_mask_ >> qubit) & 1U;
  if (x && z) return 'Y';
  if (x) return 'X';
  if (z) return 'Z';
  return 'I';
}

std::string PauliString::label() const {
  std::string out(n_qubits_, 'I');
  for (unsigned q = 0; q < n_qubits_; ++q) out[q] = op_at(q);
  return out;
}

bool PauliString::commutes_with(const PauliString& other) const {
  const int overlap = std::popcount(x_mask_ & other.z_mask_) +
                      std::popcount(z_mask_ & other.x_mask_);
  return (overlap & 1) == 0;
}

// ---------------------------------------------------------------------------
// WeightedPauliSum

void WeightedPauliSum::add(double coefficient, const PauliString& op) {
  if (n_qubits_ == 0) n_qubits_ = op.n_qubits();
  if (op.n_qubits() != n_qubits_) {
    throw std::invalid_argument("WeightedPauliSum: mixed register sizes");
  }
  for (auto& term : terms_) {
    if (term.op == op) {
      term.coefficient += coefficient;
      return;
    }
  }
  terms_.push_back({coefficient, op});
}

void WeightedPauliSum::add(const WeightedPauliSum& other, double scale) {
  for (const auto& term : other.terms_) add(scale * term.coefficient, term.op);
}

double WeightedPauliSum::coefficient(const PauliString& op) const {
  for (const auto& term : terms_) {
    if (term.op == op) return term.coefficient;
  }
  return 0.0;
}

double WeightedPauliSum::one_norm() const {
  double total = 0.0;
  for (const auto& term : terms_) total += std::abs(term.coefficient);
  return total;
}

bool WeightedPauliSum::is_real() const {
  return std::all_of(terms_.begin(), terms_.end(), [](const Term& t) {
    return (std::popcount(t.op.x_mask() & t.op.z_mask()) & 1) == 0;
  });
}

WeightedPauliSum WeightedPauliSum::scaled(double factor) const {
  WeightedPauliSum out(n_qubits_);
  out.terms_ = terms_;
  for (auto& term : out.terms_) term.coefficient *= factor;
  return out;
}

// ---------------------------------------------------------------------------
// StateVector

StateVector::StateVector(unsigned n_qubits, Amplitudes amplitudes)
    : n_qubits_(n_qubits), amplitudes_(std::move(amplitudes)) {
  if (n_qubits == 0 || n_qubits > kMaxQubits) {
    throw std::invalid_argument("StateVector: qubit count must be in [1, 30]");
  }
  if (amplitudes_.size() != (std::size_t{1} << n_qubits)) {
    throw std::invalid_argument("StateVector: amplitude count is not 2^n");
  }
  const double drift = std::abs(squared_norm(amplitudes_) - 1.0);
  if (!(drift <= kNormTolerance)) {
    throw std::runtime_error("StateVector: norm drift " + std::to_string(drift) +
                             " exceeds tolerance");
  }
}

StateVector StateVector::basis(unsigned n_qubits, std::uint64_t index) {
  Amplitudes amps(std::size_t{1} << n_qubits);
  if (index >= amps.size()) throw std::invalid_argument("StateVector: basis index out of range");
  amps[index] = 1.0;
  return {n_qubits, std::move(amps)};
}

StateVector StateVector::plus(unsigned n_qubits) {
  const std::size_t dim = std::size_t{1} << n_qubits;
  return {n_qubits, Amplitudes(dim, Complex(1.0 / std::sqrt(static_cast<double>(dim)), 0.0))};
}

StateVector StateVector::normalized(unsigned n_qubits, Amplitudes amplitudes) {
  const double norm = std::sqrt(squared_norm(amplitudes));
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw std::runtime_error("StateVector: cannot normalize a zero or non-finite vector");
  }
  for (auto& a : amplitudes) a /= norm;
  return {n_qubits, std::move(amplitudes)};
}

double StateVector::norm() const { return std::sqrt(squared_norm(amplitudes_)); }

// ---------------------------------------------------------------------------
// Free functions

Complex inner_product(std::span<const Complex> bra, std::span<const Complex> ket) {
  if (bra.size() != ket.size()) throw std::invalid_argument("inner_product: size mismatch");
  double re = 0.0;
  double im = 0.0;
  for (std::size_t i = 0; i < bra.size(); ++i) {
    const double ar = bra[i].real(), ai = bra[i].imag();
    const double br = ket[i].real(), bi = ket[i].imag();
    re += ar * br + ai * bi;
    im += ar * bi - ai * br;
  }
  return {re, im};
}

double squared_norm(std::span<const Complex> v) {
  double total = 0.0;
  for (const auto& a : v) total += std::norm(a);
  return total;
}

double fidelity(const StateVector& a, const StateVector& b) {
  return std::norm(inner_product(a.amplitudes(), b.amplitudes()));
}

StateVector apply_pauli(const PauliString& p, const StateVector& psi) {
  check_dimension(p.n_qubits(), psi.n_qubits());
  Amplitudes out(psi.dimension());
  kernels::apply_pauli_into(p, psi.amplitudes(), out);
  return {psi.n_qubits(), std::move(out)};
}

double expectation(const PauliString& p, const StateVector& psi) {
  check_dimension(p.n_qubits(), psi.n_qubits());
  return kernels::pauli_expectation(p, psi.amplitudes()).real();
}

double expectation(const WeightedPauliSum& h, const StateVector& psi) {
  if (h.empty()) return 0.0;
  check_dimension(h.n_qubits(), psi.n_qubits());
  Complex total{0.0, 0.0};
  for (const auto& term : h.terms()) {
    total += term.coefficient * kernels::pauli_expectation(term.op, psi.amplitudes());
  }
  if (std::abs(total.imag()) > 1e-12 * std::max(1.0, h.one_norm())) {
    throw std::logic_error("expectation: imaginary part " + std::to_string(total.imag()) +
                           " indicates a non-Hermitian sum");
  }
  return total.real();
}

double variance(const WeightedPauliSum& h, const StateVector& psi) {
  if (h.empty()) return 0.0;
  check_dimension(h.n_qubits(), psi.n_qubits());
  const PauliSumKernel kernel(h);
  Amplitudes h_psi = kernel.apply(psi.amplitudes());
  const Complex energy = inner_product(psi.amplitudes(), h_psi);
  if (std::abs(energy.imag()) > 1e-12 * std::max(1.0, h.one_norm())) {
    throw std::logic_error("variance: non-Hermitian sum");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < h_psi.size(); ++i) {
    total += std::norm(h_psi[i] - energy.real() * psi[i]);
  }
  if (total < 0.0 && total > -1e-12) total = 0.0;
  return total;
}

StateVector apply_rotation(const PauliString& p, double theta, const StateVector& psi) {
  check_dimension(p.n_qubits(), psi.n_qubits());
  Amplitudes out(psi.amplitudes().begin(), psi.amplitudes().end());
  kernels::rotate_inplace(p, theta, out);
  return {psi.n_qubits(), std::move(out)};
}

unsigned cnot_cost(const PauliString& p) {
  const unsigned w = p.weight();
  return w >= 2 ? 2 * (w - 1) : 0;
}

// ---------------------------------------------------------------------------
// PauliSumKernel

PauliSumKernel::PauliSumKernel(const WeightedPauliSum& h) : n_qubits_(h.n_qubits()) {
  if (n_qubits_ == 0) throw std::invalid_argument("PauliSumKernel: empty register");
  const std::size_t dim = dimension();
  for (const auto& term : h.terms()) {
    auto it = std::find_if(groups_.begin(), groups_.end(), [&](const Group& g) {
      return g.x_mask == term.op.x_mask();
    });
    if (it == groups_.end()) {
      groups_.push_back({term.op.x_mask(), std::vector<Complex>(dim)});
      it = std::prev(groups_.end());
    }
    const Complex phase = term.coefficient * y_phase(term.op);
    const std::uint64_t z = term.op.z_mask();
    for (std::size_t b = 0; b < dim; ++b) it->diagonal[b] += z_sign(b, z) * phase;
  }
}

void PauliSumKernel::apply(std::span<const Complex> in, std::span<Complex> out) const {
  const std::size_t dim = dimension();
  if (in.size() != dim || out.size() != dim) {
    throw std::invalid_argument("PauliSumKernel: dimension mismatch");
  }
  std::fill(out.begin(), out.end(), Complex{0.0, 0.0});
  for (const auto& g : groups_) {
    const std::uint64_t x = g.x_mask;
    const Complex* d = g.diagonal.data();
    for (std::size_t b = 0; b < dim; ++b) out[b ^ x] += d[b] * in[b];
  }
}

Amplitudes PauliSumKernel::apply(std::span<const Complex> in) const {
  Amplitudes out(dimension());
  apply(in, out);
  return out;
}

// ---------------------------------------------------------------------------
// kernels

namespace kernels {

void apply_pauli_into(const PauliString& p, std::span<const Complex> in,
                      std::span<Complex> out) {
  check_dimension(p, in.size());
  check_dimension(p, out.size());
  const std::uint64_t x = p.x_mask();
  const std::uint64_t z = p.z_mask();
  const Complex phase = y_phase(p);
  for (std::size_t b = 0; b < in.size(); ++b) out[b ^ x] = (z_sign(b, z) * phase) * in[b];
}

void apply_pauli_inplace(const PauliString& p, std::span<Complex> v) {
  check_dimension(p, v.size());
  const std::uint64_t x = p.x_mask();
  const std::uint64_t z = p.z_mask();
  const Complex phase = y_phase(p);
  if (x == 0) {
    for (std::size_t b = 0; b < v.size(); ++b) v[b] *= z_sign(b, z) * phase;
    return;
  }
  const std::uint64_t top = std::bit_floor(x);
  for (std::size_t b = 0; b < v.size(); ++b) {
    if (b & top) continue;
    const std::size_t partner = b ^ x;
    const Complex lo = v[b];
    const Complex hi = v[partner];
    v[partner] = (z_sign(b, z) * phase) * lo;
    v[b] = (z_sign(partner, z) * phase) * hi;
  }
}

void rotate_inplace(const PauliString& p, double theta, std::span<Complex> v) {
  check_dimension(p, v.size());
  if (theta == 0.0) return;
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const std::uint64_t x = p.x_mask();
  const std::uint64_t z = p.z_mask();
  // -i sin(theta) times the Y phase of P.
  const Complex k = Complex(0.0, -s) * y_phase(p);
  if (x == 0) {
    const Complex even = c + k;
    const Complex odd = c - k;
    for (std::size_t b = 0; b < v.size(); ++b) {
      v[b] *= (std::popcount(b & z) & 1) ? odd : even;
    }
    return;
  }
  const std::uint64_t top = std::bit_floor(x);
  for (std::size_t b = 0; b < v.size(); ++b) {
    if (b & top) continue;
    const std::size_t partner = b ^ x;
    const Complex lo = v[b];
    const Complex hi = v[partner];
    v[b] = c * lo + (z_sign(partner, z) * k) * hi;
    v[partner] = c * hi + (z_sign(b, z) * k) * lo;
  }
}

Complex pauli_expectation(const PauliString& p, std::span<const Complex> v) {
  check_dimension(p, v.size());
  const std::uint64_t x = p.x_mask();
  const std::uint64_t z = p.z_mask();
  double re = 0.0;
  double im = 0.0;
  for (std::size_t b = 0; b < v.size(); ++b) {
    // conj(v[b ^ x]) * sign(b) * v[b]
    const Complex a = v[b ^ x];
    const Complex w = v[b];
    const double sgn = z_sign(b, z);
    re += sgn * (a.real() * w.real() + a.imag() * w.imag());
    im += sgn * (a.real() * w.imag() - a.imag() * w.real());
  }
  return y_phase(p) * Complex(re, im);
}

}  // namespace kernels

}  // namespace havqds
