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

// Dense reference implementations built from 2x2 matrices and Kronecker
// products. They share no code with the library kernels.

#pragma once

#include <cmath>
#include <complex>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "havqds/pauli.hpp"

namespace oracle {

using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using cd = std::complex<double>;

inline Mat pauli2(char c) {
  Mat m(2, 2);
  const cd i(0.0, 1.0);
  switch (c) {
    case 'I': m << 1, 0, 0, 1; break;
    case 'X': m << 0, 1, 1, 0; break;
    case 'Y': m << 0, -i, i, 0; break;
    case 'Z': m << 1, 0, 0, -1; break;
    default: throw std::invalid_argument("pauli2");
  }
  return m;
}

inline Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index r = 0; r < a.rows(); ++r) {
    for (Eigen::Index c = 0; c < a.cols(); ++c) {
      out.block(r * b.rows(), c * b.cols(), b.rows(), b.cols()) = a(r, c) * b;
    }
  }
  return out;
}

// label[q] acts on qubit q, qubit 0 being the least significant bit, so the
// Kronecker product runs from the last label character to the first.
inline Mat pauli_matrix(const std::string& label) {
  Mat m = Mat::Identity(1, 1);
  for (auto it = label.rbegin(); it != label.rend(); ++it) m = kron(m, pauli2(*it));
  return m;
}

inline Mat dense(const havqds::WeightedPauliSum& h, unsigned n) {
  const Eigen::Index dim = Eigen::Index{1} << n;
  Mat m = Mat::Zero(dim, dim);
  for (const auto& t : h.terms()) m += t.coefficient * pauli_matrix(t.op.label());
  return m;
}

inline Vec vec(std::span<const havqds::Complex> v) {
  Vec out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out[static_cast<Eigen::Index>(i)] = v[i];
  return out;
}

inline havqds::Amplitudes amps(const Vec& v) { return {v.data(), v.data() + v.size()}; }

/// f(H) for Hermitian H via its eigendecomposition.
template <typename F>
Mat hermitian_function(const Mat& h, F f) {
  Eigen::SelfAdjointEigenSolver<Mat> es(h);
  Vec d(es.eigenvalues().size());
  for (Eigen::Index i = 0; i < d.size(); ++i) d[i] = f(es.eigenvalues()[i]);
  return es.eigenvectors() * d.asDiagonal() * es.eigenvectors().adjoint();
}

/// exp(-i theta P) for a Pauli label.
inline Mat rotation(const std::string& label, double theta) {
  return hermitian_function(pauli_matrix(label),
                            [&](double e) { return std::exp(cd(0.0, -theta * e)); });
}

inline Vec plus_state(unsigned n) {
  const Eigen::Index dim = Eigen::Index{1} << n;
  return Vec::Constant(dim, cd(1.0 / std::sqrt(static_cast<double>(dim)), 0.0));
}

inline Vec random_state(unsigned n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Vec v(Eigen::Index{1} << n);
  for (auto& a : v) a = cd(g(rng), g(rng));
  return v.normalized();
}

inline std::string random_label(unsigned n, std::mt19937_64& rng) {
  static const char ops[] = {'I', 'X', 'Y', 'Z'};
  std::uniform_int_distribution<int> pick(0, 3);
  std::string s(n, 'I');
  for (auto& c : s) c = ops[pick(rng)];
  return s;
}

inline havqds::WeightedPauliSum random_sum(unsigned n, int terms, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  havqds::WeightedPauliSum h(n);
  for (int k = 0; k < terms; ++k) h.add(g(rng), havqds::PauliString::from_label(random_label(n, rng)));
  return h;
}

}  // namespace oracle
