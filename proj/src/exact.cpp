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

#include "havqds/exact.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "havqds/models.hpp"

namespace havqds {

namespace {

constexpr unsigned kDenseQubitLimit = 8;

using VectorXcd = Eigen::VectorXcd;

Eigen::Map<const VectorXcd> view(std::span<const Complex> v) {
  return {v.data(), static_cast<Eigen::Index>(v.size())};
}

// -i H(t) applied to `in`.
void minus_i_h(const PauliSumKernel& kernel, std::span<const Complex> in, std::span<Complex> out) {
  kernel.apply(in, out);
  for (auto& a : out) a = Complex(a.imag(), -a.real());
}

}  // namespace

StateVector evolve_exact(const HamiltonianProvider& hamiltonian, const StateVector& initial,
                         double total_time, std::optional<double> substep) {
  if (!(total_time >= 0.0)) throw std::invalid_argument("evolve_exact: negative total time");
  const double requested = substep.value_or(total_time / 1e4);
  if (substep && !(*substep > 0.0)) {
    throw std::invalid_argument("evolve_exact: substep must be positive");
  }
  if (total_time == 0.0) return initial;

  const long steps = std::max(1L, static_cast<long>(std::ceil(total_time / requested - 1e-9)));
  const double h = total_time / static_cast<double>(steps);
  const std::size_t dim = initial.dimension();
  const unsigned n = initial.n_qubits();

  Amplitudes psi(initial.amplitudes().begin(), initial.amplitudes().end());
  Amplitudes k1(dim), k2(dim), k3(dim), k4(dim), tmp(dim);

  for (long step = 0; step < steps; ++step) {
    const double t = h * static_cast<double>(step);
    const PauliSumKernel h0(hamiltonian(t));
    const PauliSumKernel hm(hamiltonian(t + 0.5 * h));
    const PauliSumKernel h1(hamiltonian(step + 1 == steps ? total_time : t + h));
    if (h0.n_qubits() != n) throw std::invalid_argument("evolve_exact: register mismatch");

    minus_i_h(h0, psi, k1);
    for (std::size_t i = 0; i < dim; ++i) tmp[i] = psi[i] + 0.5 * h * k1[i];
    minus_i_h(hm, tmp, k2);
    for (std::size_t i = 0; i < dim; ++i) tmp[i] = psi[i] + 0.5 * h * k2[i];
    minus_i_h(hm, tmp, k3);
    for (std::size_t i = 0; i < dim; ++i) tmp[i] = psi[i] + h * k3[i];
    minus_i_h(h1, tmp, k4);
    for (std::size_t i = 0; i < dim; ++i) {
      psi[i] += (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }

    const double norm = std::sqrt(squared_norm(psi));
    if (!(std::abs(norm - 1.0) <= 1e-6)) {
      throw std::runtime_error("evolve_exact: norm drift " + std::to_string(norm - 1.0) +
                               " in one step; reduce the substep");
    }
    for (auto& a : psi) a /= norm;
  }
  return StateVector(n, std::move(psi));
}

// ---------------------------------------------------------------------------

Eigen::MatrixXcd dense_matrix(const WeightedPauliSum& h) {
  const std::size_t dim = std::size_t{1} << h.n_qubits();
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& term : h.terms()) {
    const auto x = term.op.x_mask();
    const auto z = term.op.z_mask();
    Complex phase = term.coefficient;
    for (int k = 0; k < std::popcount(x & z); ++k) phase *= Complex(0.0, 1.0);
    for (std::size_t b = 0; b < dim; ++b) {
      const double sign = (std::popcount(b & z) & 1) ? -1.0 : 1.0;
      m(b ^ x, b) += sign * phase;
    }
  }
  return m;
}

DenseEigensystem dense_eigensystem(const WeightedPauliSum& h) {
  if (h.n_qubits() > 12) throw std::invalid_argument("dense_eigensystem: register too large");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(dense_matrix(h));
  if (solver.info() != Eigen::Success) throw std::runtime_error("dense eigensolver failed");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

namespace {

Eigen::VectorXd dense_eigenvalues(const WeightedPauliSum& h) {
  if (h.is_real()) {
    const Eigen::MatrixXd m = dense_matrix(h).real();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw std::runtime_error("dense eigensolver failed");
    return solver.eigenvalues();
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(dense_matrix(h), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw std::runtime_error("dense eigensolver failed");
  return solver.eigenvalues();
}

ExtremalEigenvalues lanczos_extremes(const WeightedPauliSum& h, int max_steps) {
  const PauliSumKernel kernel(h);
  const auto dim = static_cast<Eigen::Index>(kernel.dimension());
  const Eigen::Index max_krylov = std::min<Eigen::Index>(dim, max_steps);

  Eigen::MatrixXcd basis(dim, max_krylov);
  std::vector<double> alpha;
  std::vector<double> beta;

  SplitMix64 rng(0x5eed1a2c20ULL);
  VectorXcd v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) v[i] = Complex(rng.uniform() - 0.5, rng.uniform() - 0.5);
  v.normalize();

  const double scale = std::max(1.0, h.one_norm());
  VectorXcd w(dim);
  ExtremalEigenvalues out;
  for (Eigen::Index j = 0; j < max_krylov; ++j) {
    basis.col(j) = v;
    kernel.apply(std::span<const Complex>(v.data(), dim), std::span<Complex>(w.data(), dim));
    alpha.push_back(v.dot(w).real());
    // Full reorthogonalization, applied twice.
    for (int pass = 0; pass < 2; ++pass) {
      const VectorXcd coeffs = basis.leftCols(j + 1).adjoint() * w;
      w.noalias() -= basis.leftCols(j + 1) * coeffs;
    }
    const double b = w.norm();
    const bool exhausted = b < 1e-12 * scale || j + 1 == dim;
    const bool check = exhausted || j + 1 == max_krylov || (j >= 4 && j % 4 == 0);
    if (check) {
      const auto m = static_cast<Eigen::Index>(alpha.size());
      Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);
      for (Eigen::Index k = 0; k < m; ++k) t(k, k) = alpha[k];
      for (Eigen::Index k = 0; k + 1 < m; ++k) t(k, k + 1) = t(k + 1, k) = beta[k];
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(t);
      const double lo = solver.eigenvalues()(0);
      const double hi = solver.eigenvalues()(m - 1);
      const double res_lo = exhausted ? 0.0 : b * std::abs(solver.eigenvectors()(m - 1, 0));
      const double res_hi = exhausted ? 0.0 : b * std::abs(solver.eigenvectors()(m - 1, m - 1));
      out = {lo, hi, std::max(res_lo, res_hi), static_cast<int>(m)};
      if (res_lo <= 1e-10 * std::max(1.0, std::abs(lo)) &&
          res_hi <= 1e-10 * std::max(1.0, std::abs(hi))) {
        return out;
      }
      if (exhausted) return out;
    }
    beta.push_back(b);
    v = w / b;
  }
  throw ConvergenceError("Lanczos did not converge in " + std::to_string(max_krylov) +
                             " steps (residual " + std::to_string(out.residual) + ")",
                         out.residual);
}

}  // namespace

ExtremalEigenvalues extremal_eigenvalues(const WeightedPauliSum& h, EigenMethod method,
                                         int max_steps) {
  if (h.n_qubits() == 0) throw std::invalid_argument("extremal_eigenvalues: empty operator");
  if (h.n_qubits() > 20) throw std::invalid_argument("extremal_eigenvalues: n > 20");
  if (method == EigenMethod::kAuto) {
    method = h.n_qubits() <= kDenseQubitLimit ? EigenMethod::kDense : EigenMethod::kLanczos;
  }
  if (method == EigenMethod::kDense) {
    if (h.n_qubits() > 12) throw std::invalid_argument("dense diagonalization limited to 12 qubits");
    const Eigen::VectorXd values = dense_eigenvalues(h);
    return {values(0), values(values.size() - 1), 0.0, 0};
  }
  return lanczos_extremes(h, max_steps);
}

std::vector<double> lowest_levels(const WeightedPauliSum& h, int count) {
  if (h.n_qubits() > 12) throw std::invalid_argument("lowest_levels: register too large");
  const Eigen::VectorXd values = dense_eigenvalues(h);
  const auto k = std::min<Eigen::Index>(count, values.size());
  return {values.data(), values.data() + k};
}

double approximation_ratio(double energy, const ExtremalEigenvalues& spectrum) {
  const double width = spectrum.e_max - spectrum.e_min;
  if (!(width >= 1e-12)) {
    throw std::domain_error("approximation_ratio: degenerate spectrum width");
  }
  return (spectrum.e_max - energy) / width;
}

double approximation_ratio(const WeightedPauliSum& h, const StateVector& psi) {
  return approximation_ratio(expectation(h, psi), extremal_eigenvalues(h));
}

// ---------------------------------------------------------------------------

StateVector imaginary_filter_exact(const WeightedPauliSum& h, const StateVector& psi, double tau) {
  if (!(tau >= 0.0)) throw std::invalid_argument("imaginary_filter_exact: tau must be >= 0");
  if (tau == 0.0 || h.empty()) return psi;
  if (h.n_qubits() != psi.n_qubits()) {
    throw std::invalid_argument("imaginary_filter_exact: register mismatch");
  }
  const std::size_t dim = psi.dimension();

  if (h.n_qubits() <= kDenseQubitLimit) {
    const DenseEigensystem eig = dense_eigensystem(h);
    VectorXcd coeffs = eig.vectors.adjoint() * view(psi.amplitudes());
    const double e0 = eig.values(0);
    for (Eigen::Index i = 0; i < coeffs.size(); ++i) coeffs[i] *= std::exp(-tau * (eig.values(i) - e0));
    const VectorXcd out = eig.vectors * coeffs;
    return StateVector::normalized(psi.n_qubits(), Amplitudes(out.data(), out.data() + dim));
  }

  const PauliSumKernel kernel(h);
  const double h_step = std::min(0.01, 0.05 / std::max(1.0, h.one_norm()));
  const long steps = static_cast<long>(std::ceil(tau / h_step - 1e-9));
  const double d = tau / static_cast<double>(steps);
  Amplitudes v(psi.amplitudes().begin(), psi.amplitudes().end());
  Amplitudes k1(dim), k2(dim), k3(dim), k4(dim), tmp(dim);
  // -(H - <H>) v, with <H> taken for the normalized argument.
  auto rhs = [&](std::span<const Complex> in, std::span<Complex> out) {
    kernel.apply(in, out);
    const double e = inner_product(in, out).real() / squared_norm(in);
    for (std::size_t i = 0; i < dim; ++i) out[i] = -(out[i] - e * in[i]);
  };
  for (long s = 0; s < steps; ++s) {
    rhs(v, k1);
    for (std::size_t i = 0; i < dim; ++i) tmp[i] = v[i] + 0.5 * d * k1[i];
    rhs(tmp, k2);
    for (std::size_t i = 0; i < dim; ++i) tmp[i] = v[i] + 0.5 * d * k2[i];
    rhs(tmp, k3);
    for (std::size_t i = 0; i < dim; ++i) tmp[i] = v[i] + d * k3[i];
    rhs(tmp, k4);
    for (std::size_t i = 0; i < dim; ++i) v[i] += (d / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    const double norm = std::sqrt(squared_norm(v));
    for (auto& a : v) a /= norm;
  }
  return StateVector::normalized(psi.n_qubits(), std::move(v));
}

GroundProbability ground_state_probability(const WeightedPauliSum& h, const StateVector& psi,
                                           double tau) {
  if (!(tau >= 0.0)) throw std::invalid_argument("ground_state_probability: tau must be >= 0");
  if (h.n_qubits() > kDenseQubitLimit) {
    throw std::invalid_argument("ground_state_probability: dense path limited to 8 qubits");
  }
  if (h.n_qubits() != psi.n_qubits()) {
    throw std::invalid_argument("ground_state_probability: register mismatch");
  }
  const DenseEigensystem eig = dense_eigensystem(h);
  const VectorXcd coeffs = eig.vectors.adjoint() * view(psi.amplitudes());
  const double e0 = eig.values(0);
  const double degeneracy_tol = 1e-10 * std::max(1.0, std::abs(e0));

  GroundProbability out;
  double ground_weight = 0.0;
  double excited = 0.0;
  double excited_raw = 0.0;
  int ground_dim = 0;
  for (Eigen::Index i = 0; i < coeffs.size(); ++i) {
    const double gap = eig.values(i) - e0;
    const double w = std::norm(coeffs[i]);
    if (gap <= degeneracy_tol) {
      ground_weight += w;
      ++ground_dim;
    } else {
      if (out.gap == 0.0) out.gap = gap;
      excited += w * std::exp(-2.0 * tau * gap);
      excited_raw += w;
    }
  }
  if (ground_weight < 1e-14) {
    throw std::domain_error("ground_state_probability: state has no ground-state weight");
  }
  out.ground_dimension = ground_dim;
  out.degenerate = ground_dim > 1;
  out.probability = 1.0 / (1.0 + excited / ground_weight);
  out.unfiltered = 1.0 / (1.0 + excited_raw / ground_weight);
  return out;
}

}  // namespace havqds
