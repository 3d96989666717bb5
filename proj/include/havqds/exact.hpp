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

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

#include "havqds/pauli.hpp"

namespace havqds {

/// Time-dependent Hamiltonian H(t).
using HamiltonianProvider = std::function<WeightedPauliSum(double)>;

/**
 * Integrates i d/dt |psi> = H(t)|psi> over [0, T] with classic RK4.
 *
 * The default substep is T / 10^4. Norm drift below 1e-10 per step is
 * renormalized away; drift above 1e-6 in a single step throws.
 */
StateVector evolve_exact(const HamiltonianProvider& hamiltonian, const StateVector& initial,
                         double total_time, std::optional<double> substep = std::nullopt);

/// Dense 2^n x 2^n matrix of H, column b = H|b>.
Eigen::MatrixXcd dense_matrix(const WeightedPauliSum& h);

struct DenseEigensystem {
  Eigen::VectorXd values;    // ascending
  Eigen::MatrixXcd vectors;  // columns are eigenvectors
};
DenseEigensystem dense_eigensystem(const WeightedPauliSum& h);

enum class EigenMethod { kAuto, kDense, kLanczos };

struct ExtremalEigenvalues {
  double e_min = 0.0;
  double e_max = 0.0;
  double residual = 0.0;  // largest Ritz residual at exit (0 for dense)
  int iterations = 0;
};

class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

/**
 * Smallest and largest eigenvalue of H.
 *
 * kAuto uses dense diagonalization up to 8 qubits and matrix-free Lanczos
 * with full reorthogonalization above. Lanczos stops when both Ritz residuals
 * fall below 1e-10 max(1, |E|) and throws ConvergenceError after max_steps.
 */
ExtremalEigenvalues extremal_eigenvalues(const WeightedPauliSum& h,
                                         EigenMethod method = EigenMethod::kAuto,
                                         int max_steps = 400);

/// Lowest `count` eigenvalues by dense diagonalization (n <= 12).
std::vector<double> lowest_levels(const WeightedPauliSum& h, int count);

/// r = (E_max - <H>) / (E_max - E_min). Throws when the spectrum width is
/// below 1e-12.
double approximation_ratio(const WeightedPauliSum& h, const StateVector& psi);
double approximation_ratio(double energy, const ExtremalEigenvalues& spectrum);

/// e^{-tau H}|psi> normalized: dense spectral form up to 8 qubits, RK4 on
/// d/dtau |psi> = -(H - <H>)|psi> above.
StateVector imaginary_filter_exact(const WeightedPauliSum& h, const StateVector& psi,
                                   double tau);

struct GroundProbability {
  double probability = 0.0;
  double unfiltered = 0.0;   // same quantity at tau = 0
  bool degenerate = false;   // ground space has dimension > 1
  int ground_dimension = 1;
  double gap = 0.0;          // E_1 - E_0 to the first level above the ground space
};

/**
 * Ground-state probability after imaginary-time filtering for duration tau,
 * from the closed form 1 / (1 + sum_{i>0} |a_i|^2/|a_0|^2 e^{-2 tau D_i0}).
 *
 * Levels within 1e-10 of E_0 form the ground space; its total weight plays
 * the role of |a_0|^2. Dense path only (n <= 8). Throws when the state has
 * ground weight below 1e-14.
 */
GroundProbability ground_state_probability(const WeightedPauliSum& h, const StateVector& psi,
                                           double tau);

}  // namespace havqds
