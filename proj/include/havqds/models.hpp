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

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "havqds/pauli.hpp"

namespace havqds {

/**
 * SplitMix64 generator with a Box-Muller Gaussian transform.
 *
 * Pinned so instances are reproducible across implementations:
 *   state += 0x9E3779B97F4A7C15; z = state;
 *   z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9;
 *   z = (z ^ (z >> 27)) * 0x94D049BB133111EB;
 *   return z ^ (z >> 31);
 * Uniforms use the top 53 bits. Each Box-Muller pair draws u1 in (0, 1] then
 * u2 in [0, 1) and yields r cos(2 pi u2) followed by r sin(2 pi u2), with
 * r = sqrt(-2 ln u1).
 */
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();
  double uniform();           // [0, 1)
  double uniform_positive();  // (0, 1]
  double gaussian();          // standard normal

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// Ising instance with problem Hamiltonian
/// H_f = -sum_{i<j} J_ij Z_i Z_j - sum_i h_i Z_i.
struct SkInstance {
  unsigned n_qubits = 0;
  std::uint64_t seed = 0;
  /// Row-major upper triangle: (0,1), (0,2), ..., (0,n-1), (1,2), ...
  std::vector<double> couplings;
  std::vector<double> fields;

  double coupling(unsigned i, unsigned j) const;
  static std::size_t pair_index(unsigned n, unsigned i, unsigned j);
  void validate() const;
};

/// Couplings J_ij ~ N(0, 1/n) in pair order, zero fields.
SkInstance sample_sk(unsigned n_qubits, std::uint64_t seed);

std::string instance_to_json(const SkInstance& instance);
SkInstance instance_from_json(std::string_view text);
void save_instance(const SkInstance& instance, const std::filesystem::path& path);
SkInstance load_instance(const std::filesystem::path& path);

/// s(t) = sin^2(pi t / 2T).
double schedule_s(double t, double total_time);
/// ds/dt = (pi / 2T) sin(pi t / T).
double schedule_sdot(double t, double total_time);

/// H_i = -sum_i X_i.
WeightedPauliSum build_driver(unsigned n_qubits);
/// H_f of the instance (zero fields are omitted).
WeightedPauliSum build_problem(const SkInstance& instance);
/// (1 - s) H_i + s H_f.
WeightedPauliSum build_h_ad(const SkInstance& instance, double s);

/// First-order counterdiabatic coefficient alpha_1 and its denominator R.
struct CdCoefficient {
  double alpha1 = 0.0;
  double r = 0.0;       // R(s) before flooring
  bool floored = false;  // |R| was raised to the floor
};

/// Denominator R(s) of alpha_1, including the [1 - 2s] prefactor term.
double cd_r(const SkInstance& instance, double s);
CdCoefficient cd_coefficient(const SkInstance& instance, double s);
double cd_alpha1(const SkInstance& instance, double s);
/// -2 sdot(t) alpha_1(s(t)), the common prefactor of the first-order CD term.
double cd_prefactor(const SkInstance& instance, double t, double total_time);

/**
 * First-order counterdiabatic term at time t:
 *   -2 sdot alpha_1 [sum_i g_i Y_i + sum_{i<j} K_ij (Y_i Z_j + Z_i Y_j)],
 * where K_ij and g_i are the ZZ and Z coefficients of H_f (K = -J, g = -h).
 * Returns an empty sum when sdot = 0.
 */
WeightedPauliSum build_h_cd1(const SkInstance& instance, double t, double total_time);

/// Generator pool for adaptive growth: X_i, Y_i per qubit (qubit order),
/// then Z_iZ_j, Z_iY_j, Y_iZ_j per pair i < j (lexicographic).
using OperatorPool = std::vector<PauliString>;
OperatorPool build_pool(unsigned n_qubits);

}  // namespace havqds
