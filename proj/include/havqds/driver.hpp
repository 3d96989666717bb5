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
#include <vector>

#include "havqds/models.hpp"
#include "havqds/variational.hpp"

namespace havqds {

struct RunConfig {
  double total_time = 1.0;
  double dt = 0.01;
  double dtau = 0.05;
  double distance_cut = 0.05;
  double eps_var = 0.05;
  int k_max = 11;
  double lambda = kDefaultRegularization;
  std::size_t max_ansatz = 500;
  /// Compute r(s) at every recorded step; the final record always has r(1).
  bool record_ratio = true;
  /// Halve dtau for an imaginary-time step whose energy rises by more than
  /// descent_tolerance, up to max_halvings times; the step is dropped and the
  /// block ends if it still rises.
  bool descent_guard = true;
  double descent_tolerance = 1e-8;
  int max_halvings = 30;

  /// Throws std::invalid_argument unless every field is in range.
  void validate() const;
};

struct TrajectoryRecord {
  std::uint64_t step = 0;
  double t = 0.0;
  double s = 0.0;
  double energy = 0.0;    // <H_AD(s)> of the step's state of record
  double variance = 0.0;
  double ratio = 0.0;     // NaN when not recorded
  std::size_t ansatz_size = 0;
  unsigned cnot_total = 0;
  int imag_steps = 0;     // imaginary-time steps in this step's filtering block
  double distance = 0.0;  // minimized McLachlan distance after expansion
  bool degraded = false;
};

struct HavqdsResult {
  Ansatz ansatz;
  StateVector state;
  std::vector<TrajectoryRecord> records;  // record 0 is t = 0
  double final_energy = 0.0;
  double final_ratio = 0.0;
  bool degraded = false;                  // some step ended above the cut
  std::uint64_t total_imag_steps = 0;
  /// Largest energy change across an accepted imaginary-time step (<= 0 when
  /// every step descends); -inf when no step was taken.
  double max_imag_energy_increase = 0.0;
  /// Same for the first full-dtau attempt of each step, before any halving.
  double max_raw_imag_energy_increase = 0.0;
  std::uint64_t guarded_steps = 0;   // steps that needed at least one halving
  std::uint64_t rejected_steps = 0;  // steps dropped after max_halvings
};

/**
 * Hybrid real/imaginary-time adaptive loop.
 *
 * Starting from the empty ansatz on |+>^n, each step grows the ansatz until
 * the McLachlan distance is within the cut, takes one Euler step in real
 * time under H_AD(s(t)) and, unless T has been reached, filters with up to
 * k_max imaginary-time steps while Var(H(t)) exceeds eps_var. Energy and
 * variance are recorded after filtering.
 */
HavqdsResult run_havqds(const SkInstance& instance, const RunConfig& config);

/// Same loop with filtering disabled.
HavqdsResult run_avqds_only(const SkInstance& instance, const RunConfig& config);

/**
 * Binary amplitude dump, little-endian:
 *   8 bytes  magic "HAVQDSSV"
 *   uint32   format version (1)
 *   uint32   n_qubits
 *   uint64   dimension (2^n)
 *   dimension x (float64 re, float64 im)
 */
void write_amplitudes(const StateVector& state, const std::filesystem::path& path);
StateVector read_amplitudes(const std::filesystem::path& path);

}  // namespace havqds
