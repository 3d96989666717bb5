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
#include <string>
#include <vector>

#include "havqds/models.hpp"
#include "havqds/pauli.hpp"

namespace havqds {

enum class Protocol { kAdiabatic, kCounterdiabatic };

std::string to_string(Protocol protocol);  // "AD" / "CD"
Protocol protocol_from_string(const std::string& name);

struct GateTally {
  std::uint64_t cnot_count = 0;
  std::uint64_t single_qubit_rotations = 0;
  std::uint64_t two_qubit_rotations = 0;
  std::uint64_t steps = 0;

  void record(const PauliString& generator);
};

struct TrotterRecord {
  std::uint64_t step = 0;
  double t = 0.0;
  double s = 0.0;
  double energy = 0.0;  // <H_AD(s)>
  double ratio = 0.0;   // r(s); NaN when ratios are not recorded
  std::uint64_t cnot_cumulative = 0;
};

struct TrotterOptions {
  double dt = 0.01;
  /// Evaluate the CD coefficients at t_k + dt/2 instead of t_k.
  bool cd_midpoint = false;
  /// Compute r(s) at every step (one extremal eigensolve per step). The
  /// final record always carries r(1).
  bool record_ratio = true;
};

struct TrotterResult {
  StateVector state;
  GateTally tally;
  std::vector<TrotterRecord> records;  // step 0 is the initial |+>^n
  double final_ratio = 0.0;
};

/**
 * First-order Trotterized anneal from |+>^n.
 *
 * Step k starts at t_k = k dt (the last step is shortened to end at T) and
 * applies, in order: driver rotations exp(-i (1-s) dt (-X_i)), problem
 * rotations exp(-i s dt (-J_ij Z_i Z_j)) (and field Z_i rotations when
 * fields are nonzero), then for CD the first-order counterdiabatic rotations.
 * Every rotation of the circuit is tallied even when its angle is zero.
 */
TrotterResult run_trotter(const SkInstance& instance, Protocol protocol, double total_time,
                          const TrotterOptions& options = {});

struct DilemmaRow {
  Protocol protocol;
  unsigned n_qubits;
  double total_time;
  std::uint64_t seed;
  double r_final;
  std::uint64_t cnot_total;
};

struct DilemmaCell {
  Protocol protocol;
  unsigned n_qubits;
  double total_time;
  std::size_t samples;
  double mean_r;
  double std_r;  // sample standard deviation, 0 for one sample
  double mean_cnot;
};

struct DilemmaTable {
  std::vector<DilemmaRow> rows;
  std::vector<DilemmaCell> cells;
};

/// Final r for every (protocol, T, instance); cells aggregate over instances.
DilemmaTable dilemma_sweep(const std::vector<SkInstance>& instances,
                           const std::vector<double>& total_times,
                           const std::vector<Protocol>& protocols, double dt = 0.01);

}  // namespace havqds
