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

#include "havqds/trotter.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "havqds/exact.hpp"
#include "havqds/stats.hpp"

namespace havqds {

std::string to_string(Protocol protocol) {
  return protocol == Protocol::kAdiabatic ? "AD" : "CD";
}

Protocol protocol_from_string(const std::string& name) {
  if (name == "AD" || name == "ad") return Protocol::kAdiabatic;
  if (name == "CD" || name == "cd") return Protocol::kCounterdiabatic;
  throw std::invalid_argument("unknown protocol '" + name + "'");
}

void GateTally::record(const PauliString& generator) {
  cnot_count += cnot_cost(generator);
  const unsigned w = generator.weight();
  if (w == 1) ++single_qubit_rotations;
  if (w == 2) ++two_qubit_rotations;
}

namespace {

struct Rotation {
  PauliString generator;
  double coefficient;  // angle per unit time before the schedule factor
};

}  // namespace

TrotterResult run_trotter(const SkInstance& instance, Protocol protocol, double total_time,
                          const TrotterOptions& options) {
  instance.validate();
  if (!(options.dt > 0.0)) throw std::invalid_argument("run_trotter: dt must be positive");
  if (!(total_time > 0.0)) throw std::invalid_argument("run_trotter: T must be positive");

  const unsigned n = instance.n_qubits;
  bool has_fields = false;
  for (double h : instance.fields) has_fields = has_fields || h != 0.0;

  // Generator lists with the Hamiltonian coefficient each rotation carries.
  std::vector<Rotation> driver, problem, cd;
  for (unsigned i = 0; i < n; ++i) driver.push_back({PauliString::single(n, i, 'X'), -1.0});
  for (unsigned i = 0; i < n; ++i) {
    for (unsigned j = i + 1; j < n; ++j) {
      problem.push_back({PauliString::pair(n, i, 'Z', j, 'Z'), -instance.coupling(i, j)});
    }
  }
  if (has_fields) {
    for (unsigned i = 0; i < n; ++i) {
      problem.push_back({PauliString::single(n, i, 'Z'), -instance.fields[i]});
    }
  }
  if (protocol == Protocol::kCounterdiabatic) {
    if (has_fields) {
      for (unsigned i = 0; i < n; ++i) {
        cd.push_back({PauliString::single(n, i, 'Y'), -instance.fields[i]});
      }
    }
    for (unsigned i = 0; i < n; ++i) {
      for (unsigned j = i + 1; j < n; ++j) {
        const double k = -instance.coupling(i, j);
        cd.push_back({PauliString::pair(n, i, 'Y', j, 'Z'), k});
        cd.push_back({PauliString::pair(n, i, 'Z', j, 'Y'), k});
      }
    }
  }

  const auto steps = static_cast<std::uint64_t>(
      std::max(1.0, std::ceil(total_time / options.dt - 1e-9)));
  const WeightedPauliSum problem_h = build_problem(instance);
  const WeightedPauliSum driver_h = build_driver(n);

  const StateVector initial = StateVector::plus(n);
  Amplitudes psi(initial.amplitudes().begin(), initial.amplitudes().end());
  TrotterResult result;

  auto record = [&](std::uint64_t step, double t, bool with_ratio) {
    const double s = step == steps ? 1.0 : schedule_s(t, total_time);
    const StateVector state(n, psi);
    WeightedPauliSum h(n);
    if (s != 1.0) h.add(driver_h, 1.0 - s);
    if (s != 0.0) h.add(problem_h, s);
    TrotterRecord rec{step, t, s, expectation(h, state),
                      std::numeric_limits<double>::quiet_NaN(), result.tally.cnot_count};
    if (with_ratio) rec.ratio = approximation_ratio(rec.energy, extremal_eigenvalues(h));
    result.records.push_back(rec);
  };

  record(0, 0.0, options.record_ratio);
  for (std::uint64_t k = 0; k < steps; ++k) {
    const double t = static_cast<double>(k) * options.dt;
    const double dt = std::min(options.dt, total_time - t);
    const double s = schedule_s(t, total_time);

    for (const auto& rot : driver) {
      kernels::rotate_inplace(rot.generator, (1.0 - s) * dt * rot.coefficient, psi);
      result.tally.record(rot.generator);
    }
    for (const auto& rot : problem) {
      kernels::rotate_inplace(rot.generator, s * dt * rot.coefficient, psi);
      result.tally.record(rot.generator);
    }
    if (!cd.empty()) {
      const double t_cd = options.cd_midpoint ? std::min(total_time, t + 0.5 * dt) : t;
      const double prefactor = cd_prefactor(instance, t_cd, total_time);
      for (const auto& rot : cd) {
        kernels::rotate_inplace(rot.generator, prefactor * dt * rot.coefficient, psi);
        result.tally.record(rot.generator);
      }
    }
    ++result.tally.steps;
    const bool last = k + 1 == steps;
    record(k + 1, last ? total_time : t + dt, options.record_ratio || last);
  }
  result.state = StateVector(n, std::move(psi));
  result.final_ratio = result.records.back().ratio;
  return result;
}

DilemmaTable dilemma_sweep(const std::vector<SkInstance>& instances,
                           const std::vector<double>& total_times,
                           const std::vector<Protocol>& protocols, double dt) {
  if (instances.empty() || total_times.empty() || protocols.empty()) {
    throw std::invalid_argument("dilemma_sweep: empty grid");
  }
  DilemmaTable table;
  TrotterOptions options;
  options.dt = dt;
  options.record_ratio = false;
  for (Protocol protocol : protocols) {
    for (double total_time : total_times) {
      std::vector<double> ratios;
      std::vector<double> cnots;
      for (const auto& inst : instances) {
        const TrotterResult run = run_trotter(inst, protocol, total_time, options);
        table.rows.push_back({protocol, inst.n_qubits, total_time, inst.seed, run.final_ratio,
                              run.tally.cnot_count});
        ratios.push_back(run.final_ratio);
        cnots.push_back(static_cast<double>(run.tally.cnot_count));
      }
      table.cells.push_back({protocol, instances.front().n_qubits, total_time, ratios.size(),
                             mean(ratios), sample_std(ratios), mean(cnots)});
    }
  }
  return table;
}

}  // namespace havqds
