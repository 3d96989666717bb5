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

#include "havqds/driver.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "havqds/exact.hpp"

namespace havqds {

void RunConfig::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw std::invalid_argument(std::string("RunConfig: ") + name + " must be positive");
    }
  };
  positive(total_time, "T");
  positive(dt, "dt");
  positive(dtau, "dtau");
  positive(distance_cut, "delta_cut");
  positive(eps_var, "eps_var");
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw std::invalid_argument("RunConfig: lambda must be non-negative");
  }
  if (k_max < 1) throw std::invalid_argument("RunConfig: k_max must be at least 1");
  if (max_ansatz == 0) throw std::invalid_argument("RunConfig: ansatz cap must be positive");
  if (!(descent_tolerance >= 0.0)) {
    throw std::invalid_argument("RunConfig: descent tolerance must be non-negative");
  }
  if (max_halvings < 0) throw std::invalid_argument("RunConfig: max_halvings must be >= 0");
}

namespace {

struct Evaluation {
  double energy;
  double variance;
};

Evaluation evaluate(const Ansatz& ansatz, const WeightedPauliSum& h) {
  const StateVector psi = prepare(ansatz);
  const double e = expectation(h, psi);
  const double var = variance(h, psi);
  if (!std::isfinite(e) || !std::isfinite(var)) {
    throw std::runtime_error("havqds: non-finite energy");
  }
  return {e, var};
}

HavqdsResult run_loop(const SkInstance& instance, const RunConfig& config, int k_max) {
  instance.validate();
  const unsigned n = instance.n_qubits;
  const double total = config.total_time;
  const OperatorPool pool = build_pool(n);
  const auto steps = static_cast<std::uint64_t>(
      std::max(1.0, std::ceil(total / config.dt - 1e-9)));

  ExpansionOptions expansion;
  expansion.distance_cut = config.distance_cut;
  expansion.max_size = config.max_ansatz;
  expansion.lambda = config.lambda;

  HavqdsResult result;
  result.max_imag_energy_increase = -std::numeric_limits<double>::infinity();
  result.max_raw_imag_energy_increase = -std::numeric_limits<double>::infinity();
  Ansatz ansatz(n);

  auto ratio_of = [&](double energy, const WeightedPauliSum& h, bool wanted) {
    if (!wanted) return std::numeric_limits<double>::quiet_NaN();
    return approximation_ratio(energy, extremal_eigenvalues(h));
  };

  {
    const WeightedPauliSum h0 = build_h_ad(instance, 0.0);
    const Evaluation ev = evaluate(ansatz, h0);
    result.records.push_back({0, 0.0, 0.0, ev.energy, ev.variance,
                              ratio_of(ev.energy, h0, config.record_ratio), 0, 0, 0, 0.0, false});
  }

  for (std::uint64_t k = 0; k < steps; ++k) {
    const double t = static_cast<double>(k) * config.dt;
    const double dt = std::min(config.dt, total - t);
    const WeightedPauliSum h = build_h_ad(instance, schedule_s(t, total));

    ExpansionResult grown = adaptive_expand(ansatz, h, pool, expansion);
    const double distance = std::sqrt(std::max(0.0, grown.minimum.distance_sq));
    result.degraded = result.degraded || grown.degraded;
    ansatz = real_time_step(grown.ansatz, grown.geometry, dt, config.lambda);

    const bool last = k + 1 == steps;
    const double t_next = last ? total : t + dt;
    const double s_next = last ? 1.0 : schedule_s(t_next, total);
    const WeightedPauliSum h_next = build_h_ad(instance, s_next);
    Evaluation ev = evaluate(ansatz, h_next);

    int taken = 0;
    if (!last) {
      while (ev.variance > config.eps_var && taken < k_max) {
        const GeometrySnapshot g = compute_geometry(ansatz, h_next);
        double dtau = config.dtau;
        Ansatz trial = imaginary_time_step(ansatz, g, dtau, config.lambda);
        Evaluation after = evaluate(trial, h_next);
        result.max_raw_imag_energy_increase =
            std::max(result.max_raw_imag_energy_increase, after.energy - g.energy);
        if (config.descent_guard && after.energy - g.energy > config.descent_tolerance) {
          ++result.guarded_steps;
          int halvings = 0;
          while (after.energy - g.energy > config.descent_tolerance &&
                 halvings < config.max_halvings) {
            dtau *= 0.5;
            ++halvings;
            trial = imaginary_time_step(ansatz, g, dtau, config.lambda);
            after = evaluate(trial, h_next);
          }
          if (after.energy - g.energy > config.descent_tolerance) {
            ++result.rejected_steps;
            break;
          }
        }
        result.max_imag_energy_increase =
            std::max(result.max_imag_energy_increase, after.energy - g.energy);
        ansatz = std::move(trial);
        ev = after;
        ++taken;
      }
    }
    result.total_imag_steps += static_cast<std::uint64_t>(taken);

    result.records.push_back({k + 1, t_next, s_next, ev.energy, ev.variance,
                              ratio_of(ev.energy, h_next, config.record_ratio || last),
                              ansatz.size(), ansatz.cnot_total(), taken, distance,
                              grown.degraded});
  }

  result.final_energy = result.records.back().energy;
  result.final_ratio = result.records.back().ratio;
  result.state = prepare(ansatz);
  result.ansatz = std::move(ansatz);
  return result;
}

}  // namespace

HavqdsResult run_havqds(const SkInstance& instance, const RunConfig& config) {
  config.validate();
  return run_loop(instance, config, config.k_max);
}

HavqdsResult run_avqds_only(const SkInstance& instance, const RunConfig& config) {
  config.validate();
  return run_loop(instance, config, 0);
}

namespace {

constexpr char kMagic[8] = {'H', 'A', 'V', 'Q', 'D', 'S', 'S', 'V'};
constexpr std::uint32_t kDumpVersion = 1;

static_assert(std::endian::native == std::endian::little,
              "amplitude dumps assume a little-endian host");

template <typename T>
void put(std::ofstream& out, T value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T get(std::ifstream& in) {
  T value{};
  in.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!in) throw std::runtime_error("read_amplitudes: truncated file");
  return value;
}

}  // namespace

void write_amplitudes(const StateVector& state, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("write_amplitudes: cannot open " + path.string());
  out.write(kMagic, sizeof(kMagic));
  put<std::uint32_t>(out, kDumpVersion);
  put<std::uint32_t>(out, state.n_qubits());
  put<std::uint64_t>(out, state.amplitudes().size());
  for (const Complex& a : state.amplitudes()) {
    put<double>(out, a.real());
    put<double>(out, a.imag());
  }
  if (!out) throw std::runtime_error("write_amplitudes: write failed for " + path.string());
}

StateVector read_amplitudes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("read_amplitudes: cannot open " + path.string());
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw std::runtime_error("read_amplitudes: bad magic");
  }
  if (get<std::uint32_t>(in) != kDumpVersion) {
    throw std::runtime_error("read_amplitudes: unsupported version");
  }
  const auto n = get<std::uint32_t>(in);
  const auto dim = get<std::uint64_t>(in);
  if (n > 30 || dim != (std::uint64_t{1} << n)) {
    throw std::runtime_error("read_amplitudes: inconsistent header");
  }
  Amplitudes amps(dim);
  for (auto& a : amps) {
    const double re = get<double>(in);
    const double im = get<double>(in);
    a = Complex(re, im);
  }
  return StateVector(n, std::move(amps));
}

}  // namespace havqds
