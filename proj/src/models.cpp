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

#include "havqds/models.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace havqds {

using nlohmann::json;

std::uint64_t SplitMix64::next() {
  state_ += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double SplitMix64::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

double SplitMix64::uniform_positive() {
  return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53;
}

double SplitMix64::gaussian() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = uniform_positive();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double phi = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(phi);
  has_spare_ = true;
  return r * std::cos(phi);
}

// ---------------------------------------------------------------------------

std::size_t SkInstance::pair_index(unsigned n, unsigned i, unsigned j) {
  if (i > j) std::swap(i, j);
  if (i == j || j >= n) throw std::invalid_argument("SkInstance: bad pair index");
  // Pairs before row i: sum_{r<i} (n - 1 - r).
  return static_cast<std::size_t>(i) * (2 * n - i - 1) / 2 + (j - i - 1);
}

double SkInstance::coupling(unsigned i, unsigned j) const {
  return couplings[pair_index(n_qubits, i, j)];
}

void SkInstance::validate() const {
  if (n_qubits < 2) throw std::invalid_argument("SkInstance: need at least 2 qubits");
  if (couplings.size() != static_cast<std::size_t>(n_qubits) * (n_qubits - 1) / 2) {
    throw std::invalid_argument("SkInstance: coupling count must be n(n-1)/2");
  }
  if (fields.size() != n_qubits) {
    throw std::invalid_argument("SkInstance: field count must be n");
  }
}

SkInstance sample_sk(unsigned n_qubits, std::uint64_t seed) {
  if (n_qubits < 2) throw std::invalid_argument("sample_sk: n must be at least 2");
  SkInstance inst;
  inst.n_qubits = n_qubits;
  inst.seed = seed;
  inst.fields.assign(n_qubits, 0.0);
  const double sigma = std::sqrt(1.0 / n_qubits);
  SplitMix64 rng(seed);
  const std::size_t pairs = static_cast<std::size_t>(n_qubits) * (n_qubits - 1) / 2;
  inst.couplings.reserve(pairs);
  for (std::size_t k = 0; k < pairs; ++k) inst.couplings.push_back(sigma * rng.gaussian());
  return inst;
}

std::string instance_to_json(const SkInstance& instance) {
  instance.validate();
  json j;
  j["n"] = instance.n_qubits;
  j["seed"] = instance.seed;
  j["couplings"] = instance.couplings;
  j["fields"] = instance.fields;
  return j.dump(2);
}

SkInstance instance_from_json(std::string_view text) {
  SkInstance inst;
  try {
    const json j = json::parse(text);
    inst.n_qubits = j.at("n").get<unsigned>();
    inst.seed = j.at("seed").get<std::uint64_t>();
    inst.couplings = j.at("couplings").get<std::vector<double>>();
    inst.fields = j.value("fields", std::vector<double>(inst.n_qubits, 0.0));
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("instance JSON: ") + e.what());
  }
  inst.validate();
  return inst;
}

void save_instance(const SkInstance& instance, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << instance_to_json(instance) << '\n';
}

SkInstance load_instance(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return instance_from_json(buffer.str());
}

// ---------------------------------------------------------------------------

namespace {

void check_time(double t, double total_time) {
  if (!(total_time > 0.0)) throw std::invalid_argument("schedule: total time must be positive");
  if (!(t >= 0.0 && t <= total_time)) throw std::invalid_argument("schedule: t outside [0, T]");
}

void check_s(double s) {
  if (!(s >= 0.0 && s <= 1.0)) throw std::invalid_argument("schedule parameter s outside [0, 1]");
}

}  // namespace

double schedule_s(double t, double total_time) {
  check_time(t, total_time);
  const double v = std::sin(std::numbers::pi * t / (2.0 * total_time));
  return v * v;
}

double schedule_sdot(double t, double total_time) {
  check_time(t, total_time);
  if (t == 0.0 || t == total_time) return 0.0;
  return std::numbers::pi / (2.0 * total_time) * std::sin(std::numbers::pi * t / total_time);
}

WeightedPauliSum build_driver(unsigned n_qubits) {
  WeightedPauliSum h(n_qubits);
  for (unsigned i = 0; i < n_qubits; ++i) h.add(-1.0, PauliString::single(n_qubits, i, 'X'));
  return h;
}

WeightedPauliSum build_problem(const SkInstance& instance) {
  instance.validate();
  const unsigned n = instance.n_qubits;
  WeightedPauliSum h(n);
  for (unsigned i = 0; i < n; ++i) {
    for (unsigned j = i + 1; j < n; ++j) {
      h.add(-instance.coupling(i, j), PauliString::pair(n, i, 'Z', j, 'Z'));
    }
  }
  for (unsigned i = 0; i < n; ++i) {
    if (instance.fields[i] != 0.0) h.add(-instance.fields[i], PauliString::single(n, i, 'Z'));
  }
  return h;
}

WeightedPauliSum build_h_ad(const SkInstance& instance, double s) {
  check_s(s);
  WeightedPauliSum h(instance.n_qubits);
  if (s != 1.0) h.add(build_driver(instance.n_qubits), 1.0 - s);
  if (s != 0.0) h.add(build_problem(instance), s);
  return h;
}

double cd_r(const SkInstance& instance, double s) {
  check_s(s);
  instance.validate();
  const unsigned n = instance.n_qubits;
  double h2 = 0.0, h4 = 0.0, j2 = 0.0, j4 = 0.0, hj = 0.0;
  for (double h : instance.fields) {
    h2 += h * h;
    h4 += h * h * h * h;
  }
  for (double j : instance.couplings) {
    j2 += j * j;
    j4 += j * j * j * j;
  }
  // Field-coupling cross term: sum_i sum_{j != i} h_i^2 J_ij^2.
  for (unsigned i = 0; i < n; ++i) {
    for (unsigned j = 0; j < n; ++j) {
      if (i != j) {
        const double c = instance.coupling(i, j);
        hj += instance.fields[i] * instance.fields[i] * c * c;
      }
    }
  }
  // sum_{i<j} sum_{k<l} J_ij^2 J_kl^2 runs over all ordered pairs of pairs.
  const double jj = j2 * j2;
  return (1.0 - 2.0 * s) * (h2 + 8.0 * j2) +
         s * s * (h2 + h4 + 8.0 * j2 + 2.0 * j4 + 6.0 * hj + 6.0 * jj);
}

CdCoefficient cd_coefficient(const SkInstance& instance, double s) {
  double h2 = 0.0, j2 = 0.0;
  for (double h : instance.fields) h2 += h * h;
  for (double j : instance.couplings) j2 += j * j;

  CdCoefficient out;
  out.r = cd_r(instance, s);
  const double numerator = h2 + 2.0 * j2;
  if (numerator == 0.0) return out;

  const double floor = 1e-9 * (h2 + 8.0 * j2);
  double r = out.r;
  if (std::abs(r) < floor) {
    r = r < 0.0 ? -floor : floor;
    out.floored = true;
  }
  out.alpha1 = -0.25 * numerator / r;
  return out;
}

double cd_alpha1(const SkInstance& instance, double s) {
  return cd_coefficient(instance, s).alpha1;
}

double cd_prefactor(const SkInstance& instance, double t, double total_time) {
  const double sdot = schedule_sdot(t, total_time);
  if (sdot == 0.0) return 0.0;
  return -2.0 * sdot * cd_alpha1(instance, schedule_s(t, total_time));
}

WeightedPauliSum build_h_cd1(const SkInstance& instance, double t, double total_time) {
  instance.validate();
  const unsigned n = instance.n_qubits;
  WeightedPauliSum h(n);
  const double prefactor = cd_prefactor(instance, t, total_time);
  if (prefactor == 0.0) return h;
  for (unsigned i = 0; i < n; ++i) {
    const double g = -instance.fields[i];
    if (g != 0.0) h.add(prefactor * g, PauliString::single(n, i, 'Y'));
  }
  for (unsigned i = 0; i < n; ++i) {
    for (unsigned j = i + 1; j < n; ++j) {
      const double k = -instance.coupling(i, j);
      h.add(prefactor * k, PauliString::pair(n, i, 'Y', j, 'Z'));
      h.add(prefactor * k, PauliString::pair(n, i, 'Z', j, 'Y'));
    }
  }
  return h;
}

OperatorPool build_pool(unsigned n_qubits) {
  if (n_qubits < 2) throw std::invalid_argument("build_pool: n must be at least 2");
  OperatorPool pool;
  pool.reserve(2 * n_qubits + 3 * n_qubits * (n_qubits - 1) / 2);
  for (unsigned i = 0; i < n_qubits; ++i) {
    pool.push_back(PauliString::single(n_qubits, i, 'X'));
    pool.push_back(PauliString::single(n_qubits, i, 'Y'));
  }
  for (unsigned i = 0; i < n_qubits; ++i) {
    for (unsigned j = i + 1; j < n_qubits; ++j) {
      pool.push_back(PauliString::pair(n_qubits, i, 'Z', j, 'Z'));
      pool.push_back(PauliString::pair(n_qubits, i, 'Z', j, 'Y'));
      pool.push_back(PauliString::pair(n_qubits, i, 'Y', j, 'Z'));
    }
  }
  return pool;
}

}  // namespace havqds
