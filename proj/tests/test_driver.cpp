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

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "havqds/driver.hpp"
#include "havqds/exact.hpp"
#include "havqds/trotter.hpp"

using namespace havqds;
namespace fs = std::filesystem;

namespace {

RunConfig config(double total = 1.0) {
  RunConfig c;
  c.total_time = total;
  return c;
}

fs::path temp_path(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "havqds_driver_tests";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST(Driver, FirstStepIsPureRealTime) {
  const auto r = run_havqds(sample_sk(5, 0), config());
  ASSERT_EQ(r.records.size(), 101u);
  EXPECT_EQ(r.records[0].t, 0.0);
  EXPECT_EQ(r.records[0].ansatz_size, 0u);
  EXPECT_EQ(r.records[1].ansatz_size, 0u);
  EXPECT_EQ(r.records[1].cnot_total, 0u);
  EXPECT_NEAR(r.records[1].distance, 0.0, 1e-7);
  EXPECT_EQ(r.records.back().t, 1.0);
  EXPECT_EQ(r.records.back().s, 1.0);
  EXPECT_EQ(r.records.back().imag_steps, 0);
}

TEST(Driver, RecordInvariants) {
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const auto inst = sample_sk(5, seed);
    const auto cfg = config();
    const auto r = run_havqds(inst, cfg);
    unsigned last_cnot = 0;
    for (const auto& rec : r.records) {
      EXPECT_GE(rec.cnot_total, last_cnot);
      last_cnot = rec.cnot_total;
      EXPECT_GE(rec.ratio, 0.0);
      EXPECT_LE(rec.ratio, 1.0);
      EXPECT_LE(rec.imag_steps, cfg.k_max);
      EXPECT_TRUE(rec.degraded || rec.distance <= cfg.distance_cut) << rec.step;
    }
    EXPECT_EQ(r.records.back().cnot_total, r.ansatz.cnot_total());
    EXPECT_EQ(r.records.back().ansatz_size, r.ansatz.size());
    EXPECT_NEAR(r.records.back().energy, expectation(build_problem(inst), prepare(r.ansatz)), 1e-12);
    EXPECT_EQ(r.final_ratio, r.records.back().ratio);
    EXPECT_NEAR(r.final_ratio, approximation_ratio(build_problem(inst), r.state), 1e-12);
    EXPECT_NEAR(r.final_energy, expectation(build_problem(inst), r.state), 1e-12);
  }
}

TEST(Driver, CnotCountsOnlyGrowWithExpansion) {
  // Generators are only ever appended, so every record's CNOT total is the
  // cost of a prefix of the final ansatz: filtering adds no gates.
  const auto r = run_havqds(sample_sk(6, 1), config());
  EXPECT_GT(r.total_imag_steps, 0u);
  for (const auto& rec : r.records) {
    unsigned prefix = 0;
    for (std::size_t k = 0; k < rec.ansatz_size; ++k) prefix += cnot_cost(r.ansatz.generators[k]);
    EXPECT_EQ(rec.cnot_total, prefix) << rec.step;
  }
}

TEST(Driver, VarianceGate) {
  const auto inst = sample_sk(6, 2);
  auto cfg = config();
  cfg.eps_var = 1e9;
  const auto quiet = run_havqds(inst, cfg);
  EXPECT_EQ(quiet.total_imag_steps, 0u);
  for (const auto& rec : quiet.records) EXPECT_EQ(rec.imag_steps, 0);

  const auto active = run_havqds(inst, config());
  ASSERT_EQ(active.rejected_steps, 0u);
  for (std::size_t k = 1; k + 1 < active.records.size(); ++k) {
    const auto& rec = active.records[k];
    // A block ends early only once the variance is within the gate.
    if (rec.imag_steps < config().k_max) {
      EXPECT_LE(rec.variance, config().eps_var) << rec.step;
    }
  }
}

TEST(Driver, AvqdsOnlyMatchesWhenFilteringNeverTriggers) {
  const auto inst = sample_sk(6, 3);
  auto cfg = config();
  cfg.eps_var = 1e9;
  const auto hybrid = run_havqds(inst, cfg);
  const auto plain = run_avqds_only(inst, cfg);
  EXPECT_EQ(plain.total_imag_steps, 0u);
  ASSERT_EQ(hybrid.records.size(), plain.records.size());
  for (std::size_t k = 0; k < plain.records.size(); ++k) {
    EXPECT_EQ(hybrid.records[k].cnot_total, plain.records[k].cnot_total);
    EXPECT_EQ(hybrid.records[k].energy, plain.records[k].energy);
  }
  const auto plain_default = run_avqds_only(inst, config());
  EXPECT_EQ(plain_default.total_imag_steps, 0u);
}

TEST(Driver, AcceptedImaginaryStepsDescend) {
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const auto r = run_havqds(sample_sk(6, seed), config());
    EXPECT_LE(r.max_imag_energy_increase, 1e-8);
    EXPECT_GE(r.max_raw_imag_energy_increase, r.max_imag_energy_increase);
  }
}

TEST(Driver, BeatsTrotterBaselinesAtShortTime) {
  double hav = 0.0, ad = 0.0, cd = 0.0;
  TrotterOptions quick;
  quick.record_ratio = false;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto inst = sample_sk(6, seed);
    auto cfg = config();
    cfg.record_ratio = false;
    hav += run_havqds(inst, cfg).final_ratio;
    ad += run_trotter(inst, Protocol::kAdiabatic, 1.0, quick).final_ratio;
    cd += run_trotter(inst, Protocol::kCounterdiabatic, 1.0, quick).final_ratio;
  }
  RecordProperty("mean_r_havqds", std::to_string(hav / 10));
  RecordProperty("mean_r_ad", std::to_string(ad / 10));
  RecordProperty("mean_r_cd", std::to_string(cd / 10));
  EXPECT_GT(hav, ad);
  EXPECT_GT(hav, cd);
}

TEST(Driver, BitReproducible) {
  const auto inst = sample_sk(5, 4);
  const auto a = run_havqds(inst, config());
  const auto b = run_havqds(inst, config());
  ASSERT_EQ(a.records.size(), b.records.size());
  for (std::size_t k = 0; k < a.records.size(); ++k) {
    EXPECT_EQ(a.records[k].energy, b.records[k].energy);
    EXPECT_EQ(a.records[k].variance, b.records[k].variance);
    EXPECT_EQ(a.records[k].ratio, b.records[k].ratio);
    EXPECT_EQ(a.records[k].cnot_total, b.records[k].cnot_total);
  }
  EXPECT_EQ(a.ansatz.angles, b.ansatz.angles);
  EXPECT_EQ(a.ansatz.generators, b.ansatz.generators);
}

TEST(Driver, RatioRecordingCanBeSkipped) {
  auto cfg = config();
  cfg.record_ratio = false;
  const auto r = run_havqds(sample_sk(4, 0), cfg);
  EXPECT_TRUE(std::isnan(r.records[10].ratio));
  EXPECT_FALSE(std::isnan(r.records.back().ratio));
}

TEST(Driver, ConfigValidation) {
  const auto inst = sample_sk(4, 0);
  auto bad = [&](auto mutate) {
    auto c = config();
    mutate(c);
    EXPECT_THROW(run_havqds(inst, c), std::invalid_argument);
  };
  bad([](RunConfig& c) { c.total_time = 0.0; });
  bad([](RunConfig& c) { c.dt = -0.01; });
  bad([](RunConfig& c) { c.dtau = 0.0; });
  bad([](RunConfig& c) { c.distance_cut = 0.0; });
  bad([](RunConfig& c) { c.eps_var = std::nan(""); });
  bad([](RunConfig& c) { c.k_max = 0; });
  bad([](RunConfig& c) { c.lambda = -1.0; });
  bad([](RunConfig& c) { c.max_ansatz = 0; });
}

TEST(Amplitudes, DumpRoundTrip) {
  const auto r = run_havqds(sample_sk(4, 5), config());
  const auto path = temp_path("state.bin");
  write_amplitudes(r.state, path);
  EXPECT_EQ(fs::file_size(path), 24u + 16u * 16u);
  const auto back = read_amplitudes(path);
  EXPECT_EQ(back.n_qubits(), 4u);
  for (std::size_t i = 0; i < back.dimension(); ++i) EXPECT_EQ(back[i], r.state[i]);

  {
    std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
    f.write("XX", 2);
  }
  EXPECT_THROW(read_amplitudes(path), std::runtime_error);
  fs::resize_file(path, 30);
  EXPECT_THROW(read_amplitudes(path), std::runtime_error);
  EXPECT_THROW(read_amplitudes(temp_path("missing.bin")), std::runtime_error);
}
