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
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "havqds/experiment.hpp"
#include "json.hpp"

using namespace havqds;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "havqds_experiment_tests" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Every output file except manifests, which carry wall-clock times.
std::map<std::string, std::string> outputs(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    const auto name = e.path().filename().string();
    if (name.rfind("manifest_", 0) == 0) continue;
    files[name] = slurp(e.path());
  }
  return files;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(HAVQDS_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

HavqdsSpec small_havqds() {
  HavqdsSpec spec;
  spec.n_values = {3, 4};
  spec.total_times = {0.5};
  spec.variants = {Variant::kHavqds, Variant::kAvqdsOnly};
  spec.seeds = {0, 1};
  return spec;
}

}  // namespace

TEST(Parsing, Lists) {
  EXPECT_EQ(parse_int_list("8"), std::vector<unsigned>({8}));
  EXPECT_EQ(parse_int_list("6,8,10"), std::vector<unsigned>({6, 8, 10}));
  EXPECT_EQ(parse_int_list("6..14"), std::vector<unsigned>({6, 7, 8, 9, 10, 11, 12, 13, 14}));
  EXPECT_EQ(parse_int_list("6..14:2"), std::vector<unsigned>({6, 8, 10, 12, 14}));
  EXPECT_EQ(parse_real_list("1,5"), std::vector<double>({1.0, 5.0}));
  EXPECT_EQ(parse_real_list("2..10:2"), std::vector<double>({2, 4, 6, 8, 10}));
  EXPECT_EQ(parse_real_list("0.5"), std::vector<double>({0.5}));
  for (const char* bad : {"", "x", "8..6", "6..8:0", "-1", "3.5"}) {
    EXPECT_THROW(parse_int_list(bad), ConfigError) << bad;
  }
  for (const char* bad : {"", "0", "-1", "a", "1..2:0"}) {
    EXPECT_THROW(parse_real_list(bad), ConfigError) << bad;
  }
}

TEST(Formatting, NumbersAndTags) {
  EXPECT_EQ(format_number(0.1), "0.10000000000000001");
  EXPECT_EQ(format_number(std::nan("")), "nan");
  EXPECT_EQ(format_number(-std::numeric_limits<double>::infinity()), "-inf");
  EXPECT_EQ(format_tag(1.0), "1");
  EXPECT_EQ(format_tag(0.5), "0.5");
  EXPECT_EQ(format_tag(10.0), "10");
}

TEST(Parallel, CapturesErrorsPerJob) {
  std::vector<int> hits(20, 0);
  const auto errors = run_parallel(20, 4, [&](std::size_t i) {
    hits[i] += 1;
    if (i % 7 == 3) throw std::runtime_error("job " + std::to_string(i));
  });
  for (int h : hits) EXPECT_EQ(h, 1);
  for (std::size_t i = 0; i < 20; ++i) EXPECT_EQ(errors[i].empty(), i % 7 != 3) << i;
}

TEST(Sweeps, HavqdsParallelismDoesNotChangeOutputs) {
  auto spec = small_havqds();
  const auto serial = fresh_dir("par1");
  const auto parallel = fresh_dir("par3");
  spec.parallelism = 1;
  const auto s1 = run_havqds_sweep(spec, serial);
  spec.parallelism = 3;
  const auto s3 = run_havqds_sweep(spec, parallel);
  EXPECT_EQ(s1.runs, 8u);
  EXPECT_EQ(s1.failures, 0u);
  EXPECT_EQ(s3.failures, 0u);
  const auto a = outputs(serial), b = outputs(parallel);
  EXPECT_EQ(a, b);
  EXPECT_TRUE(a.count("havqds_summary.csv"));
  EXPECT_TRUE(a.count("havqds_havqds_n3_T0.5_seed0.csv"));
  EXPECT_TRUE(a.count("havqds_avqds_n4_T0.5_seed1_ansatz.json"));
}

TEST(Sweeps, TrotterParallelismAndSchema) {
  TrotterSpec spec;
  spec.n_values = {3};
  spec.total_times = {0.5, 1.0};
  spec.protocols = {Protocol::kAdiabatic, Protocol::kCounterdiabatic};
  spec.seeds = {0, 1, 2};
  const auto serial = fresh_dir("trot1");
  const auto parallel = fresh_dir("trot4");
  run_trotter_sweep(spec, serial);
  spec.parallelism = 4;
  run_trotter_sweep(spec, parallel);
  const auto a = outputs(serial);
  EXPECT_EQ(a, outputs(parallel));
  std::istringstream table(a.at("trotter_dilemma.csv"));
  std::string header;
  std::getline(table, header);
  EXPECT_EQ(header, "protocol,n,T,seed,r_final,cnot_total");
  int rows = 0;
  for (std::string line; std::getline(table, line);) ++rows;
  EXPECT_EQ(rows, 12);
  std::istringstream traj(a.at("trotter_CD_n3_T1_seed2.csv"));
  std::getline(traj, header);
  EXPECT_EQ(header, "protocol,n,T,dt,seed,step,t,s,energy,ratio,cnot_cumulative");
}

TEST(Sweeps, GridOfOneMatchesDirectRun) {
  const auto dir = fresh_dir("single");
  HavqdsSpec spec;
  spec.n_values = {4};
  spec.total_times = {0.5};
  spec.variants = {Variant::kHavqds};
  spec.seeds = {3};
  run_havqds_sweep(spec, dir);
  auto cfg = spec.config;
  cfg.total_time = 0.5;
  const auto direct = run_havqds(sample_sk(4, 3), cfg);
  std::istringstream csv(slurp(dir / "havqds_havqds_n4_T0.5_seed3.csv"));
  std::string header, line, last;
  std::getline(csv, header);
  int rows = 0;
  while (std::getline(csv, line)) {
    last = line;
    ++rows;
  }
  EXPECT_EQ(rows, static_cast<int>(direct.records.size()));
  const auto& rec = direct.records.back();
  std::ostringstream expected;
  expected << "havqds,4," << format_tag(0.5) << ",3," << rec.step << ',' << format_number(rec.t) << ','
           << format_number(rec.s) << ',' << format_number(rec.energy) << ','
           << format_number(rec.variance) << ',' << format_number(rec.ratio) << ','
           << rec.ansatz_size << ',' << rec.cnot_total << ',' << rec.imag_steps << ','
           << format_number(rec.distance) << ',' << (rec.degraded ? 1 : 0);
  EXPECT_EQ(last, expected.str());
}

TEST(Sweeps, ManifestReplayIsByteIdentical) {
  const auto first = fresh_dir("replay_a");
  const auto second = fresh_dir("replay_b");
  auto spec = small_havqds();
  spec.dump_state = true;
  const auto summary = run_havqds_sweep(spec, first);
  const auto manifest = nlohmann::json::parse(slurp(summary.manifest));
  EXPECT_EQ(manifest.at("experiment"), "havqds");
  EXPECT_EQ(manifest.at("version"), version());
  EXPECT_EQ(manifest.at("runs").size(), 8u);
  EXPECT_TRUE(manifest.contains("wall_time_s"));
  replay_manifest(summary.manifest, second);
  EXPECT_EQ(outputs(first), outputs(second));

  const auto spec_dir = fresh_dir("spectrum_a");
  SpectrumSpec sp;
  sp.n_values = {3};
  sp.seeds = {0, 1};
  sp.grid = 5;
  const auto ss = run_spectrum(sp, spec_dir);
  const auto spec_replay = fresh_dir("spectrum_b");
  replay_manifest(ss.manifest, spec_replay);
  EXPECT_EQ(outputs(spec_dir), outputs(spec_replay));
}

TEST(Sweeps, SpectrumSchema) {
  const auto dir = fresh_dir("spectrum");
  SpectrumSpec sp;
  sp.n_values = {3};
  sp.seeds = {0};
  sp.grid = 3;
  run_spectrum(sp, dir);
  std::istringstream csv(slurp(dir / "spectrum_n3.csv"));
  std::string header;
  std::getline(csv, header);
  EXPECT_EQ(header, "seed,s,E0,E1,E2,E3,E4");
  int rows = 0;
  for (std::string line; std::getline(csv, line);) ++rows;
  EXPECT_EQ(rows, 3);
  sp.levels = 9;
  EXPECT_THROW(run_spectrum(sp, dir), ConfigError);
}

TEST(Report, AggregatesAndRejectsEmptyInput) {
  const auto empty = fresh_dir("report_empty");
  const auto out = fresh_dir("report_empty_out");
  EXPECT_THROW(run_report(empty, out), EmptyInputError);
  EXPECT_TRUE(fs::is_empty(out));

  const auto dir = fresh_dir("report");
  run_havqds_sweep(small_havqds(), dir);
  const auto path = run_report(dir, dir);
  std::istringstream csv(slurp(path));
  std::string header;
  std::getline(csv, header);
  EXPECT_EQ(header, "experiment,method,n,T,count,r_mean,r_std,cnot_mean,cnot_std");
  int rows = 0;
  for (std::string line; std::getline(csv, line);) ++rows;
  EXPECT_EQ(rows, 4);  // 2 variants x 2 sizes
}

TEST(Validation, BadSpecsAreConfigErrors) {
  const auto dir = fresh_dir("invalid");
  auto spec = small_havqds();
  spec.n_values = {1};
  EXPECT_THROW(run_havqds_sweep(spec, dir), ConfigError);
  spec = small_havqds();
  spec.config.dt = 0.0;
  EXPECT_THROW(run_havqds_sweep(spec, dir), ConfigError);
  EXPECT_THROW(variant_from_string("qaoa"), ConfigError);
}

TEST(Cli, ExitCodes) {
  const auto dir = fresh_dir("cli");
  const std::string out = " --out " + dir.string();
  EXPECT_EQ(run_cli("instance --n 3 --seeds 2" + out), 0);
  EXPECT_TRUE(fs::exists(dir / "instance_n3_seed1.json"));
  EXPECT_EQ(run_cli("trotter --n 3 --T 0.2 --seeds 1" + out), 0);
  EXPECT_EQ(run_cli("havqds --n 3 --T 0.2 --seeds 1 --variant havqds,avqds" + out), 0);
  EXPECT_EQ(run_cli("spectrum --n 3 --seeds 1 --grid 4" + out), 0);
  EXPECT_EQ(run_cli("report" + out), 0);
  EXPECT_TRUE(fs::exists(dir / "report.csv"));
  EXPECT_EQ(run_cli("replay --manifest " + (dir / "manifest_trotter.json").string() + " --out " +
                    fresh_dir("cli_replay").string()),
            0);

  EXPECT_EQ(run_cli("havqds --n 1" + out), 2);
  EXPECT_EQ(run_cli("havqds --n 3 --T 0" + out), 2);
  EXPECT_EQ(run_cli("havqds --n 3 --dtau -1" + out), 2);
  EXPECT_EQ(run_cli("trotter --n 3 --protocol XY" + out), 2);
  EXPECT_EQ(run_cli("havqds --n 3 --variant nope" + out), 2);
  EXPECT_EQ(run_cli("frobnicate"), 2);
  EXPECT_EQ(run_cli("havqds --n 3 --bogus-flag" + out), 2);
  EXPECT_EQ(run_cli("report --in " + fresh_dir("cli_empty").string() + " --out " +
                    fresh_dir("cli_empty_out").string()),
            5);
  EXPECT_TRUE(fs::is_empty(fresh_dir("cli_empty_out")));
  std::ofstream(dir / "blocker") << "x";
  EXPECT_EQ(run_cli("instance --n 3 --seeds 1 --out " + (dir / "blocker" / "sub").string()), 4);
}

TEST(Cli, OutputRootFromEnvironment) {
  const auto dir = fresh_dir("cli_env");
  const std::string cmd = "HAVQDS_OUT=" + dir.string() + " " + HAVQDS_CLI_PATH +
                          " instance --n 2 --seeds 1 >/dev/null 2>&1";
  EXPECT_EQ(std::system(cmd.c_str()), 0);
  EXPECT_TRUE(fs::exists(dir / "instance_n2_seed0.json"));
}
