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
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "havqds/driver.hpp"
#include "havqds/trotter.hpp"

namespace havqds {

std::string version();

// Exit statuses shared by the CLI.
enum class ExitStatus : int {
  kOk = 0,
  kConfigError = 2,
  kPartialFailure = 3,
  kOutputError = 4,
  kEmptyInput = 5,
};

struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct OutputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct EmptyInputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// "%.17g" for finite values, "nan" / "inf" / "-inf" otherwise.
std::string format_number(double value);
/// Shortest "%g"-style tag used in file names ("1", "0.5", "10").
std::string format_tag(double value);

/// Parses "8", "6,8,10" or "6..14" / "6..14:2" (inclusive) into integers.
std::vector<unsigned> parse_int_list(const std::string& text);
/// Parses "1", "1,5" or "2..10:2" (inclusive) into positive reals.
std::vector<double> parse_real_list(const std::string& text);

/// Default output root: $HAVQDS_OUT when set, else "results".
std::filesystem::path default_output_root();

/// Writes the whole file to a sibling temporary and renames it into place.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

/// Runs job(i) for i in [0, count) on up to `parallelism` threads. Job
/// exceptions are captured per index and returned as messages ("" on success).
std::vector<std::string> run_parallel(std::size_t count, unsigned parallelism,
                                      const std::function<void(std::size_t)>& job);

struct SweepSummary {
  std::string experiment;
  std::filesystem::path manifest;
  std::size_t runs = 0;
  std::size_t failures = 0;
  double wall_seconds = 0.0;
};

// ---------------------------------------------------------------------------
// Experiments. Each writes its CSVs plus manifest_<experiment>.json into
// out_dir; file names depend only on (experiment, n, T, seed).

struct InstanceSpec {
  std::vector<unsigned> n_values;
  std::vector<std::uint64_t> seeds;
};
SweepSummary run_instance_export(const InstanceSpec& spec, const std::filesystem::path& out_dir);

struct TrotterSpec {
  std::vector<unsigned> n_values;
  std::vector<double> total_times;
  std::vector<Protocol> protocols;
  std::vector<std::uint64_t> seeds;
  double dt = 0.01;
  bool trajectories = true;  // per-run trajectory CSVs with r(s) at every step
  unsigned parallelism = 1;
};
SweepSummary run_trotter_sweep(const TrotterSpec& spec, const std::filesystem::path& out_dir);

enum class Variant { kHavqds, kAvqdsOnly };
std::string to_string(Variant variant);
Variant variant_from_string(const std::string& name);

struct HavqdsSpec {
  std::vector<unsigned> n_values;
  std::vector<double> total_times;
  std::vector<Variant> variants;
  std::vector<std::uint64_t> seeds;
  RunConfig config;             // total_time is taken from total_times
  bool dump_state = false;      // binary amplitude dump per run
  unsigned parallelism = 1;
};
SweepSummary run_havqds_sweep(const HavqdsSpec& spec, const std::filesystem::path& out_dir);

struct SpectrumSpec {
  std::vector<unsigned> n_values;
  std::vector<std::uint64_t> seeds;
  int grid = 200;
  int levels = 5;
  unsigned parallelism = 1;
};
SweepSummary run_spectrum(const SpectrumSpec& spec, const std::filesystem::path& out_dir);

/// Aggregates trotter_dilemma.csv and havqds_summary.csv found in in_dir
/// into report.csv (mean and sample std per method, n, T). Throws
/// EmptyInputError, writing nothing, when no summary rows exist.
std::filesystem::path run_report(const std::filesystem::path& in_dir,
                                 const std::filesystem::path& out_dir);

/// Re-executes the experiment recorded in a manifest into out_dir.
SweepSummary replay_manifest(const std::filesystem::path& manifest,
                             const std::filesystem::path& out_dir);

}  // namespace havqds
