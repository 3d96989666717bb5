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

// Command-line front end for the benchmark sweeps.

#include <cstdio>
#include <iostream>
#include <numeric>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "havqds/experiment.hpp"

namespace {

using havqds::ExitStatus;

int code(ExitStatus s) { return static_cast<int>(s); }

std::vector<std::uint64_t> seed_range(unsigned count) {
  if (count == 0) throw havqds::ConfigError("--seeds must be positive");
  std::vector<std::uint64_t> seeds(count);
  std::iota(seeds.begin(), seeds.end(), std::uint64_t{0});
  return seeds;
}

int report_sweep(const havqds::SweepSummary& s) {
  std::printf("%s: %zu runs, %zu failed, %.2f s; manifest %s\n", s.experiment.c_str(), s.runs,
              s.failures, s.wall_seconds, s.manifest.string().c_str());
  return s.failures == 0 ? code(ExitStatus::kOk) : code(ExitStatus::kPartialFailure);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hybrid adaptive variational quantum dynamics benchmarks"};
  app.set_version_flag("--version", havqds::version());
  app.require_subcommand(1);

  std::string out = havqds::default_output_root().string();
  std::string n_text = "8";
  std::string t_text = "1";
  unsigned seeds = 10;
  unsigned parallelism = 1;
  double dt = 0.01;

  auto add_common = [&](CLI::App* sub, bool with_time) {
    sub->add_option("--n", n_text, "qubit counts: 8, 6,8,10 or 6..14[:step]");
    sub->add_option("--seeds", seeds, "number of instances; seeds 0..N-1");
    sub->add_option("--out", out, "output directory (default $HAVQDS_OUT or ./results)");
    sub->add_option("--parallelism", parallelism, "concurrent runs");
    if (with_time) {
      sub->add_option("--T", t_text, "total times: 1, 1,5 or 2..10:2");
      sub->add_option("--dt", dt, "real-time step");
    }
  };

  auto* instance = app.add_subcommand("instance", "sample SK instances and save them as JSON");
  add_common(instance, false);

  auto* trotter = app.add_subcommand("trotter", "Trotterized AD/CD dilemma sweep");
  add_common(trotter, true);
  std::string protocol_text = "AD,CD";
  bool no_trajectories = false;
  trotter->add_option("--protocol", protocol_text, "AD, CD or AD,CD");
  trotter->add_flag("--no-trajectories", no_trajectories, "only write the final-ratio table");

  auto* havqds_cmd = app.add_subcommand("havqds", "HAVQDS and AVQDS-only sweeps");
  add_common(havqds_cmd, true);
  havqds::RunConfig run;
  std::string variant_text = "havqds";
  bool dump_state = false;
  bool no_guard = false;
  havqds_cmd->add_option("--dtau", run.dtau, "imaginary-time step");
  havqds_cmd->add_option("--delta-cut", run.distance_cut, "McLachlan distance threshold");
  havqds_cmd->add_option("--eps-var", run.eps_var, "variance trigger for filtering");
  havqds_cmd->add_option("--k-max", run.k_max, "imaginary-time steps per block");
  havqds_cmd->add_option("--lambda", run.lambda, "Tikhonov regularization");
  havqds_cmd->add_option("--ansatz-cap", run.max_ansatz, "maximum ansatz size");
  havqds_cmd->add_option("--variant", variant_text, "havqds, avqds or havqds,avqds");
  havqds_cmd->add_flag("--dump-state", dump_state, "write final amplitudes as binary");
  havqds_cmd->add_flag("--no-descent-guard", no_guard, "take raw Euler imaginary-time steps");

  auto* spectrum = app.add_subcommand("spectrum", "lowest levels of H_AD(s) on a grid");
  add_common(spectrum, false);
  int grid = 200;
  int levels = 5;
  spectrum->add_option("--grid", grid, "number of s points in [0, 1]");
  spectrum->add_option("--levels", levels, "levels per point");

  auto* report = app.add_subcommand("report", "aggregate summary CSVs into mean/std tables");
  std::string in_dir;
  report->add_option("--in", in_dir, "directory holding summary CSVs (default --out)");
  report->add_option("--out", out, "output directory");

  auto* replay = app.add_subcommand("replay", "re-run the sweep recorded in a manifest");
  std::string manifest;
  replay->add_option("--manifest", manifest, "manifest JSON")->required();
  replay->add_option("--out", out, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int status = app.exit(e);
    return status == 0 ? 0 : code(ExitStatus::kConfigError);
  }

  try {
    if (*instance) {
      return report_sweep(havqds::run_instance_export(
          {havqds::parse_int_list(n_text), seed_range(seeds)}, out));
    }
    if (*trotter) {
      havqds::TrotterSpec spec;
      spec.n_values = havqds::parse_int_list(n_text);
      spec.total_times = havqds::parse_real_list(t_text);
      spec.seeds = seed_range(seeds);
      spec.dt = dt;
      spec.trajectories = !no_trajectories;
      spec.parallelism = parallelism;
      std::stringstream list(protocol_text);
      for (std::string item; std::getline(list, item, ',');) {
        try {
          spec.protocols.push_back(havqds::protocol_from_string(item));
        } catch (const std::invalid_argument& e) {
          throw havqds::ConfigError(e.what());
        }
      }
      return report_sweep(havqds::run_trotter_sweep(spec, out));
    }
    if (*havqds_cmd) {
      havqds::HavqdsSpec spec;
      spec.n_values = havqds::parse_int_list(n_text);
      spec.total_times = havqds::parse_real_list(t_text);
      spec.seeds = seed_range(seeds);
      run.dt = dt;
      run.descent_guard = !no_guard;
      spec.config = run;
      spec.dump_state = dump_state;
      spec.parallelism = parallelism;
      std::stringstream list(variant_text);
      for (std::string item; std::getline(list, item, ',');) {
        spec.variants.push_back(havqds::variant_from_string(item));
      }
      return report_sweep(havqds::run_havqds_sweep(spec, out));
    }
    if (*spectrum) {
      havqds::SpectrumSpec spec;
      spec.n_values = havqds::parse_int_list(n_text);
      spec.seeds = seed_range(seeds);
      spec.grid = grid;
      spec.levels = levels;
      spec.parallelism = parallelism;
      return report_sweep(havqds::run_spectrum(spec, out));
    }
    if (*report) {
      const auto path = havqds::run_report(in_dir.empty() ? out : in_dir, out);
      std::printf("report written to %s\n", path.string().c_str());
      return code(ExitStatus::kOk);
    }
    if (*replay) return report_sweep(havqds::replay_manifest(manifest, out));
  } catch (const havqds::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return code(ExitStatus::kConfigError);
  } catch (const havqds::OutputError& e) {
    std::cerr << "output error: " << e.what() << '\n';
    return code(ExitStatus::kOutputError);
  } catch (const havqds::EmptyInputError& e) {
    std::cerr << "empty input: " << e.what() << '\n';
    return code(ExitStatus::kEmptyInput);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return code(ExitStatus::kConfigError);
}
