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

#include "havqds/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>
#include <tuple>

#include "havqds/exact.hpp"
#include "havqds/stats.hpp"
#include "json.hpp"

#ifndef HAVQDS_VERSION
#define HAVQDS_VERSION "unknown"
#endif

namespace havqds {

namespace fs = std::filesystem;
using nlohmann::json;

std::string version() { return HAVQDS_VERSION; }

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

std::string format_tag(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%g", value);
  return buf;
}

namespace {

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, sep)) out.push_back(item);
  if (!text.empty() && text.back() == sep) out.emplace_back();
  return out;
}

double parse_real(const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw ConfigError("not a number: '" + s + "'");
  }
  if (used != s.size()) throw ConfigError("not a number: '" + s + "'");
  return v;
}

long long parse_integer(const std::string& s) {
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(s, &used);
  } catch (const std::exception&) {
    throw ConfigError("not an integer: '" + s + "'");
  }
  if (used != s.size()) throw ConfigError("not an integer: '" + s + "'");
  return v;
}

// Splits "a..b[:step]" into its parts; returns false for a plain value.
bool split_range(const std::string& item, std::string& lo, std::string& hi, std::string& step) {
  const auto dots = item.find("..");
  if (dots == std::string::npos) return false;
  lo = item.substr(0, dots);
  std::string rest = item.substr(dots + 2);
  const auto colon = rest.find(':');
  if (colon == std::string::npos) {
    hi = rest;
    step.clear();
  } else {
    hi = rest.substr(0, colon);
    step = rest.substr(colon + 1);
  }
  return true;
}

}  // namespace

std::vector<unsigned> parse_int_list(const std::string& text) {
  std::vector<unsigned> out;
  for (const auto& item : split(text, ',')) {
    std::string lo, hi, step;
    if (split_range(item, lo, hi, step)) {
      const long long a = parse_integer(lo), b = parse_integer(hi);
      const long long d = step.empty() ? 1 : parse_integer(step);
      if (d <= 0 || b < a) throw ConfigError("bad integer range '" + item + "'");
      for (long long v = a; v <= b; v += d) out.push_back(static_cast<unsigned>(v));
    } else {
      const long long v = parse_integer(item);
      if (v < 0) throw ConfigError("negative value '" + item + "'");
      out.push_back(static_cast<unsigned>(v));
    }
  }
  if (out.empty()) throw ConfigError("empty list");
  return out;
}

std::vector<double> parse_real_list(const std::string& text) {
  std::vector<double> out;
  for (const auto& item : split(text, ',')) {
    std::string lo, hi, step;
    if (split_range(item, lo, hi, step)) {
      const double a = parse_real(lo), b = parse_real(hi);
      const double d = step.empty() ? 1.0 : parse_real(step);
      if (!(d > 0.0) || b < a) throw ConfigError("bad range '" + item + "'");
      const auto count = static_cast<long long>(std::floor((b - a) / d + 1e-9));
      for (long long i = 0; i <= count; ++i) out.push_back(a + static_cast<double>(i) * d);
    } else {
      out.push_back(parse_real(item));
    }
  }
  if (out.empty()) throw ConfigError("empty list");
  for (double v : out) {
    if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError("values must be positive");
  }
  return out;
}

fs::path default_output_root() {
  if (const char* env = std::getenv("HAVQDS_OUT"); env != nullptr && *env != '\0') return env;
  return "results";
}

void write_file_atomic(const fs::path& path, const std::string& contents) {
  std::error_code ec;
  if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
  if (ec) throw OutputError("cannot create directory " + path.parent_path().string());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw OutputError("cannot write " + tmp.string());
    out << contents;
    if (!out) throw OutputError("write failed for " + tmp.string());
  }
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw OutputError("cannot move output into " + path.string());
  }
}

std::vector<std::string> run_parallel(std::size_t count, unsigned parallelism,
                                      const std::function<void(std::size_t)>& job) {
  std::vector<std::string> errors(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        job(i);
      } catch (const std::exception& e) {
        errors[i] = e.what();
        if (errors[i].empty()) errors[i] = "unknown error";
      } catch (...) {
        errors[i] = "unknown error";
      }
    }
  };
  const std::size_t threads = std::min<std::size_t>(std::max(1u, parallelism), count);
  if (threads <= 1) {
    worker();
    return errors;
  }
  std::vector<std::jthread> pool;
  for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  return errors;
}

namespace {

class Csv {
 public:
  explicit Csv(const std::vector<std::string>& header) { row(header); }

  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) text_ += ',';
      text_ += cells[i];
    }
    text_ += '\n';
  }
  const std::string& str() const { return text_; }

 private:
  std::string text_;
};

std::string num(double v) { return format_number(v); }
template <typename I>
std::string integer(I v) {
  return std::to_string(v);
}

void prepare_output_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw OutputError("cannot create output directory " + dir.string());
  const fs::path probe = dir / ".havqds_write_probe";
  {
    std::ofstream out(probe);
    if (!out) throw OutputError("output directory is not writable: " + dir.string());
  }
  fs::remove(probe, ec);
}

void require_nonempty(const auto& values, const char* what) {
  if (values.empty()) throw ConfigError(std::string("empty ") + what);
}

void check_sizes(const std::vector<unsigned>& ns) {
  for (unsigned n : ns) {
    if (n < 2 || n > 20) throw ConfigError("n must be in [2, 20]");
  }
}

std::string run_stem(const std::string& prefix, unsigned n, double total_time, std::uint64_t seed) {
  return prefix + "_n" + std::to_string(n) + "_T" + format_tag(total_time) + "_seed" +
         std::to_string(seed);
}

struct Manifest {
  std::string experiment;
  json config;
  json notes = json::object();
  std::vector<std::uint64_t> seeds;
  std::vector<std::string> run_names;
  std::vector<std::string> errors;
  std::vector<std::string> files;
  double wall_seconds = 0.0;
};

SweepSummary finish(const Manifest& m, const fs::path& out_dir) {
  json j;
  j["experiment"] = m.experiment;
  j["version"] = version();
  j["config"] = m.config;
  j["notes"] = m.notes;
  j["seeds"] = m.seeds;
  j["wall_time_s"] = m.wall_seconds;
  auto& runs = j["runs"] = json::array();
  std::size_t failures = 0;
  for (std::size_t i = 0; i < m.run_names.size(); ++i) {
    json r{{"name", m.run_names[i]}, {"status", m.errors[i].empty() ? "ok" : "failed"}};
    if (!m.errors[i].empty()) {
      r["error"] = m.errors[i];
      ++failures;
    }
    runs.push_back(r);
  }
  j["files"] = m.files;
  const fs::path path = out_dir / ("manifest_" + m.experiment + ".json");
  write_file_atomic(path, j.dump(2) + "\n");
  return {m.experiment, path, m.run_names.size(), failures, m.wall_seconds};
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

json run_config_to_json(const RunConfig& c) {
  return {{"dt", c.dt},
          {"dtau", c.dtau},
          {"delta_cut", c.distance_cut},
          {"eps_var", c.eps_var},
          {"k_max", c.k_max},
          {"lambda", c.lambda},
          {"ansatz_cap", c.max_ansatz},
          {"record_ratio", c.record_ratio},
          {"descent_guard", c.descent_guard},
          {"descent_tolerance", c.descent_tolerance},
          {"max_halvings", c.max_halvings}};
}

RunConfig run_config_from_json(const json& j) {
  RunConfig c;
  c.dt = j.at("dt").get<double>();
  c.dtau = j.at("dtau").get<double>();
  c.distance_cut = j.at("delta_cut").get<double>();
  c.eps_var = j.at("eps_var").get<double>();
  c.k_max = j.at("k_max").get<int>();
  c.lambda = j.at("lambda").get<double>();
  c.max_ansatz = j.at("ansatz_cap").get<std::size_t>();
  c.record_ratio = j.at("record_ratio").get<bool>();
  c.descent_guard = j.at("descent_guard").get<bool>();
  c.descent_tolerance = j.at("descent_tolerance").get<double>();
  c.max_halvings = j.at("max_halvings").get<int>();
  return c;
}

}  // namespace

// ---------------------------------------------------------------------------

SweepSummary run_instance_export(const InstanceSpec& spec, const fs::path& out_dir) {
  require_nonempty(spec.n_values, "n list");
  require_nonempty(spec.seeds, "seed list");
  check_sizes(spec.n_values);
  prepare_output_dir(out_dir);
  const auto start = std::chrono::steady_clock::now();
  Manifest m;
  m.experiment = "instance";
  m.config = {{"n", spec.n_values}};
  m.seeds = spec.seeds;
  for (unsigned n : spec.n_values) {
    for (std::uint64_t seed : spec.seeds) {
      const std::string name = "instance_n" + std::to_string(n) + "_seed" + std::to_string(seed);
      m.run_names.push_back(name);
      write_file_atomic(out_dir / (name + ".json"), instance_to_json(sample_sk(n, seed)) + "\n");
      m.errors.emplace_back();
      m.files.push_back(name + ".json");
    }
  }
  m.wall_seconds = seconds_since(start);
  return finish(m, out_dir);
}

SweepSummary run_trotter_sweep(const TrotterSpec& spec, const fs::path& out_dir) {
  require_nonempty(spec.n_values, "n list");
  require_nonempty(spec.total_times, "T list");
  require_nonempty(spec.protocols, "protocol list");
  require_nonempty(spec.seeds, "seed list");
  check_sizes(spec.n_values);
  if (!(spec.dt > 0.0)) throw ConfigError("dt must be positive");
  for (double t : spec.total_times) {
    if (!(t > 0.0)) throw ConfigError("T must be positive");
  }
  prepare_output_dir(out_dir);
  const auto start = std::chrono::steady_clock::now();

  struct Job {
    unsigned n;
    double total_time;
    Protocol protocol;
    std::uint64_t seed;
  };
  std::vector<Job> jobs;
  for (unsigned n : spec.n_values) {
    for (double total : spec.total_times) {
      for (Protocol p : spec.protocols) {
        for (std::uint64_t seed : spec.seeds) jobs.push_back({n, total, p, seed});
      }
    }
  }
  std::vector<DilemmaRow> rows(jobs.size());
  auto errors = run_parallel(jobs.size(), spec.parallelism, [&](std::size_t i) {
    const Job& job = jobs[i];
    TrotterOptions options;
    options.dt = spec.dt;
    options.record_ratio = spec.trajectories;
    const TrotterResult result =
        run_trotter(sample_sk(job.n, job.seed), job.protocol, job.total_time, options);
    rows[i] = {job.protocol, job.n, job.total_time, job.seed, result.final_ratio,
               result.tally.cnot_count};
    if (spec.trajectories) {
      Csv csv({"protocol", "n", "T", "dt", "seed", "step", "t", "s", "energy", "ratio",
               "cnot_cumulative"});
      for (const auto& r : result.records) {
        csv.row({to_string(job.protocol), integer(job.n), num(job.total_time), num(spec.dt),
                 integer(job.seed), integer(r.step), num(r.t), num(r.s), num(r.energy),
                 num(r.ratio), integer(r.cnot_cumulative)});
      }
      write_file_atomic(
          out_dir / (run_stem("trotter_" + to_string(job.protocol), job.n, job.total_time,
                              job.seed) + ".csv"),
          csv.str());
    }
  });

  Manifest m;
  m.experiment = "trotter";
  m.notes = {{"trotter_order", 1},
             {"term_order", "driver, problem, counterdiabatic"},
             {"cd_coefficients", "evaluated at the step start time"},
             {"schedule", "s = sin^2(pi t / 2T)"}};
  json protocols = json::array();
  for (Protocol p : spec.protocols) protocols.push_back(to_string(p));
  m.config = {{"n", spec.n_values},          {"T", spec.total_times},
              {"protocols", protocols},      {"dt", spec.dt},
              {"trajectories", spec.trajectories}, {"parallelism", spec.parallelism}};
  m.seeds = spec.seeds;
  Csv summary({"protocol", "n", "T", "seed", "r_final", "cnot_total"});
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    const Job& job = jobs[i];
    const std::string stem =
        run_stem("trotter_" + to_string(job.protocol), job.n, job.total_time, job.seed);
    m.run_names.push_back(stem);
    if (!errors[i].empty()) continue;
    if (spec.trajectories) m.files.push_back(stem + ".csv");
    summary.row({to_string(rows[i].protocol), integer(rows[i].n_qubits), num(rows[i].total_time),
                 integer(rows[i].seed), num(rows[i].r_final), integer(rows[i].cnot_total)});
  }
  write_file_atomic(out_dir / "trotter_dilemma.csv", summary.str());
  m.files.push_back("trotter_dilemma.csv");
  m.errors = std::move(errors);
  m.wall_seconds = seconds_since(start);
  return finish(m, out_dir);
}

std::string to_string(Variant variant) {
  return variant == Variant::kHavqds ? "havqds" : "avqds";
}

Variant variant_from_string(const std::string& name) {
  if (name == "havqds" || name == "HAVQDS") return Variant::kHavqds;
  if (name == "avqds" || name == "AVQDS") return Variant::kAvqdsOnly;
  throw ConfigError("unknown variant '" + name + "'");
}

SweepSummary run_havqds_sweep(const HavqdsSpec& spec, const fs::path& out_dir) {
  require_nonempty(spec.n_values, "n list");
  require_nonempty(spec.total_times, "T list");
  require_nonempty(spec.variants, "variant list");
  require_nonempty(spec.seeds, "seed list");
  check_sizes(spec.n_values);
  for (double total : spec.total_times) {
    RunConfig c = spec.config;
    c.total_time = total;
    try {
      c.validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }
  prepare_output_dir(out_dir);
  const auto start = std::chrono::steady_clock::now();

  struct Job {
    unsigned n;
    double total_time;
    Variant variant;
    std::uint64_t seed;
  };
  std::vector<Job> jobs;
  for (unsigned n : spec.n_values) {
    for (double total : spec.total_times) {
      for (Variant v : spec.variants) {
        for (std::uint64_t seed : spec.seeds) jobs.push_back({n, total, v, seed});
      }
    }
  }
  std::vector<std::vector<std::string>> rows(jobs.size());
  auto errors = run_parallel(jobs.size(), spec.parallelism, [&](std::size_t i) {
    const Job& job = jobs[i];
    RunConfig config = spec.config;
    config.total_time = job.total_time;
    const SkInstance instance = sample_sk(job.n, job.seed);
    const HavqdsResult result = job.variant == Variant::kHavqds
                                    ? run_havqds(instance, config)
                                    : run_avqds_only(instance, config);
    const std::string stem =
        run_stem("havqds_" + to_string(job.variant), job.n, job.total_time, job.seed);
    Csv csv({"variant", "n", "T", "seed", "step", "t", "s", "energy", "variance", "ratio",
             "ansatz_size", "cnot_total", "imag_steps", "distance", "degraded"});
    for (const auto& r : result.records) {
      csv.row({to_string(job.variant), integer(job.n), num(job.total_time), integer(job.seed),
               integer(r.step), num(r.t), num(r.s), num(r.energy), num(r.variance), num(r.ratio),
               integer(r.ansatz_size), integer(r.cnot_total), integer(r.imag_steps),
               num(r.distance), integer(r.degraded ? 1 : 0)});
    }
    write_file_atomic(out_dir / (stem + ".csv"), csv.str());
    write_file_atomic(out_dir / (stem + "_ansatz.json"), ansatz_to_json(result.ansatz) + "\n");
    if (spec.dump_state) write_amplitudes(result.state, out_dir / (stem + "_state.bin"));
    rows[i] = {to_string(job.variant),
               integer(job.n),
               num(job.total_time),
               integer(job.seed),
               num(result.final_ratio),
               num(result.final_energy),
               integer(result.ansatz.cnot_total()),
               integer(result.ansatz.size()),
               integer(result.total_imag_steps),
               num(result.max_imag_energy_increase),
               num(result.max_raw_imag_energy_increase),
               integer(result.guarded_steps),
               integer(result.degraded ? 1 : 0)};
  });

  Manifest m;
  m.experiment = "havqds";
  m.notes = {{"schedule", "s = sin^2(pi t / 2T)"},
             {"hamiltonian", "H_AD(s); no counterdiabatic term is built"},
             {"imaginary_step_control",
              spec.config.descent_guard ? "dtau halved while the energy rises" : "raw Euler"}};
  json variants = json::array();
  for (Variant v : spec.variants) variants.push_back(to_string(v));
  m.config = {{"n", spec.n_values},      {"T", spec.total_times},
              {"variants", variants},    {"run", run_config_to_json(spec.config)},
              {"dump_state", spec.dump_state}, {"parallelism", spec.parallelism}};
  m.seeds = spec.seeds;
  Csv summary({"variant", "n", "T", "seed", "r_final", "energy_final", "cnot_total",
               "ansatz_size", "imag_steps_total", "max_imag_energy_increase",
               "max_raw_imag_energy_increase", "guarded_steps", "degraded"});
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    const Job& job = jobs[i];
    const std::string stem =
        run_stem("havqds_" + to_string(job.variant), job.n, job.total_time, job.seed);
    m.run_names.push_back(stem);
    if (!errors[i].empty()) continue;
    m.files.push_back(stem + ".csv");
    m.files.push_back(stem + "_ansatz.json");
    if (spec.dump_state) m.files.push_back(stem + "_state.bin");
    summary.row(rows[i]);
  }
  write_file_atomic(out_dir / "havqds_summary.csv", summary.str());
  m.files.push_back("havqds_summary.csv");
  m.errors = std::move(errors);
  m.wall_seconds = seconds_since(start);
  return finish(m, out_dir);
}

SweepSummary run_spectrum(const SpectrumSpec& spec, const fs::path& out_dir) {
  require_nonempty(spec.n_values, "n list");
  require_nonempty(spec.seeds, "seed list");
  check_sizes(spec.n_values);
  if (spec.grid < 2) throw ConfigError("grid must have at least 2 points");
  if (spec.levels < 1) throw ConfigError("levels must be positive");
  for (unsigned n : spec.n_values) {
    if ((std::size_t{1} << n) < static_cast<std::size_t>(spec.levels)) {
      throw ConfigError("more levels requested than the Hilbert space holds");
    }
  }
  prepare_output_dir(out_dir);
  const auto start = std::chrono::steady_clock::now();

  struct Job {
    unsigned n;
    std::uint64_t seed;
  };
  std::vector<Job> jobs;
  for (unsigned n : spec.n_values) {
    for (std::uint64_t seed : spec.seeds) jobs.push_back({n, seed});
  }
  std::vector<std::vector<std::vector<std::string>>> rows(jobs.size());
  auto errors = run_parallel(jobs.size(), spec.parallelism, [&](std::size_t i) {
    const SkInstance instance = sample_sk(jobs[i].n, jobs[i].seed);
    for (int g = 0; g < spec.grid; ++g) {
      const double s = static_cast<double>(g) / static_cast<double>(spec.grid - 1);
      const auto levels = lowest_levels(build_h_ad(instance, s), spec.levels);
      std::vector<std::string> row{integer(jobs[i].seed), num(s)};
      for (double e : levels) row.push_back(num(e));
      rows[i].push_back(std::move(row));
    }
  });

  Manifest m;
  m.experiment = "spectrum";
  m.notes = {{"hamiltonian", "H_AD(s) = (1-s) H_i + s H_f, no counterdiabatic term"}};
  m.config = {{"n", spec.n_values},
              {"grid", spec.grid},
              {"levels", spec.levels},
              {"parallelism", spec.parallelism}};
  m.seeds = spec.seeds;
  std::vector<std::string> header{"seed", "s"};
  for (int l = 0; l < spec.levels; ++l) header.push_back("E" + std::to_string(l));
  for (unsigned n : spec.n_values) {
    Csv csv(header);
    for (std::size_t i = 0; i < jobs.size(); ++i) {
      if (jobs[i].n != n || !errors[i].empty()) continue;
      for (const auto& row : rows[i]) csv.row(row);
    }
    const std::string file = "spectrum_n" + std::to_string(n) + ".csv";
    write_file_atomic(out_dir / file, csv.str());
    m.files.push_back(file);
  }
  for (const auto& job : jobs) {
    m.run_names.push_back("spectrum_n" + std::to_string(job.n) + "_seed" +
                          std::to_string(job.seed));
  }
  m.errors = std::move(errors);
  m.wall_seconds = seconds_since(start);
  return finish(m, out_dir);
}

// ---------------------------------------------------------------------------

namespace {

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(const std::string& name, const fs::path& file) const {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) {
      throw ConfigError(file.string() + ": missing column '" + name + "'");
    }
    return static_cast<std::size_t>(it - header.begin());
  }
};

Table read_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read " + path.string());
  Table t;
  std::string line;
  if (!std::getline(in, line)) return t;
  t.header = split(line, ',');
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto cells = split(line, ',');
    if (cells.size() != t.header.size()) {
      throw ConfigError(path.string() + ": row width differs from header");
    }
    t.rows.push_back(std::move(cells));
  }
  return t;
}

}  // namespace

fs::path run_report(const fs::path& in_dir, const fs::path& out_dir) {
  if (!fs::is_directory(in_dir)) throw EmptyInputError("no such directory: " + in_dir.string());

  struct Key {
    std::string experiment;
    std::string method;
    unsigned n;
    double total_time;
    auto operator<=>(const Key&) const = default;
  };
  struct Samples {
    std::vector<double> ratio;
    std::vector<double> cnot;
  };
  std::map<Key, Samples> groups;

  auto absorb = [&](const std::string& experiment, const fs::path& file,
                    const std::string& method_column) {
    if (!fs::exists(file)) return;
    const Table t = read_csv(file);
    if (t.header.empty()) return;
    const auto cm = t.column(method_column, file), cn = t.column("n", file),
               ct = t.column("T", file), cr = t.column("r_final", file),
               cc = t.column("cnot_total", file);
    for (const auto& row : t.rows) {
      Key key{experiment, row[cm], static_cast<unsigned>(parse_integer(row[cn])),
              parse_real(row[ct])};
      groups[key].ratio.push_back(parse_real(row[cr]));
      groups[key].cnot.push_back(parse_real(row[cc]));
    }
  };
  absorb("trotter", in_dir / "trotter_dilemma.csv", "protocol");
  absorb("havqds", in_dir / "havqds_summary.csv", "variant");
  if (groups.empty()) throw EmptyInputError("no summary rows under " + in_dir.string());

  Csv csv({"experiment", "method", "n", "T", "count", "r_mean", "r_std", "cnot_mean",
           "cnot_std"});
  for (const auto& [key, samples] : groups) {
    csv.row({key.experiment, key.method, integer(key.n), num(key.total_time),
             integer(samples.ratio.size()), num(mean(samples.ratio)),
             num(sample_std(samples.ratio)), num(mean(samples.cnot)),
             num(sample_std(samples.cnot))});
  }
  prepare_output_dir(out_dir);
  const fs::path path = out_dir / "report.csv";
  write_file_atomic(path, csv.str());
  return path;
}

SweepSummary replay_manifest(const fs::path& manifest, const fs::path& out_dir) {
  std::ifstream in(manifest);
  if (!in) throw ConfigError("cannot read manifest " + manifest.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("manifest is not valid JSON: ") + e.what());
  }
  try {
    const std::string experiment = j.at("experiment").get<std::string>();
    const json& c = j.at("config");
    const auto seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
    if (experiment == "instance") {
      return run_instance_export({c.at("n").get<std::vector<unsigned>>(), seeds}, out_dir);
    }
    if (experiment == "trotter") {
      TrotterSpec spec;
      spec.n_values = c.at("n").get<std::vector<unsigned>>();
      spec.total_times = c.at("T").get<std::vector<double>>();
      for (const auto& p : c.at("protocols")) {
        spec.protocols.push_back(protocol_from_string(p.get<std::string>()));
      }
      spec.seeds = seeds;
      spec.dt = c.at("dt").get<double>();
      spec.trajectories = c.at("trajectories").get<bool>();
      spec.parallelism = c.at("parallelism").get<unsigned>();
      return run_trotter_sweep(spec, out_dir);
    }
    if (experiment == "havqds") {
      HavqdsSpec spec;
      spec.n_values = c.at("n").get<std::vector<unsigned>>();
      spec.total_times = c.at("T").get<std::vector<double>>();
      for (const auto& v : c.at("variants")) {
        spec.variants.push_back(variant_from_string(v.get<std::string>()));
      }
      spec.seeds = seeds;
      spec.config = run_config_from_json(c.at("run"));
      spec.dump_state = c.at("dump_state").get<bool>();
      spec.parallelism = c.at("parallelism").get<unsigned>();
      return run_havqds_sweep(spec, out_dir);
    }
    if (experiment == "spectrum") {
      SpectrumSpec spec;
      spec.n_values = c.at("n").get<std::vector<unsigned>>();
      spec.seeds = seeds;
      spec.grid = c.at("grid").get<int>();
      spec.levels = c.at("levels").get<int>();
      spec.parallelism = c.at("parallelism").get<unsigned>();
      return run_spectrum(spec, out_dir);
    }
    throw ConfigError("manifest names an unknown experiment '" + experiment + "'");
  } catch (const json::exception& e) {
    throw ConfigError(std::string("manifest is missing fields: ") + e.what());
  } catch (const std::invalid_argument& e) {
    if (dynamic_cast<const ConfigError*>(&e) != nullptr) throw;
    throw ConfigError(e.what());
  }
}

}  // namespace havqds
