// Copyright (c) 2026 The eprsim Authors
// SPDX-License-Identifier: Apache-2.0
//
// experiment.hpp: config-driven batch runs behind the command line tool.
//
// A run is described by a JSON config (see README for the schema), executes
// one named scenario, and writes <scenario>.csv plus summary.json into the
// output directory. Numbers are written with 17 significant digits, '.'
// decimal separator, LF line endings; identical (config, seed) pairs produce
// byte-identical files. Wall-clock time is reported on the run summary only,
// never in the files.

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "eprsim/bell_analysis.hpp"
#include "eprsim/spatial_decoherence.hpp"
#include "eprsim/stochastic_engine.hpp"

namespace eprsim {

enum class Scenario {
  time_sweep,
  angle_sweep,
  mc_validate,
  spatial_profile,
  crossover,
};

const char* to_string(Scenario s);

struct GridSpec {
  double min{0.0};
  double max{1.0};
  std::size_t count{101};
};

// Fully resolved run description: defaults applied, directions normalized.
struct ExperimentConfig {
  Scenario scenario{Scenario::time_sweep};
  std::uint64_t seed{1};
  std::string output_dir{"."};

  SpinDecayParams spin = SpinDecayParams::uniform(1.0);
  SpatialParams space{};
  NoiseParams noise{};
  BellAngles angles = BellAngles::canonical();
  GridSpec grid{};          // times, or angles for angle-sweep
  double fixed_time{0.0};   // angle-sweep evaluation time
  Polarization p0{0.0, 0.0, 1.0};
  double mc_dt{1e-2};
  std::size_t mc_n_steps{200};
  std::size_t mc_n_traj{1000};
  double coherence_r{1.0};  // spatial-profile off-diagonal offset

  // Parameter echo: every value above, after defaulting/normalization,
  // serialized as a JSON object (written under "config" in summary.json).
  std::string echo_json{"{}"};
};

// All validation problems found in a config, reported together.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> issues);
  const std::vector<std::string>& issues() const { return issues_; }

 private:
  std::vector<std::string> issues_;
};

struct ParsedConfig {
  ExperimentConfig config;
  std::vector<std::string> warnings; // e.g. direction normalization notes
};

// Parses and validates a JSON config document. Throws ConfigError carrying
// the full list of violations (unknown scenario, missing sections, bad
// values, malformed JSON). Non-unit direction vectors are normalized here --
// and only here -- with a warning; the library types reject them.
ParsedConfig parse_config(const std::string& json_text);

struct RunSummary {
  std::string scenario;
  std::uint64_t seed{0};
  std::vector<std::pair<std::string, double>> headline; // values taken from CSV rows
  std::string csv_path;
  std::string summary_path;
  double wall_clock_seconds{0.0}; // not serialized
};

// Executes the scenario and writes the output files. I/O problems and
// numerical failures surface as std::runtime_error; config-level misuse as
// std::invalid_argument / ConfigError.
RunSummary run_experiment(const ExperimentConfig& cfg);

} // namespace eprsim
