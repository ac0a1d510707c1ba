// config.hpp — Flat key/value run configuration with strict parsing

#pragma once

#include <filesystem>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "tclprep/scenario.hpp"

namespace tclprep::cli {

struct ConfigError : std::runtime_error {
  int line = 0;
  int column = 0;
  ConfigError(const std::string& msg, int line_, int column_)
      : std::runtime_error(msg + " (line " + std::to_string(line_) + ", column " +
                           std::to_string(column_) + ")"),
        line(line_),
        column(column_) {}
};

// Every physical parameter is a ratio against the post-preparation frequency
// omega or the cutoff, so the file format carries the unit in the key name.
struct RunConfig {
  // scenario block
  std::string kind = "factorized";
  double omega = 1.0;
  double cutoff_over_omega = 100.0;
  double eta = 0.05;
  double beta_omega = std::numeric_limits<double>::infinity();
  std::string coupling = "sigma_x";
  std::string initial_state = "excited";
  std::string preparation = "freezing";
  double switch_tau_s_lambda = 0.0;
  double freeze_depth_over_cutoff = 0.01;
  std::string flip_target = "excited";
  double prep_time_omega = 10.0;
  // grid block
  double t_max_omega = 5.0;
  double dt_omega = 0.0;
  int store_stride = 0;
  bool error_check = true;
  // metrics block
  bool cutoff_sensitivity = false;
  // sweep block
  std::string sweep_parameter;
  std::vector<std::string> sweep_values;
  // output block
  std::string output_stem = "run";
  // reserved; no stochastic paths yet
  long seed = 0;

  static RunConfig from_string(const std::string& text);
  static RunConfig from_file(const std::filesystem::path& path);

  void set(const std::string& key, const std::string& value);
  void apply_override(const std::string& key_equals_value);
  void validate() const;
  std::string serialize() const;

  scenario::Scenario build_scenario() const;
  std::vector<RunConfig> expand_sweep() const;  // one config per sweep point
};

}  // namespace tclprep::cli
