// runner.hpp — Batch execution: sweeps, trajectory output, metrics summary, manifest

#pragma once

#include <filesystem>

#include "tclprep/config.hpp"
#include "tclprep/evolve.hpp"

namespace tclprep::cli {

struct RunOptions {
  std::filesystem::path output_dir = ".";
  std::vector<std::string> overrides;
  bool dump_alpha = false;
  bool dump_coefficients = false;
};

struct RunArtifacts {
  std::vector<std::filesystem::path> trajectory_files;
  std::filesystem::path summary_file;
  std::filesystem::path manifest_file;
  std::vector<std::string> warnings;
};

// Executes every sweep point (worker pool), then writes all artifacts from the
// calling thread.  Nothing is written until every point has completed, so a
// failing run leaves no partial outputs.
RunArtifacts run(RunConfig config, const RunOptions& options = {});
RunArtifacts run(const std::filesystem::path& config_path, const RunOptions& options = {});

}  // namespace tclprep::cli
