#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "tiedecay/experiments/config.hpp"

namespace tiedecay::experiments {

struct Violation {
  std::string field;
  std::string message;
};

// Schema and stability checks without running anything: unknown or missing
// keys, parameter ranges, Delta < 1/2, non-negative scheme coefficients and
// L >= v T for walks started at x = 0.
std::vector<Violation> validate(const ExperimentConfig& config);

struct OutputFile {
  std::string name;  // file name inside config.output
  std::string content;
};

// Runs the experiment and returns the rendered CSV files. Throws ConfigError
// when validate() reports violations and NumericalError when a solver fails.
std::vector<OutputFile> render(const ExperimentConfig& config);

// render() followed by an atomic write of every file; returns the paths.
std::vector<std::filesystem::path> run(const ExperimentConfig& config);

std::string describe(const std::string& experiment);
std::string toolkit_version();

}  // namespace tiedecay::experiments
