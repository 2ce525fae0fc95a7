#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace tiedecay::experiments {

using Json = nlohmann::json;

// Invalid or incomplete configuration. `field` is the dotted key path, e.g.
// "model.alpha".
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& message);
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

struct ExperimentConfig {
  std::string experiment;
  std::uint64_t seed = 0;
  std::size_t realizations = 1;
  std::string output = ".";  // directory for the CSV files
  unsigned workers = 1;
  Json model = Json::object();
  Json sweep = Json::object();

  // Sorted-key JSON of everything that affects the numbers: experiment,
  // realizations, model and sweep (seed, output and workers are excluded).
  std::string canonical() const;
  std::uint64_t hash() const;  // FNV-1a 64 of canonical()
};

const std::vector<std::string>& experiment_ids();
bool known_experiment(const std::string& id);

ExperimentConfig parse_config(const std::string& yaml_text);
ExperimentConfig load_config(const std::filesystem::path& path);

std::uint64_t fnv1a64(const std::string& bytes);
std::string hex64(std::uint64_t value);

// Typed access to a model or sweep block with field-level errors.
class Block {
 public:
  Block(const Json& node, std::string path);

  bool has(const std::string& key) const;
  double number(const std::string& key) const;
  double number_or(const std::string& key, double fallback) const;
  std::uint64_t integer(const std::string& key) const;
  std::uint64_t integer_or(const std::string& key, std::uint64_t fallback) const;
  std::string text_or(const std::string& key, const std::string& fallback) const;
  // A number or a list of numbers.
  std::vector<double> numbers(const std::string& key) const;
  // A list of numbers, or {start, stop, count, scale: linear | log} with both
  // ends included.
  std::vector<double> grid(const std::string& key) const;
  // ConfigError naming the first key not in `allowed`.
  void only(const std::vector<std::string>& allowed) const;

  std::string field(const std::string& key) const { return path_ + "." + key; }

 private:
  const Json& at(const std::string& key) const;
  const Json& node_;
  std::string path_;
};

}  // namespace tiedecay::experiments
