#include <cstdio>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "tiedecay/errors.hpp"
#include "tiedecay/experiments/config.hpp"
#include "tiedecay/experiments/runner.hpp"

namespace ex = tiedecay::experiments;

namespace {

constexpr int kOk = 0;
constexpr int kOther = 1;
constexpr int kConfig = 2;
constexpr int kNumerical = 3;

int cmd_run(const std::string& path, std::optional<std::uint64_t> seed, std::optional<std::string> out,
            std::optional<unsigned> workers) {
  ex::ExperimentConfig cfg = ex::load_config(path);
  if (seed) cfg.seed = *seed;
  if (out) cfg.output = *out;
  if (workers) cfg.workers = *workers;
  for (const auto& file : ex::run(cfg)) fmt::print("{}\n", file.string());
  return kOk;
}

int cmd_validate(const std::string& path) {
  const ex::ExperimentConfig cfg = ex::load_config(path);
  const auto found = ex::validate(cfg);
  if (found.empty()) {
    fmt::print("{}: ok ({})\n", path, cfg.experiment);
    return kOk;
  }
  for (const auto& v : found) fmt::print("{}: {}\n", v.field, v.message);
  return kConfig;
}

int cmd_list() {
  for (const auto& id : ex::experiment_ids()) fmt::print("{:<16} {}\n", id, ex::describe(id));
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tie-decay temporal network experiments"};
  app.set_version_flag("--version", ex::toolkit_version());
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::optional<unsigned> workers;

  auto* run = app.add_subcommand("run", "run an experiment and write its CSV files");
  run->add_option("config", config_path, "experiment configuration (YAML)")->required();
  run->add_option("--seed", seed, "override the master seed");
  run->add_option("--out", out_dir, "override the output directory");
  run->add_option("--workers", workers, "worker threads")->check(CLI::PositiveNumber);

  auto* validate = app.add_subcommand("validate", "check a configuration without running it");
  validate->add_option("config", config_path, "experiment configuration (YAML)")->required();

  app.add_subcommand("list-experiments", "print the experiment ids");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    if (run->parsed()) return cmd_run(config_path, seed, out_dir, workers);
    if (validate->parsed()) return cmd_validate(config_path);
    return cmd_list();
  } catch (const ex::ConfigError& e) {
    fmt::print(stderr, "config error: {}\n", e.what());
    return kConfig;
  } catch (const tiedecay::NumericalError& e) {
    fmt::print(stderr, "numerical error: {} (residual {})\n", e.what(), e.residual());
    return kNumerical;
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kOther;
  }
}
