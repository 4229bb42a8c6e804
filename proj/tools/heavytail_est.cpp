// heavytail-est: run a seeded Monte Carlo experiment described by a config file.
//
//   heavytail-est run --config exp.cfg [--trials N] [--seed S] [--out path] ...
//
// Exit codes: 0 success, 1 invalid config, 2 unwritable output.

#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "heavytail/experiments.hpp"
#include "heavytail/parallel.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Heavy-tail robust estimation experiments"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Run an experiment from a config file");
  std::string config_path;
  std::optional<std::size_t> trials, n, d, k;
  std::optional<std::uint64_t> seed;
  std::optional<double> delta, lambda;
  std::optional<std::string> out;
  run->add_option("--config", config_path, "Config file (key = value lines)")->required();
  run->add_option("--trials", trials, "Number of trials");
  run->add_option("--seed", seed, "Master seed");
  run->add_option("--k", k, "Group count");
  run->add_option("--delta", delta, "Confidence parameter");
  run->add_option("--lambda", lambda, "Regularization level");
  run->add_option("--n", n, "Sample size");
  run->add_option("--d", d, "Dimension");
  run->add_option("--out", out, "Output CSV path");

  CLI11_PARSE(app, argc, argv);

  heavytail::ExperimentConfig config;
  try {
    config = heavytail::load_config(config_path);
  } catch (const heavytail::ConfigError& e) {
    std::cerr << "invalid config: " << e.what() << '\n';
    return heavytail::kExitConfig;
  }
  if (trials) config.trials = *trials;
  if (seed) config.seed = *seed;
  if (k) config.k = *k;
  if (delta) config.delta = *delta;
  if (lambda) config.lambda = *lambda;
  if (n) config.n = *n;
  if (d) config.d = *d;
  if (out) config.output = *out;

  try {
    return heavytail::run_experiment(config, heavytail::thread_cap(), std::cout, std::cerr);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
}
