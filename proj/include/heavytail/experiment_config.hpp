#pragma once

// Key-value experiment configuration. One "key = value" per line; '#' starts
// a comment; blank lines are ignored. Keys are case-sensitive. See
// docs/config.md for the field list.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "heavytail/synth_data.hpp"

namespace heavytail {

enum class Experiment { MomVsEmpirical, RegressHeavy, LassoHeavy, CovShrink, GeometryTables };

std::string to_string(Experiment e);
// Accepts snake_case (mom_vs_empirical) or the CamelCase enum name.
std::optional<Experiment> parse_experiment(std::string_view text);

class ConfigError : public std::runtime_error {
 public:
  // line == 0 for errors not tied to a line (missing fields, CLI overrides).
  ConfigError(std::size_t line, std::string field, const std::string& message);

  std::size_t line;
  std::string field;
};

struct ExperimentConfig {
  Experiment experiment = Experiment::MomVsEmpirical;
  std::size_t trials = 100;
  std::uint64_t seed = 0;
  std::size_t n = 1000;
  std::size_t d = 5;
  std::optional<std::size_t> k;
  double delta = 0.01;
  std::optional<double> k_constant;  // experiment-specific default when unset
  double lambda = 0.0;
  std::size_t sparsity = 2;
  DistSpec noise = Gaussian{};
  std::vector<double> deltas = {0.1, 0.01, 0.001};
  std::string output;
};

ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::string& path);

// Cross-field checks; throws ConfigError with line 0.
void validate_config(const ExperimentConfig& config);

}  // namespace heavytail
