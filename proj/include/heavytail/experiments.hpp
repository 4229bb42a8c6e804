#pragma once

// Seeded Monte Carlo suites behind the heavytail-est command. Trial t draws
// everything from derive_seed(config.seed, t), so results do not depend on
// the number of workers.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "heavytail/experiment_config.hpp"

namespace heavytail {

inline constexpr int kCsvSchema = 1;

struct QuantileRow {
  double delta = 0.0;
  std::size_t rank = 0;  // 1-based order statistic
  double value = 0.0;
};

// 1-based nearest rank ceil(q m), clamped to [1, m]. q m is snapped to an
// integer when within rounding distance of one.
std::size_t nearest_rank(std::size_t m, double q);

// Empirical (1 - delta)-quantile per delta, nearest rank. Throws on empty
// values or delta outside (0, 1).
std::vector<QuantileRow> quantile_report(std::span<const double> values, std::span<const double> deltas);

struct ExperimentTable {
  std::vector<std::string> columns;        // after the leading trial,seed columns
  std::vector<std::uint64_t> trial_seeds;  // one per row, row i is trial i
  std::vector<std::vector<double>> rows;
  std::vector<std::string> labels;         // GeometryTables: row names instead of trial ids
  std::string summary;

  // Column values across trials.
  std::vector<double> column(const std::string& name) const;
};

// Runs every trial on up to `threads` workers. Throws ConfigError for
// invalid configs.
ExperimentTable compute_experiment(const ExperimentConfig& config, std::size_t threads);

// CSV text: "# schema=1 experiment=<name> trials=<t> seed=<s>", the column
// header, then one row per trial in trial order. Values use the shortest
// round-trip decimal form.
std::string render_csv(const ExperimentConfig& config, const ExperimentTable& table);

// Exit codes of run_experiment.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitOutput = 2;

// Validates, computes, writes config.output and prints the summary to `out`.
// Diagnostics go to `err`.
int run_experiment(const ExperimentConfig& config, std::size_t threads, std::ostream& out, std::ostream& err);

}  // namespace heavytail
