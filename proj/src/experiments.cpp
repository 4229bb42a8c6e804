#include "heavytail/experiments.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <cmath>
#include <fstream>
#include <numeric>
#include <ostream>
#include <sstream>

#include "heavytail/adversarial_geometry.hpp"
#include "heavytail/heavy_regression.hpp"
#include "heavytail/lowrank_cov.hpp"
#include "heavytail/median.hpp"
#include "heavytail/mom_scalar.hpp"
#include "heavytail/parallel.hpp"
#include "heavytail/rng.hpp"
#include "heavytail/sparse_lasso.hpp"
#include "heavytail/synth_data.hpp"

namespace heavytail {

namespace {

// Sub-stream indices under a trial seed.
constexpr std::uint64_t kPartitionStream = 1;
constexpr std::uint64_t kFitStream = 2;

std::string shortest(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return ec == std::errc{} ? std::string(buf, ptr) : std::string("nan");
}

std::string delta_label(double delta) { return shortest(delta); }

void append_quantiles(std::ostringstream& s, const std::string& name, const std::vector<double>& values,
                      const std::vector<double>& deltas) {
  s << name << ':';
  for (const auto& q : quantile_report(values, deltas)) s << "  q(1-" << delta_label(q.delta) << ")=" << shortest(q.value);
  std::vector<double> sorted = values;
  s << "  median=" << shortest(lower_median(sorted)) << '\n';
}

template <typename Trial>
void run_trials(const ExperimentConfig& config, std::size_t threads, ExperimentTable& table, Trial&& trial) {
  table.trial_seeds.resize(config.trials);
  table.rows.resize(config.trials);
  parallel_for(config.trials, threads, [&](std::size_t t) {
    const std::uint64_t s = derive_seed(config.seed, t);
    table.trial_seeds[t] = s;
    table.rows[t] = trial(s);
  });
}

std::size_t groups_or(const ExperimentConfig& c, double delta, double constant) {
  const std::size_t k = c.k ? *c.k : groups_for_confidence(delta, c.k_constant.value_or(constant));
  if (k > c.n) throw ConfigError(0, "k", "more groups than samples (k = " + std::to_string(k) + ")");
  return k;
}

ExperimentTable mom_vs_empirical(const ExperimentConfig& c, std::size_t threads) {
  const double mu = *dist_mean(c.noise);
  // Without a fixed k, each delta gets its own group count.
  std::vector<std::size_t> ks;
  if (c.k) {
    ks.push_back(groups_or(c, c.delta, 4.5));
  } else {
    for (const double q : c.deltas) ks.push_back(groups_or(c, q, 4.5));
  }
  std::vector<std::size_t> distinct = ks;
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());

  ExperimentTable table;
  table.columns = {"empirical_mean", "empirical_dev"};
  for (const auto k : distinct) {
    table.columns.push_back("mom_k" + std::to_string(k));
    table.columns.push_back("mom_k" + std::to_string(k) + "_dev");
  }
  run_trials(c, threads, table, [&](std::uint64_t s) {
    const auto sample = sample_scalar(c.noise, c.n, s);
    const double mean = std::accumulate(sample.begin(), sample.end(), 0.0) / static_cast<double>(c.n);
    std::vector<double> row = {mean, std::abs(mean - mu)};
    for (const auto k : distinct) {
      const double m = median_of_means(sample, MomConfig{k, derive_seed(s, kPartitionStream)});
      row.push_back(m);
      row.push_back(std::abs(m - mu));
    }
    return row;
  });

  std::ostringstream s;
  const auto emp = table.column("empirical_dev");
  append_quantiles(s, "empirical_dev", emp, c.deltas);
  for (const auto k : distinct) {
    const std::string name = "mom_k" + std::to_string(k) + "_dev";
    append_quantiles(s, name, table.column(name), c.deltas);
  }
  if (!c.k) {
    s << "quantile ratio empirical/mom:";
    for (std::size_t i = 0; i < c.deltas.size(); ++i) {
      const std::vector<double> one = {c.deltas[i]};
      const double e = quantile_report(emp, one)[0].value;
      const double m = quantile_report(table.column("mom_k" + std::to_string(ks[i]) + "_dev"), one)[0].value;
      s << "  delta=" << delta_label(c.deltas[i]) << " k=" << ks[i] << " ratio=" << shortest(m > 0.0 ? e / m : 0.0);
    }
    s << '\n';
  }
  table.summary = s.str();
  return table;
}

ExperimentTable regress_heavy(const ExperimentConfig& c, std::size_t threads) {
  const std::size_t k = groups_or(c, c.delta, kLossGroupConstant);
  const Eigen::VectorXd w_star = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(c.d));
  ExperimentTable table;
  table.columns = {"k", "selected", "erm_excess", "mom_excess"};
  run_trials(c, threads, table, [&](std::uint64_t s) {
    const Dataset data = gen_linear_model(c.n, c.d, w_star, IdentityCov{}, c.noise, s);
    RegressionConfig rc;
    rc.lambda = c.lambda;
    rc.k = k;
    rc.seed = derive_seed(s, kPartitionStream);
    const auto model = heavy_tail_regress(data, rc);
    const Eigen::VectorXd erm = fit_full_sample(data, c.lambda);
    return std::vector<double>{static_cast<double>(k), static_cast<double>(model.report.selected_index),
                               excess_loss(erm, data), excess_loss(model.weights, data)};
  });
  std::ostringstream s;
  const auto erm = table.column("erm_excess");
  const auto mom = table.column("mom_excess");
  append_quantiles(s, "erm_excess", erm, c.deltas);
  append_quantiles(s, "mom_excess", mom, c.deltas);
  table.summary = s.str();
  return table;
}

ExperimentTable lasso_heavy(const ExperimentConfig& c, std::size_t threads) {
  const std::size_t k = groups_or(c, c.delta, 18.0);
  if (c.n < 2 * k) throw ConfigError(0, "n", "need at least two rows per group");
  Eigen::VectorXd w_star = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(c.d));
  w_star.head(static_cast<Eigen::Index>(c.sparsity)).setOnes();
  const double sigma = std::sqrt(*dist_variance(c.noise));
  // Identity design: eta(Sigma^{1/2}, s) = 1.
  const double eta = 1.0;
  const double full_lambda = c.lambda > 0.0 ? c.lambda : heavy_lasso_lambda(sigma, eta, c.d, c.delta, c.n);

  ExperimentTable table;
  table.columns = {"k", "lambda", "selected", "mom_error", "full_error"};
  run_trials(c, threads, table, [&](std::uint64_t s) {
    const Dataset data = gen_linear_model(c.n, c.d, w_star, IdentityCov{}, c.noise, s);
    HeavyLassoConfig hc;
    hc.sigma = sigma > 0.0 ? sigma : 1.0;
    hc.eta = eta;
    hc.k = k;
    hc.delta = c.delta;
    if (c.lambda > 0.0) hc.lambda = c.lambda;
    hc.seed = derive_seed(s, kPartitionStream);
    hc.tol = 1e-9;
    const auto model = heavy_tail_lasso(data, hc);
    const Eigen::VectorXd full = lasso_fit(data.X, data.y, sigma > 0.0 ? full_lambda : 1e-12, 1e-9);
    return std::vector<double>{static_cast<double>(k), model.lambda, static_cast<double>(model.report.selected_index),
                               (model.weights - w_star).norm(), (full - w_star).norm()};
  });
  std::ostringstream s;
  append_quantiles(s, "mom_error", table.column("mom_error"), c.deltas);
  append_quantiles(s, "full_error", table.column("full_error"), c.deltas);
  table.summary = s.str();
  return table;
}

ExperimentTable cov_shrink(const ExperimentConfig& c, std::size_t threads) {
  const std::size_t k = groups_or(c, c.delta, 4.5);
  const double mu = *dist_mean(c.noise);
  const double var = *dist_variance(c.noise);
  const auto d = static_cast<Eigen::Index>(c.d);
  const Eigen::MatrixXd sigma = var * Eigen::MatrixXd::Identity(d, d);

  ExperimentTable table;
  table.columns = {"k", "lambda", "selected", "selected_dev", "full_dev", "shrunk_frobenius", "vacuous", "bound_holds"};
  run_trials(c, threads, table, [&](std::uint64_t s) {
    const auto draws = sample_scalar(c.noise, c.n * c.d, s);
    Eigen::MatrixXd X(static_cast<Eigen::Index>(c.n), d);
    for (Eigen::Index i = 0; i < X.rows(); ++i)
      for (Eigen::Index j = 0; j < d; ++j) X(i, j) = draws[static_cast<std::size_t>(i * d + j)] - mu;
    const auto est = estimate_covariance(X, k, c.lambda, derive_seed(s, kPartitionStream));
    const auto kolt = kolt_bound_check(est.sigma_lambda, sigma, est.sigma_hat, c.lambda);
    return std::vector<double>{static_cast<double>(k),
                               c.lambda,
                               static_cast<double>(est.report.selected_index),
                               spectral_norm(est.sigma_hat - sigma),
                               spectral_norm(empirical_second_moment(X) - sigma),
                               (est.sigma_lambda - sigma).norm(),
                               kolt.vacuous ? 1.0 : 0.0,
                               kolt.holds() ? 1.0 : 0.0};
  });
  std::ostringstream s;
  append_quantiles(s, "selected_dev", table.column("selected_dev"), c.deltas);
  append_quantiles(s, "full_dev", table.column("full_dev"), c.deltas);
  std::size_t checked = 0;
  std::size_t held = 0;
  for (const auto& row : table.rows) {
    if (row[6] == 0.0) {
      ++checked;
      if (row[7] == 1.0) ++held;
    }
  }
  s << "shrinkage bound: " << held << " of " << checked << " non-vacuous trials\n";
  table.summary = s.str();
  return table;
}

ExperimentTable geometry_tables() {
  struct Entry {
    const char* name;
    double (*c_alpha)(double);
  };
  const Entry entries[] = {
      {"median_distance_set", factors::median_distance_set},
      {"median_distance_space", factors::median_distance_space},
      {"geometric_median_set", factors::geometric_median_set},
      {"geometric_median_space", factors::geometric_median_space},
      {"minsker_hilbert", factors::minsker_hilbert},
  };
  ExperimentTable table;
  table.columns = {"alpha", "normalized_factor"};
  std::ostringstream s;
  s << "normalized approximation factors (inf over alpha of C_alpha / (1/2 - alpha)):\n";
  for (const auto& e : entries) {
    const auto best = minimize_normalized_factor(e.c_alpha);
    table.labels.emplace_back(e.name);
    table.rows.push_back({best.alpha, best.value});
    table.trial_seeds.push_back(0);
    char line[128];
    std::snprintf(line, sizeof line, "  %-24s %.4f at alpha=%.4f\n", e.name, best.value, best.alpha);
    s << line;
  }
  table.summary = s.str();
  return table;
}

}  // namespace

std::size_t nearest_rank(std::size_t m, double q) {
  if (m == 0) throw std::invalid_argument("empty input");
  double x = q * static_cast<double>(m);
  const double r = std::round(x);
  if (std::abs(x - r) <= 1e-9 * std::max(1.0, std::abs(x))) x = r;
  const auto rank = static_cast<std::size_t>(std::ceil(x));
  return std::clamp<std::size_t>(rank, 1, m);
}

std::vector<QuantileRow> quantile_report(std::span<const double> values, std::span<const double> deltas) {
  if (values.empty()) throw std::invalid_argument("empty input");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<QuantileRow> out;
  for (const double delta : deltas) {
    if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0, 1)");
    QuantileRow row;
    row.delta = delta;
    row.rank = nearest_rank(sorted.size(), 1.0 - delta);
    row.value = sorted[row.rank - 1];
    out.push_back(row);
  }
  return out;
}

std::vector<double> ExperimentTable::column(const std::string& name) const {
  const auto it = std::find(columns.begin(), columns.end(), name);
  if (it == columns.end()) throw std::out_of_range("no column " + name);
  const auto j = static_cast<std::size_t>(it - columns.begin());
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& row : rows) out.push_back(row[j]);
  return out;
}

ExperimentTable compute_experiment(const ExperimentConfig& config, std::size_t threads) {
  validate_config(config);
  switch (config.experiment) {
    case Experiment::MomVsEmpirical: return mom_vs_empirical(config, threads);
    case Experiment::RegressHeavy: return regress_heavy(config, threads);
    case Experiment::LassoHeavy: return lasso_heavy(config, threads);
    case Experiment::CovShrink: return cov_shrink(config, threads);
    case Experiment::GeometryTables: return geometry_tables();
  }
  throw ConfigError(0, "experiment", "unknown experiment");
}

std::string render_csv(const ExperimentConfig& config, const ExperimentTable& table) {
  std::ostringstream out;
  out << "# schema=" << kCsvSchema << " experiment=" << to_string(config.experiment) << " trials=" << config.trials
      << " seed=" << config.seed << '\n';
  const bool labelled = !table.labels.empty();
  out << (labelled ? "name" : "trial,seed");
  for (const auto& c : table.columns) out << ',' << c;
  out << '\n';
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    if (labelled) {
      out << table.labels[i];
    } else {
      out << i << ',' << table.trial_seeds[i];
    }
    for (const double v : table.rows[i]) out << ',' << shortest(v);
    out << '\n';
  }
  return out.str();
}

int run_experiment(const ExperimentConfig& config, std::size_t threads, std::ostream& out, std::ostream& err) {
  try {
    validate_config(config);
  } catch (const ConfigError& e) {
    err << "invalid config: " << e.what() << '\n';
    return kExitConfig;
  }
  std::ofstream file(config.output, std::ios::binary | std::ios::trunc);
  if (!file) {
    err << "cannot write output '" << config.output << "'\n";
    return kExitOutput;
  }
  ExperimentTable table;
  try {
    table = compute_experiment(config, threads);
  } catch (const ConfigError& e) {
    err << "invalid config: " << e.what() << '\n';
    return kExitConfig;
  }
  file << render_csv(config, table);
  file.flush();
  if (!file) {
    err << "failed writing '" << config.output << "'\n";
    return kExitOutput;
  }
  out << "experiment: " << to_string(config.experiment) << "  rows: " << table.rows.size()
      << "  seed: " << config.seed << "  output: " << config.output << '\n'
      << table.summary;
  return kExitOk;
}

}  // namespace heavytail
