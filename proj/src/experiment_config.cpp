#include "heavytail/experiment_config.hpp"

#include <algorithm>
#include <charconv>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

namespace heavytail {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

template <typename T>
T parse_number(std::string_view text, std::size_t line, const std::string& field) {
  const std::string t = trim(text);
  T value{};
  const auto* end = t.data() + t.size();
  const auto [ptr, ec] = std::from_chars(t.data(), end, value);
  if (t.empty() || ec != std::errc{} || ptr != end) throw ConfigError(line, field, "cannot parse '" + t + "'");
  return value;
}

std::vector<double> parse_list(std::string_view text, std::size_t line, const std::string& field) {
  std::vector<double> out;
  std::string item;
  std::istringstream in{std::string(text)};
  while (std::getline(in, item, ',')) out.push_back(parse_number<double>(item, line, field));
  if (out.empty()) throw ConfigError(line, field, "empty list");
  return out;
}

}  // namespace

ConfigError::ConfigError(std::size_t line_, std::string field_, const std::string& message)
    : std::runtime_error((line_ > 0 ? "line " + std::to_string(line_) + ": " : std::string()) + field_ + ": " +
                         message),
      line(line_),
      field(std::move(field_)) {}

std::string to_string(Experiment e) {
  switch (e) {
    case Experiment::MomVsEmpirical: return "mom_vs_empirical";
    case Experiment::RegressHeavy: return "regress_heavy";
    case Experiment::LassoHeavy: return "lasso_heavy";
    case Experiment::CovShrink: return "cov_shrink";
    case Experiment::GeometryTables: return "geometry_tables";
  }
  return "unknown";
}

std::optional<Experiment> parse_experiment(std::string_view text) {
  std::string key;
  for (const char c : text)
    if (c != '_') key.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  for (const auto e : {Experiment::MomVsEmpirical, Experiment::RegressHeavy, Experiment::LassoHeavy,
                       Experiment::CovShrink, Experiment::GeometryTables}) {
    std::string name = to_string(e);
    name.erase(std::remove(name.begin(), name.end(), '_'), name.end());
    if (name == key) return e;
  }
  return std::nullopt;
}

ExperimentConfig parse_config(std::istream& in) {
  ExperimentConfig config;
  std::set<std::string> seen;
  std::string raw;
  for (std::size_t line = 1; std::getline(in, raw); ++line) {
    const std::string body = trim(std::string_view(raw).substr(0, raw.find('#')));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) throw ConfigError(line, body, "expected key = value");
    const std::string key = trim(std::string_view(body).substr(0, eq));
    const std::string value = trim(std::string_view(body).substr(eq + 1));
    if (!seen.insert(key).second) throw ConfigError(line, key, "duplicate key");
    if (value.empty()) throw ConfigError(line, key, "missing value");

    if (key == "experiment") {
      const auto e = parse_experiment(value);
      if (!e) throw ConfigError(line, key, "unknown experiment '" + value + "'");
      config.experiment = *e;
    } else if (key == "trials") {
      config.trials = parse_number<std::size_t>(value, line, key);
    } else if (key == "seed") {
      config.seed = parse_number<std::uint64_t>(value, line, key);
    } else if (key == "n") {
      config.n = parse_number<std::size_t>(value, line, key);
    } else if (key == "d") {
      config.d = parse_number<std::size_t>(value, line, key);
    } else if (key == "k") {
      config.k = parse_number<std::size_t>(value, line, key);
    } else if (key == "delta") {
      config.delta = parse_number<double>(value, line, key);
    } else if (key == "k_constant") {
      config.k_constant = parse_number<double>(value, line, key);
    } else if (key == "lambda") {
      config.lambda = parse_number<double>(value, line, key);
    } else if (key == "sparsity") {
      config.sparsity = parse_number<std::size_t>(value, line, key);
    } else if (key == "noise") {
      try {
        config.noise = parse_dist_spec(value);
      } catch (const std::exception& e) {
        throw ConfigError(line, key, e.what());
      }
    } else if (key == "deltas") {
      config.deltas = parse_list(value, line, key);
    } else if (key == "output") {
      config.output = value;
    } else {
      throw ConfigError(line, key, "unknown key");
    }
  }
  return config;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(0, "config", "cannot open '" + path + "'");
  return parse_config(in);
}

void validate_config(const ExperimentConfig& c) {
  if (c.trials < 1) throw ConfigError(0, "trials", "must be at least 1");
  if (c.n < 1) throw ConfigError(0, "n", "must be positive");
  if (c.d < 1) throw ConfigError(0, "d", "must be positive");
  if (c.k && *c.k < 1) throw ConfigError(0, "k", "must be positive");
  if (c.k && *c.k > c.n) throw ConfigError(0, "k", "more groups than samples");
  if (!(c.delta > 0.0 && c.delta < 1.0)) throw ConfigError(0, "delta", "must lie in (0, 1)");
  if (c.k_constant && !(*c.k_constant > 0.0)) throw ConfigError(0, "k_constant", "must be positive");
  if (!(c.lambda >= 0.0)) throw ConfigError(0, "lambda", "must be nonnegative");
  for (const double q : c.deltas)
    if (!(q > 0.0 && q < 1.0)) throw ConfigError(0, "deltas", "entries must lie in (0, 1)");
  if (c.output.empty()) throw ConfigError(0, "output", "missing output path");
  try {
    validate(c.noise);
  } catch (const std::exception& e) {
    throw ConfigError(0, "noise", e.what());
  }
  if (c.experiment == Experiment::LassoHeavy && (c.sparsity < 1 || c.sparsity > c.d))
    throw ConfigError(0, "sparsity", "must lie in 1..d");
  const bool needs_variance = c.experiment == Experiment::CovShrink || c.experiment == Experiment::LassoHeavy;
  if (c.experiment != Experiment::GeometryTables && !dist_mean(c.noise))
    throw ConfigError(0, "noise", "mean undefined");
  if (needs_variance && !dist_variance(c.noise)) throw ConfigError(0, "noise", "variance must be finite");
}

}  // namespace heavytail
