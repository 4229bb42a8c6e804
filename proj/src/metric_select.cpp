#include "heavytail/metric_select.hpp"

#include <algorithm>

#include "heavytail/median.hpp"

namespace heavytail {

std::string_view to_string(Procedure p) {
  switch (p) {
    case Procedure::MedianDistanceSet: return "median_distance_set";
    case Procedure::MedianDistanceNoisy: return "median_distance_noisy";
    case Procedure::GeometricMedianSet: return "geometric_median_set";
    case Procedure::GeometricMedianSpace: return "geometric_median_space";
  }
  return "unknown";
}

bool SelectionReport::is_tie(std::size_t i) const {
  return std::find(tie_indices.begin(), tie_indices.end(), i) != tie_indices.end();
}

std::size_t majority_count(std::size_t k, double alpha) {
  if (!(alpha >= 0.0 && alpha < 0.5)) throw std::invalid_argument("alpha must lie in [0, 1/2)");
  double threshold = static_cast<double>(k) * (0.5 + alpha);
  const double nearest = std::round(threshold);
  if (std::abs(threshold - nearest) <= 1e-9 * std::max(1.0, threshold)) threshold = nearest;
  return static_cast<std::size_t>(std::floor(threshold)) + 1;
}

double delta_radius_from_distances(std::span<const double> distances, double alpha) {
  if (distances.empty()) throw std::invalid_argument("empty candidate set");
  const std::size_t need = majority_count(distances.size(), alpha);
  // need <= k always holds because k(1/2 + alpha) < k.
  return order_statistic(distances, std::min(need, distances.size()));
}

SelectionReport report_from_radii(std::vector<double> radii, Procedure procedure) {
  if (radii.empty()) throw std::invalid_argument("empty candidate set");
  SelectionReport report;
  report.procedure = procedure;
  const double best = *std::min_element(radii.begin(), radii.end());
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (radii[i] == best) report.tie_indices.push_back(i);
  }
  report.selected_index = report.tie_indices.front();
  report.radii = std::move(radii);
  return report;
}

SelectionReport select_median_distance_table(const Eigen::MatrixXd& table) {
  const auto k = table.rows();
  if (k == 0 || table.cols() != k) throw std::invalid_argument("distance table must be square and nonempty");
  std::vector<double> radii(static_cast<std::size_t>(k));
  std::vector<double> row(static_cast<std::size_t>(k));
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = 0; j < k; ++j) row[j] = checked_distance(table(i, j));
    radii[i] = delta_radius_from_distances(row, 0.0);
  }
  return report_from_radii(std::move(radii), Procedure::MedianDistanceSet);
}

SelectionReport select_median_noisy_table(const Eigen::MatrixXd& responses, SelfTerm self) {
  const auto k = responses.rows();
  if (k == 0 || responses.cols() != k) throw std::invalid_argument("oracle table must be square and nonempty");
  std::vector<double> radii(static_cast<std::size_t>(k));
  std::vector<double> column;
  column.reserve(static_cast<std::size_t>(k));
  for (Eigen::Index i = 0; i < k; ++i) {
    column.clear();
    for (Eigen::Index j = 0; j < k; ++j) {
      if (self == SelfTerm::Exclude && i == j) continue;
      const double r = responses(j, i);
      if (!std::isfinite(r)) throw std::domain_error("non-finite oracle response");
      column.push_back(r);
    }
    // A lone candidate with its own oracle excluded has nothing to disagree with.
    radii[i] = column.empty() ? 0.0 : lower_median(column);
  }
  return report_from_radii(std::move(radii), Procedure::MedianDistanceNoisy);
}

SelectionReport select_geometric_median_table(const Eigen::MatrixXd& table) {
  const auto k = table.rows();
  if (k == 0 || table.cols() != k) throw std::invalid_argument("distance table must be square and nonempty");
  std::vector<double> sums(static_cast<std::size_t>(k), 0.0);
  for (Eigen::Index i = 0; i < k; ++i) {
    double s = 0.0;
    for (Eigen::Index j = 0; j < k; ++j) s += checked_distance(table(i, j));
    sums[i] = s;
  }
  return report_from_radii(std::move(sums), Procedure::GeometricMedianSet);
}

}  // namespace heavytail
