#pragma once

// Robust distance approximation: pick one of k candidate points that is close
// to an unknown target whenever a majority of the candidates is close to it.
//
// Candidates are an ordered multiset of opaque points. Distances come either
// from an exact (pseudo)metric or from per-candidate noisy oracles. All
// selection routines reduce to a k x k table and pick the lowest index
// attaining the minimal score. Indices are 0-based throughout.

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace heavytail {

template <typename Point>
using CandidateSet = std::vector<Point>;

enum class Procedure {
  MedianDistanceSet,
  MedianDistanceNoisy,
  GeometricMedianSet,
  GeometricMedianSpace,
};

std::string_view to_string(Procedure p);

struct SelectionReport {
  std::size_t selected_index = 0;
  std::vector<double> radii;
  std::vector<std::size_t> tie_indices;
  Procedure procedure = Procedure::MedianDistanceSet;

  bool is_tie(std::size_t i) const;
};

// Whether the noisy median for candidate i includes the oracle of i itself.
// The generic noisy procedure includes it; the regression selection step
// excludes it.
enum class SelfTerm { Include, Exclude };

// Constants of the generic analysis. They are not optimized; callers may pass
// other fractions where an operation accepts one.
namespace constants {
inline constexpr double kApproxSuccess = 2.0 / 3.0;
inline constexpr double kOracleAccuracy = 8.0 / 9.0;
inline constexpr double kNoisyAlpha = 5.0 / 36.0;
inline constexpr double kNoisyFactor = 9.0;
inline constexpr double kMedianSetFactor = 3.0;
inline constexpr double kMedianSpaceFactor = 2.0;
}  // namespace constants

// Minimal count c with c > k * (1/2 + alpha). The product is snapped to the
// nearest integer when it is within rounding distance of one.
std::size_t majority_count(std::size_t k, double alpha);

// Smallest r such that more than k(1/2 + alpha) of the given distances are <= r.
double delta_radius_from_distances(std::span<const double> distances, double alpha);

// Builds a report from per-candidate scores: lowest-index argmin plus tie set.
SelectionReport report_from_radii(std::vector<double> radii, Procedure procedure);

// table(i, j) = rho(w_i, w_j). Radii are the closed-ball majority radii.
SelectionReport select_median_distance_table(const Eigen::MatrixXd& table);

// responses(j, i) = DIST^j(w_i). radii[i] = lower median over j.
SelectionReport select_median_noisy_table(const Eigen::MatrixXd& responses,
                                          SelfTerm self = SelfTerm::Include);

// radii[i] = sum_j table(i, j).
SelectionReport select_geometric_median_table(const Eigen::MatrixXd& table);

// Throws std::domain_error("invalid metric value") for negative or non-finite d.
inline double checked_distance(double d) {
  if (!std::isfinite(d) || d < 0.0) throw std::domain_error("invalid metric value");
  return d;
}

template <typename Point, typename Metric>
Eigen::MatrixXd distance_table(const CandidateSet<Point>& points, Metric&& metric) {
  const auto k = static_cast<Eigen::Index>(points.size());
  Eigen::MatrixXd table = Eigen::MatrixXd::Zero(k, k);
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = i + 1; j < k; ++j) {
      const double d = checked_distance(metric(points[i], points[j]));
      table(i, j) = d;
      table(j, i) = d;
    }
  }
  return table;
}

template <typename Point, typename Metric>
double delta_radius(const CandidateSet<Point>& points, const Point& center, double alpha,
                    Metric&& metric) {
  if (points.empty()) throw std::invalid_argument("empty candidate set");
  std::vector<double> dist;
  dist.reserve(points.size());
  for (const auto& p : points) dist.push_back(checked_distance(metric(center, p)));
  return delta_radius_from_distances(dist, alpha);
}

template <typename Point, typename Metric>
SelectionReport select_median_distance_set(const CandidateSet<Point>& points, Metric&& metric) {
  if (points.empty()) throw std::invalid_argument("empty candidate set");
  return select_median_distance_table(distance_table(points, metric));
}

// Oracle signature: double(std::size_t j, const Point& v) estimating rho(v, w_j).
template <typename Point, typename Oracle>
SelectionReport select_median_distance_noisy(const CandidateSet<Point>& points, Oracle&& oracle,
                                             SelfTerm self = SelfTerm::Include) {
  if (points.empty()) throw std::invalid_argument("empty candidate set");
  const auto k = static_cast<Eigen::Index>(points.size());
  Eigen::MatrixXd responses(k, k);
  for (Eigen::Index j = 0; j < k; ++j) {
    for (Eigen::Index i = 0; i < k; ++i) {
      const double r = oracle(static_cast<std::size_t>(j), points[i]);
      if (!std::isfinite(r)) throw std::domain_error("non-finite oracle response");
      responses(j, i) = r;
    }
  }
  return select_median_noisy_table(responses, self);
}

template <typename Point, typename Metric>
SelectionReport select_geometric_median_set(const CandidateSet<Point>& points, Metric&& metric) {
  if (points.empty()) throw std::invalid_argument("empty candidate set");
  return select_geometric_median_table(distance_table(points, metric));
}

// rho(selected, w_opt) / Delta_W(w_opt, alpha); 0/0 -> 0, x/0 -> +inf.
template <typename Point, typename Metric>
double approximation_factor(const CandidateSet<Point>& points, const Point& w_opt,
                            const Point& selected, double alpha, Metric&& metric) {
  const double num = checked_distance(metric(selected, w_opt));
  const double den = delta_radius(points, w_opt, alpha, metric);
  if (den == 0.0) return num == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return num / den;
}

}  // namespace heavytail
