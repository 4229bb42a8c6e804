#include "heavytail/geometric_median.hpp"

#include <algorithm>
#include <cmath>

namespace heavytail {

namespace {

struct Probe {
  double objective = 0.0;
  // Minimal-norm subgradient of the objective at x.
  Eigen::VectorXd subgradient;
  // Weiszfeld / Vardi-Zhang successor of x.
  Eigen::VectorXd next;
};

Probe probe(const std::vector<Eigen::VectorXd>& points, const Eigen::VectorXd& x, double coincide) {
  const auto dim = x.size();
  Eigen::VectorXd pull = Eigen::VectorXd::Zero(dim);      // sum (x - p)/|x - p|
  Eigen::VectorXd weighted = Eigen::VectorXd::Zero(dim);  // sum p/|x - p|
  double weight_sum = 0.0;
  double objective = 0.0;
  double multiplicity = 0.0;
  for (const auto& p : points) {
    const double d = (x - p).norm();
    objective += d;
    if (d <= coincide) {
      multiplicity += 1.0;
      continue;
    }
    pull += (x - p) / d;
    weighted += p / d;
    weight_sum += 1.0 / d;
  }

  Probe out;
  out.objective = objective;
  const double r = pull.norm();
  if (multiplicity == 0.0) {
    out.subgradient = pull;
  } else {
    out.subgradient = r > multiplicity ? Eigen::VectorXd(pull * ((r - multiplicity) / r))
                                       : Eigen::VectorXd(Eigen::VectorXd::Zero(dim));
  }
  if (weight_sum == 0.0) {
    out.next = x;  // every point coincides with x
  } else {
    const Eigen::VectorXd t = weighted / weight_sum;
    const double step = (multiplicity == 0.0 || r == 0.0) ? 0.0 : std::min(1.0, multiplicity / r);
    out.next = (1.0 - step) * t + step * x;
  }
  return out;
}

}  // namespace

double sum_of_distances(const std::vector<Eigen::VectorXd>& points, const Eigen::VectorXd& x) {
  double s = 0.0;
  for (const auto& p : points) s += (x - p).norm();
  return s;
}

GeometricMedianResult geometric_median_euclidean(const std::vector<Eigen::VectorXd>& points, double tol,
                                                 std::size_t max_iter) {
  if (points.empty()) throw std::invalid_argument("geometric median of an empty set");
  if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
  const auto dim = points.front().size();
  double diameter = 0.0;
  double scale = 0.0;
  for (const auto& p : points) {
    if (p.size() != dim) throw std::invalid_argument("points must share one dimension");
    if (!p.allFinite()) throw std::invalid_argument("non-finite point");
    scale = std::max(scale, p.cwiseAbs().maxCoeff());
  }
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = i + 1; j < points.size(); ++j) diameter = std::max(diameter, (points[i] - points[j]).norm());
  const double coincide = 1e-14 * std::max(1.0, scale);

  // Start at the best of the centroid and the anchors; all are in the convex
  // hull, as is the minimizer, so |x - x*| <= diameter bounds the gap.
  Eigen::VectorXd x = Eigen::VectorXd::Zero(dim);
  for (const auto& p : points) x += p;
  x /= static_cast<double>(points.size());
  double best = sum_of_distances(points, x);
  for (const auto& p : points) {
    const double f = sum_of_distances(points, p);
    if (f < best) {
      best = f;
      x = p;
    }
  }

  GeometricMedianResult result;
  Probe current = probe(points, x, coincide);
  Eigen::VectorXd best_point = x;
  double best_objective = current.objective;
  result.objective_trace.push_back(current.objective);
  for (std::size_t iter = 0;; ++iter) {
    const double gap = current.subgradient.norm() * diameter;
    if (gap <= tol * (1.0 + current.objective)) {
      result.point = x;
      result.objective = current.objective;
      result.gap_bound = gap;
      result.iterations = iter;
      return result;
    }
    if (iter == max_iter) throw GeometricMedianNotConverged(best_point, best_objective, gap);
    // Near the optimum the objective moves below its rounding error, so steps
    // are taken unconditionally and the trace keeps the best value so far.
    x = current.next;
    current = probe(points, x, coincide);
    if (current.objective < best_objective) {
      best_objective = current.objective;
      best_point = x;
    }
    result.objective_trace.push_back(best_objective);
  }
}

}  // namespace heavytail
