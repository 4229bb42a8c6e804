#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace heavytail {

struct GeometricMedianResult {
  Eigen::VectorXd point;
  double objective = 0.0;
  // Upper bound on objective - min objective at the returned point.
  double gap_bound = 0.0;
  std::size_t iterations = 0;
  // Best objective so far, after the start point and after every step.
  std::vector<double> objective_trace;
};

class GeometricMedianNotConverged : public std::runtime_error {
 public:
  GeometricMedianNotConverged(Eigen::VectorXd best, double objective, double gap)
      : std::runtime_error("geometric median did not converge (objective " + std::to_string(objective) +
                           ", gap bound " + std::to_string(gap) + ")"),
        best_iterate(std::move(best)),
        best_objective(objective),
        gap_bound(gap) {}

  Eigen::VectorXd best_iterate;
  double best_objective;
  double gap_bound;
};

// Sum of Euclidean distances from x to every point.
double sum_of_distances(const std::vector<Eigen::VectorXd>& points, const Eigen::VectorXd& x);

// Minimizes the sum of Euclidean distances to `points` with Weiszfeld
// iterations (Vardi-Zhang step at anchor points). Stops once a subgradient
// certificate bounds the optimality gap by tol * (1 + objective). The objective
// never increases from one accepted iterate to the next.
GeometricMedianResult geometric_median_euclidean(const std::vector<Eigen::VectorXd>& points,
                                                 double tol = 1e-10, std::size_t max_iter = 10000);

}  // namespace heavytail
