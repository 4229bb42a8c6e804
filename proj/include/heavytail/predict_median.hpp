#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace heavytail {

using Predictor = std::function<double(const Eigen::VectorXd&)>;
// Loss g(p, y), convex in p and nonnegative.
using Link = std::function<double(double, double)>;

struct PredictorEnsemble {
  std::vector<Predictor> predictors;
  double gamma = 0.5;  // fraction margin in (0, 1/2]

  std::size_t k() const { return predictors.size(); }
};

// Lower median of the k predictions at x. Throws on a non-finite prediction
// or an empty ensemble.
double median_prediction(const PredictorEnsemble& ensemble, const Eigen::VectorXd& x);

// (1 / (2 gamma) + 1) * ell_bar.
double aggregate_risk_bound(double gamma, double ell_bar);

double squared_link(double p, double y);
double absolute_link(double p, double y);

struct RiskEstimate {
  double mean = 0.0;
  double standard_error = 0.0;
};

// Mean loss of a predictor over the rows of X with targets y, with the
// standard error of that mean. Throws on a negative or non-finite loss.
RiskEstimate estimate_risk(const Predictor& predictor, const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                           const Link& link);

RiskEstimate estimate_median_risk(const PredictorEnsemble& ensemble, const Eigen::MatrixXd& X,
                                  const Eigen::VectorXd& y, const Link& link);

}  // namespace heavytail
