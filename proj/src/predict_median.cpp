#include "heavytail/predict_median.hpp"

#include <cmath>
#include <stdexcept>

#include "heavytail/median.hpp"

namespace heavytail {

double median_prediction(const PredictorEnsemble& ensemble, const Eigen::VectorXd& x) {
  if (ensemble.predictors.empty()) throw std::invalid_argument("empty ensemble");
  std::vector<double> values;
  values.reserve(ensemble.k());
  for (const auto& f : ensemble.predictors) {
    const double v = f(x);
    if (!std::isfinite(v)) throw std::domain_error("non-finite prediction");
    values.push_back(v);
  }
  return lower_median(values);
}

double aggregate_risk_bound(double gamma, double ell_bar) {
  if (!(gamma > 0.0 && gamma <= 0.5)) throw std::invalid_argument("gamma must lie in (0, 1/2]");
  if (!(ell_bar >= 0.0)) throw std::invalid_argument("ell_bar must be nonnegative");
  return (1.0 / (2.0 * gamma) + 1.0) * ell_bar;
}

double squared_link(double p, double y) { return (p - y) * (p - y); }

double absolute_link(double p, double y) { return std::abs(p - y); }

namespace {

template <typename Predict>
RiskEstimate mean_loss(Predict&& predict, const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const Link& link) {
  const auto m = X.rows();
  if (m == 0 || m != y.size()) throw std::invalid_argument("row count of X must equal length of y");
  double sum = 0.0;
  double sum_sq = 0.0;
  for (Eigen::Index i = 0; i < m; ++i) {
    const double loss = link(predict(Eigen::VectorXd(X.row(i).transpose())), y(i));
    if (!(loss >= 0.0) || !std::isfinite(loss)) throw std::domain_error("link must return a finite nonnegative loss");
    sum += loss;
    sum_sq += loss * loss;
  }
  const auto count = static_cast<double>(m);
  RiskEstimate r;
  r.mean = sum / count;
  if (m > 1) {
    const double var = std::max(0.0, (sum_sq - count * r.mean * r.mean) / (count - 1.0));
    r.standard_error = std::sqrt(var / count);
  }
  return r;
}

}  // namespace

RiskEstimate estimate_risk(const Predictor& predictor, const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                           const Link& link) {
  return mean_loss(
      [&](const Eigen::VectorXd& x) {
        const double v = predictor(x);
        if (!std::isfinite(v)) throw std::domain_error("non-finite prediction");
        return v;
      },
      X, y, link);
}

RiskEstimate estimate_median_risk(const PredictorEnsemble& ensemble, const Eigen::MatrixXd& X,
                                  const Eigen::VectorXd& y, const Link& link) {
  return mean_loss([&](const Eigen::VectorXd& x) { return median_prediction(ensemble, x); }, X, y, link);
}

}  // namespace heavytail
