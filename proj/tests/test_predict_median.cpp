#include <gtest/gtest.h>

#include <cmath>

#include "heavytail/predict_median.hpp"

using namespace heavytail;

namespace {
Predictor constant(double c) {
  return [c](const Eigen::VectorXd&) { return c; };
}
}  // namespace

TEST(MedianPrediction, Examples) {
  const Eigen::VectorXd x = Eigen::VectorXd::Zero(1);
  EXPECT_DOUBLE_EQ(median_prediction({{constant(1), constant(2), constant(10)}, 0.5}, x), 2.0);
  EXPECT_DOUBLE_EQ(median_prediction({{constant(4)}, 0.5}, x), 4.0);
  EXPECT_DOUBLE_EQ(median_prediction({{constant(0), constant(0), constant(5), constant(5)}, 0.5}, x), 0.0);
}

TEST(MedianPrediction, Errors) {
  const Eigen::VectorXd x = Eigen::VectorXd::Zero(1);
  EXPECT_THROW(median_prediction({{constant(1), constant(std::nan(""))}, 0.5}, x), std::domain_error);
  EXPECT_THROW(median_prediction({{}, 0.5}, x), std::invalid_argument);
}

TEST(MedianPrediction, BreakdownBelowHalf) {
  const Eigen::VectorXd x = Eigen::VectorXd::Ones(2);
  for (std::size_t k = 1; k <= 9; ++k) {
    const std::size_t bad = (k + 1) / 2 - 1;  // strictly fewer than ceil(k/2)
    for (double junk : {-1e9, 1e9, 3.0}) {
      PredictorEnsemble e;
      for (std::size_t i = 0; i < k; ++i) e.predictors.push_back(i < bad ? constant(junk + i) : constant(7.0));
      EXPECT_DOUBLE_EQ(median_prediction(e, x), 7.0);
    }
  }
}

TEST(AggregateRiskBound, Examples) {
  EXPECT_DOUBLE_EQ(aggregate_risk_bound(0.5, 1.0), 2.0);
  EXPECT_DOUBLE_EQ(aggregate_risk_bound(0.3, 0.0), 0.0);
  EXPECT_DOUBLE_EQ(aggregate_risk_bound(0.25, 2.0), 6.0);
  EXPECT_THROW(aggregate_risk_bound(0.0, 1.0), std::invalid_argument);
  EXPECT_THROW(aggregate_risk_bound(0.6, 1.0), std::invalid_argument);
  EXPECT_THROW(aggregate_risk_bound(0.5, -1.0), std::invalid_argument);
}

TEST(Links, Values) {
  EXPECT_DOUBLE_EQ(squared_link(3, 1), 4.0);
  EXPECT_DOUBLE_EQ(absolute_link(1, 3), 2.0);
}

TEST(RiskEstimate, MeanAndStandardError) {
  Eigen::MatrixXd X(4, 1);
  X << 0, 1, 2, 3;
  const Eigen::VectorXd y = Eigen::VectorXd::Zero(4);
  const auto r = estimate_risk([](const Eigen::VectorXd& x) { return x(0); }, X, y, squared_link);
  EXPECT_DOUBLE_EQ(r.mean, 3.5);  // (0 + 1 + 4 + 9) / 4
  const double var = ((0 - 3.5) * (0 - 3.5) + (1 - 3.5) * (1 - 3.5) + (4 - 3.5) * (4 - 3.5) + (9 - 3.5) * (9 - 3.5)) / 3;
  EXPECT_NEAR(r.standard_error, std::sqrt(var / 4), 1e-14);
  EXPECT_THROW(estimate_risk(constant(0), X, Eigen::VectorXd::Zero(3), squared_link), std::invalid_argument);
  EXPECT_THROW(estimate_risk(constant(0), X, y, [](double, double) { return -1.0; }), std::domain_error);
}
