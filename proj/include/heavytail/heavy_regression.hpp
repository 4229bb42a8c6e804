#pragma once

// Least squares / ridge regression for heavy-tailed data: fit k candidates on
// disjoint subsamples, then keep the candidate whose median distance to the
// others, measured in each group's second-moment geometry, is smallest.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "heavytail/dataset.hpp"
#include "heavytail/metric_select.hpp"

namespace heavytail {

enum class SigmaVariant { PerGroup, Pooled };

// Group-count constants from the two loss-minimization guarantees.
inline constexpr double kLossGroupConstant = 18.0;
inline constexpr double kLoss2GroupConstant = 45.0;

struct RegressionConfig {
  double lambda = 0.0;
  // Exactly one of k and delta must be set. With delta, k = ceil(C ln(1/delta)).
  std::optional<std::size_t> k;
  std::optional<double> delta;
  double k_constant = kLossGroupConstant;
  SigmaVariant variant = SigmaVariant::PerGroup;
  // The selection step skips j = i by default.
  SelfTerm self_term = SelfTerm::Exclude;
  std::uint64_t seed = 0;

  // Validates the k/delta choice and returns the group count.
  std::size_t group_count() const;
};

struct RegressionModel {
  Eigen::VectorXd weights;
  SelectionReport report;
  Eigen::MatrixXd group_weights;             // k x d, row i is candidate i
  std::vector<Eigen::MatrixXd> group_sigmas;  // k per-group matrices, or one pooled
};

// Solves (Sigma_g + lambda I) w = X^T y / m with Sigma_g = X^T X / m. For a
// singular system the minimum-norm solution is returned.
Eigen::VectorXd fit_group_least_squares(const Eigen::MatrixXd& Xg, const Eigen::VectorXd& yg, double lambda);

// X^T X / m, exactly symmetric.
Eigen::MatrixXd empirical_second_moment(const Eigen::MatrixXd& Xg);

// Selection over fitted candidates. responses(j, i) is the quadratic form
// (w_i - w_j)^T (S_j + lambda I) (w_i - w_j); `sigmas` holds either one matrix
// per candidate or a single pooled matrix.
SelectionReport select_regression_candidate(const Eigen::MatrixXd& group_weights,
                                            std::span<const Eigen::MatrixXd> sigmas, double lambda,
                                            SelfTerm self = SelfTerm::Exclude);

RegressionModel heavy_tail_regress(const Dataset& data, const RegressionConfig& config);

// Plain least squares / ridge on the whole sample.
Eigen::VectorXd fit_full_sample(const Dataset& data, double lambda);

// 1/2 (w - w*)^T Sigma (w - w*): excess squared loss under the 1/2 convention.
double excess_loss(const Eigen::VectorXd& w, const GroundTruth& truth);
// Throws std::invalid_argument("missing ground truth") without truth.
double excess_loss(const Eigen::VectorXd& w, const Dataset& data);
// Minimal population loss: noise variance / 2.
double optimal_loss(const GroundTruth& truth);

// Smallest m with m >= 80 r^2 ln(4 m^2 / delta), by fixed-point iteration.
// Diagnostic only.
std::size_t chernoff_group_size(double r_lambda, double delta);

// Monte Carlo estimate of E||grad loss(Z, w*)||^2 = E[(x^T w* - y)^2 ||x||^2]
// from a dataset that carries truth.
double gradient_second_moment(const Dataset& data);

// CSV: "index,r,selected" per candidate, then "weights,<w1>,...,<wd>".
void write_model_csv(std::ostream& out, const RegressionModel& model);

}  // namespace heavytail
