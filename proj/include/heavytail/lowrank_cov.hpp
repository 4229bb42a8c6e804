#pragma once

// Covariance estimation under heavy tails: pick one subsample second-moment
// matrix by median distance in spectral norm, then shrink its spectrum.

#include <cstddef>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "heavytail/metric_select.hpp"

namespace heavytail {

// Largest absolute eigenvalue. Throws std::invalid_argument when M is not
// symmetric within 1e-9 (relative to its largest entry).
double spectral_norm(const Eigen::MatrixXd& M);

struct CovSelection {
  Eigen::MatrixXd sigma_hat;
  SelectionReport report;
  std::vector<Eigen::MatrixXd> group_moments;
};

// Per-group X^T X / m on a seeded partition, selected by median distance
// under rho(A, B) = ||A - B||_2.
CovSelection cov_median_select(const Eigen::MatrixXd& samples, std::size_t k, std::uint64_t seed);

// Minimizer of 1/2 ||sigma_hat - A||_F^2 + lambda ||A||_tr for PSD sigma_hat:
// eigenvalues mu become max(mu - lambda, 0). Throws "input not PSD" when an
// eigenvalue is below -1e-9.
Eigen::MatrixXd trace_norm_shrink(const Eigen::MatrixXd& sigma_hat, double lambda);

struct CovEstimate {
  Eigen::MatrixXd sigma_hat;
  SelectionReport report;
  double lambda = 0.0;
  Eigen::MatrixXd sigma_lambda;
};

CovEstimate estimate_covariance(const Eigen::MatrixXd& samples, std::size_t k, double lambda, std::uint64_t seed);

// c (d log(1/delta) / n)^{1 / (2 (1 + 1/eta))}.
double shrinkage_level(double c, std::size_t d, std::size_t n, double delta, double eta);

// Best rank-r approximations of a symmetric PSD matrix, r = 1..d.
std::vector<Eigen::MatrixXd> rank_truncations(const Eigen::MatrixXd& sigma);

// Numerical rank: eigenvalues above d * eps * largest.
std::size_t numerical_rank(const Eigen::MatrixXd& A);

struct KoltCandidate {
  std::size_t rank = 0;
  double lhs = 0.0;  // 1/2 ||sigma_lambda - sigma||_F^2
  double rhs = 0.0;  // 1/2 ||A - sigma||_F^2 + 1/2 (sqrt 2 + 1)^2 lambda^2 rank(A)
  double margin() const { return rhs - lhs; }
};

struct KoltReport {
  bool vacuous = false;  // lambda < ||sigma_hat - sigma||_2
  double deviation = 0.0;
  std::vector<KoltCandidate> candidates;

  bool holds(double slack = 1e-12) const;
};

// Oracle inequality check. With an empty candidate list the default set is
// sigma itself followed by its rank truncations.
KoltReport kolt_bound_check(const Eigen::MatrixXd& sigma_lambda, const Eigen::MatrixXd& sigma_true,
                            const Eigen::MatrixXd& sigma_hat, double lambda,
                            std::vector<Eigen::MatrixXd> candidates = {});

}  // namespace heavytail
