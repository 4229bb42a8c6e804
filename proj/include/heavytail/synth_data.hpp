#pragma once

// Seeded generators for heavy-tailed scalars, covariate designs and
// linear-model datasets. Every output is a pure function of its arguments.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "heavytail/dataset.hpp"
#include "heavytail/rng.hpp"

namespace heavytail {

struct Gaussian {
  double mean = 0.0;
  double sd = 1.0;
};
struct StudentT {
  double dof = 3.0;
};
// Pareto(shape, scale) on [scale, inf). `centered` subtracts the analytic mean.
struct Pareto {
  double shape = 3.0;
  double scale = 1.0;
  bool centered = false;
};
struct LogNormal {
  double mu = 0.0;
  double sigma = 1.0;
};
// Finite discrete law; the name follows the common two-atom use.
struct TwoPoint {
  std::vector<double> values;
  std::vector<double> probs;
};

using DistSpec = std::variant<Gaussian, StudentT, Pareto, LogNormal, TwoPoint>;

// Throws std::invalid_argument on invalid parameters.
void validate(const DistSpec& spec);
std::optional<double> dist_mean(const DistSpec& spec);
std::optional<double> dist_variance(const DistSpec& spec);

// Grammar (case-insensitive family names, no spaces required):
//   gaussian(mean, sd) | normal(mean, sd) | student_t(dof) | t(dof)
//   pareto(shape, scale[, centered]) | lognormal(mu, sigma)
//   twopoint(v1:p1, v2:p2, ...)
DistSpec parse_dist_spec(std::string_view text);
std::string format_dist_spec(const DistSpec& spec);

double draw(const DistSpec& spec, Rng& rng);
double draw_standard_normal(Rng& rng);

// n i.i.d. draws. Throws for a centered Pareto with shape <= 1.
std::vector<double> sample_scalar(const DistSpec& spec, std::size_t n, std::uint64_t seed);

struct IdentityCov {};
struct ExplicitCov {
  Eigen::MatrixXd sigma;
};
// Each row is a uniformly chosen standard basis vector; E[x x^T] = I/d.
struct OrthonormalBasisUniform {};

using CovSpec = std::variant<IdentityCov, ExplicitCov, OrthonormalBasisUniform>;

// Rows drawn per `cov`, y = X w_star + noise with the noise centered at its
// analytic mean. Truth carries Sigma, w_star and the noise variance when finite.
Dataset gen_linear_model(std::size_t n, std::size_t d, const Eigen::VectorXd& w_star, const CovSpec& cov,
                         const DistSpec& noise, std::uint64_t seed);

struct MinimaxDataset {
  Dataset data;
  std::vector<std::size_t> basis_counts;  // how many rows equal e_i
};

// Rows uniform over the standard basis, y = x^T w_star + N(0, sigma^2).
MinimaxDataset gen_minimax_design(std::size_t n, std::size_t d, double sigma, const Eigen::VectorXd& w_star,
                                  std::uint64_t seed);

// Square root factor L with L L^T = sigma; throws for non-PSD input.
Eigen::MatrixXd psd_factor(const Eigen::MatrixXd& sigma);

}  // namespace heavytail
