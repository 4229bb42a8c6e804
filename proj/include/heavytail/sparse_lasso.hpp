#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

#include "heavytail/dataset.hpp"
#include "heavytail/metric_select.hpp"

namespace heavytail {

inline double soft_threshold(double z, double t) {
  if (z > t) return z - t;
  if (z < -t) return z + t;
  return 0.0;
}

class LassoNotConverged : public std::runtime_error {
 public:
  LassoNotConverged(Eigen::VectorXd last, double gap)
      : std::runtime_error("lasso did not reach the KKT tolerance (gap " + std::to_string(gap) + ")"),
        last_iterate(std::move(last)),
        kkt_gap(gap) {}

  Eigen::VectorXd last_iterate;
  double kkt_gap;
};

// Largest KKT violation of w for (1/(2n))||Xw - y||^2 + lambda ||w||_1:
// |g_j + lambda sign(w_j)| on active coordinates, max(|g_j| - lambda, 0)
// elsewhere, with g = X^T (Xw - y) / n.
double lasso_kkt_gap(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const Eigen::VectorXd& w, double lambda);

// Cyclic coordinate descent (coordinates 1..d in order) on the normalized
// objective. Stops when lasso_kkt_gap <= tol; throws LassoNotConverged after
// max_iter full sweeps.
Eigen::VectorXd lasso_fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, double lambda, double tol = 1e-10,
                          std::size_t max_iter = 100000);

struct HeavyLassoConfig {
  double sigma = 1.0;  // noise standard-deviation bound
  double eta = 1.0;    // sparse operator norm of Sigma^{1/2}
  double delta = 0.05;
  // Group count; when unset k = ceil(k_constant ln(1/delta)).
  std::optional<std::size_t> k;
  double k_constant = 18.0;
  // When set, overrides the per-group lambda rule.
  std::optional<double> lambda;
  std::uint64_t seed = 0;
  double tol = 1e-10;
  std::size_t max_iter = 100000;

  std::size_t group_count() const;
};

// 2 sqrt(sigma^2 eta^2 log(2d) log(1/delta) / m) for groups of m rows.
double heavy_lasso_lambda(double sigma, double eta, std::size_t d, double delta, std::size_t group_size);

struct LassoModel {
  Eigen::VectorXd weights;
  SelectionReport report;
  Eigen::MatrixXd group_weights;
  double lambda = 0.0;
};

// Group-wise lasso_fit on a seeded partition, then median-distance selection
// under the Euclidean norm on weight vectors.
LassoModel heavy_tail_lasso(const Dataset& data, const HeavyLassoConfig& config);

enum class REMethod { ExactSupportEnum, GridSearch };

struct REReport {
  double gamma = 0.0;
  double eta = 0.0;
  std::size_t s = 1;
  REMethod gamma_method = REMethod::GridSearch;
  REMethod eta_method = REMethod::ExactSupportEnum;
  double resolution = 0.05;
};

// Restricted-eigenvalue constant: min over the cone
// ||u_{[s]^C}||_1 <= 3 ||u_{[s]}||_1 of ||Psi u||_2 / ||u_{[s]}||_2.
// For every support T of size s the leading block is swept over a grid of unit
// directions with angular step <= resolution (nested under halving), and the
// tail block is minimized exactly over its l1 ball. The result is an upper
// bound on the true constant. Desk scale only: d <= 6, s <= 2.
double re_constant_gamma(const Eigen::MatrixXd& psi, std::size_t s, double resolution = 0.05);

// max over |supp u| <= s of ||Psi u|| / ||u||: exact, by enumerating supports.
// Requires d <= 20 and s <= 3.
double sparse_operator_norm_eta(const Eigen::MatrixXd& psi, std::size_t s);

REReport re_report(const Eigen::MatrixXd& psi, std::size_t s, double resolution = 0.05);
// Key-value block, one "key = value" per line.
void write_re_report(std::ostream& out, const REReport& report);

// 12 lambda sqrt(s) / gamma^2. Throws std::domain_error("RE condition fails")
// when gamma == 0.
double lasso_oracle_bound(double lambda, std::size_t s, double gamma);

// Whether ||u_{[s]^C}||_1 <= 3 ||u_{[s]}||_1 (+ slack), with [s] the s
// largest-magnitude coordinates, ties broken by lower index.
bool in_restricted_cone(const Eigen::VectorXd& u, std::size_t s, double slack = 0.0);

// Indices of the s largest |u_j|, ties by lower index.
std::vector<std::size_t> top_s_support(const Eigen::VectorXd& u, std::size_t s);

}  // namespace heavytail
