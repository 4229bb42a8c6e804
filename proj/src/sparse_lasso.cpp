#include "heavytail/sparse_lasso.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "heavytail/mom_scalar.hpp"

namespace heavytail {

double lasso_kkt_gap(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const Eigen::VectorXd& w, double lambda) {
  const auto n = static_cast<double>(X.rows());
  const Eigen::VectorXd g = X.transpose() * (X * w - y) / n;
  double gap = 0.0;
  for (Eigen::Index j = 0; j < w.size(); ++j) {
    const double v = w(j) != 0.0 ? std::abs(g(j) + lambda * (w(j) > 0.0 ? 1.0 : -1.0))
                                 : std::max(std::abs(g(j)) - lambda, 0.0);
    gap = std::max(gap, v);
  }
  return gap;
}

Eigen::VectorXd lasso_fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, double lambda, double tol,
                          std::size_t max_iter) {
  if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
  if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");
  if (X.rows() != y.size() || X.rows() == 0) throw std::invalid_argument("row count of X must equal length of y");
  if (!X.allFinite() || !y.allFinite()) throw std::invalid_argument("non-finite lasso input");

  const auto n = static_cast<double>(X.rows());
  const auto d = X.cols();
  const Eigen::VectorXd col_sq = X.colwise().squaredNorm().transpose() / n;
  Eigen::VectorXd w = Eigen::VectorXd::Zero(d);
  Eigen::VectorXd residual = y;  // y - Xw

  for (std::size_t sweep = 0;; ++sweep) {
    const double gap = lasso_kkt_gap(X, y, w, lambda);
    if (gap <= tol) return w;
    if (sweep == max_iter) throw LassoNotConverged(w, gap);
    for (Eigen::Index j = 0; j < d; ++j) {
      if (col_sq(j) == 0.0) {
        w(j) = 0.0;  // a zero column never enters the fit
        continue;
      }
      const double old = w(j);
      const double z = X.col(j).dot(residual) / n + col_sq(j) * old;
      const double updated = soft_threshold(z, lambda) / col_sq(j);
      if (updated != old) {
        residual -= (updated - old) * X.col(j);
        w(j) = updated;
      }
    }
    // Refresh the residual periodically to keep rounding from accumulating.
    if (sweep % 64 == 63) residual = y - X * w;
  }
}

std::size_t HeavyLassoConfig::group_count() const {
  if (k) {
    if (*k == 0) throw std::invalid_argument("k must be positive");
    return *k;
  }
  return groups_for_confidence(delta, k_constant);
}

double heavy_lasso_lambda(double sigma, double eta, std::size_t d, double delta, std::size_t group_size) {
  if (group_size == 0) throw std::invalid_argument("group size must be positive");
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0, 1)");
  return 2.0 * std::sqrt(sigma * sigma * eta * eta * std::log(2.0 * static_cast<double>(d)) * std::log(1.0 / delta) /
                         static_cast<double>(group_size));
}

LassoModel heavy_tail_lasso(const Dataset& data, const HeavyLassoConfig& config) {
  data.validate();
  if (!(config.sigma > 0.0) || !(config.eta > 0.0)) throw std::invalid_argument("sigma and eta must be positive");
  const std::size_t k = config.group_count();
  if (data.n() < 2 * k) throw std::invalid_argument("need at least two rows per group");
  const auto groups = partition_indices(data.n(), k, config.seed);

  LassoModel model;
  model.lambda = config.lambda ? *config.lambda
                               : heavy_lasso_lambda(config.sigma, config.eta, data.d(), config.delta, groups.front().size());
  model.group_weights.resize(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(data.d()));
  std::vector<Eigen::VectorXd> candidates(k);
  for (std::size_t g = 0; g < k; ++g) {
    const Dataset part = data.subset(groups[g]);
    candidates[g] = lasso_fit(part.X, part.y, model.lambda, config.tol, config.max_iter);
    model.group_weights.row(static_cast<Eigen::Index>(g)) = candidates[g].transpose();
  }
  model.report = select_median_distance_set(
      candidates, [](const Eigen::VectorXd& a, const Eigen::VectorXd& b) { return (a - b).norm(); });
  model.weights = candidates[model.report.selected_index];
  return model;
}

double lasso_oracle_bound(double lambda, std::size_t s, double gamma) {
  if (gamma == 0.0) throw std::domain_error("RE condition fails");
  return 12.0 * lambda * std::sqrt(static_cast<double>(s)) / (gamma * gamma);
}

std::vector<std::size_t> top_s_support(const Eigen::VectorXd& u, std::size_t s) {
  std::vector<std::size_t> idx(static_cast<std::size_t>(u.size()));
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return std::abs(u(static_cast<Eigen::Index>(a))) > std::abs(u(static_cast<Eigen::Index>(b)));
  });
  idx.resize(std::min<std::size_t>(s, idx.size()));
  return idx;
}

bool in_restricted_cone(const Eigen::VectorXd& u, std::size_t s, double slack) {
  const auto top = top_s_support(u, s);
  double head = 0.0;
  for (const auto j : top) head += std::abs(u(static_cast<Eigen::Index>(j)));
  const double tail = u.lpNorm<1>() - head;
  return tail <= 3.0 * head + slack;
}

}  // namespace heavytail
