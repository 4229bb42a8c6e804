#include "heavytail/lowrank_cov.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "heavytail/heavy_regression.hpp"
#include "heavytail/mom_scalar.hpp"

namespace heavytail {

namespace {

void require_symmetric(const Eigen::MatrixXd& M) {
  if (M.rows() != M.cols()) throw std::invalid_argument("matrix must be square");
  if (!M.allFinite()) throw std::invalid_argument("non-finite matrix");
  const double scale = std::max(1.0, M.cwiseAbs().maxCoeff());
  if ((M - M.transpose()).cwiseAbs().maxCoeff() > 1e-9 * scale) throw std::invalid_argument("matrix not symmetric");
}

Eigen::MatrixXd symmetrized(const Eigen::MatrixXd& M) { return 0.5 * (M + M.transpose()); }

}  // namespace

double spectral_norm(const Eigen::MatrixXd& M) {
  require_symmetric(M);
  if (M.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(symmetrized(M), Eigen::EigenvaluesOnly);
  return eig.eigenvalues().cwiseAbs().maxCoeff();
}

CovSelection cov_median_select(const Eigen::MatrixXd& samples, std::size_t k, std::uint64_t seed) {
  if (!samples.allFinite()) throw std::invalid_argument("non-finite samples");
  const auto groups = partition_indices(static_cast<std::size_t>(samples.rows()), k, seed);
  CovSelection out;
  out.group_moments.reserve(k);
  for (const auto& g : groups) {
    Eigen::MatrixXd part(static_cast<Eigen::Index>(g.size()), samples.cols());
    for (std::size_t r = 0; r < g.size(); ++r)
      part.row(static_cast<Eigen::Index>(r)) = samples.row(static_cast<Eigen::Index>(g[r]));
    out.group_moments.push_back(empirical_second_moment(part));
  }
  out.report = select_median_distance_set(
      out.group_moments, [](const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) { return spectral_norm(a - b); });
  out.sigma_hat = out.group_moments[out.report.selected_index];
  return out;
}

Eigen::MatrixXd trace_norm_shrink(const Eigen::MatrixXd& sigma_hat, double lambda) {
  if (!(lambda >= 0.0)) throw std::invalid_argument("lambda must be nonnegative");
  require_symmetric(sigma_hat);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(symmetrized(sigma_hat));
  const Eigen::VectorXd& mu = eig.eigenvalues();
  if (mu.size() > 0 && mu.minCoeff() < -1e-9) throw std::invalid_argument("input not PSD");
  const Eigen::VectorXd shrunk = (mu.array() - lambda).max(0.0).matrix();
  const Eigen::MatrixXd& U = eig.eigenvectors();
  return symmetrized(U * shrunk.asDiagonal() * U.transpose());
}

CovEstimate estimate_covariance(const Eigen::MatrixXd& samples, std::size_t k, double lambda, std::uint64_t seed) {
  auto sel = cov_median_select(samples, k, seed);
  CovEstimate est;
  est.sigma_hat = std::move(sel.sigma_hat);
  est.report = std::move(sel.report);
  est.lambda = lambda;
  est.sigma_lambda = trace_norm_shrink(est.sigma_hat, lambda);
  return est;
}

double shrinkage_level(double c, std::size_t d, std::size_t n, double delta, double eta) {
  if (!(c > 0.0)) throw std::invalid_argument("c must be positive");
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0, 1)");
  if (!(eta > 0.0)) throw std::invalid_argument("eta must be positive");
  if (n == 0) throw std::invalid_argument("n must be positive");
  const double base = static_cast<double>(d) * std::log(1.0 / delta) / static_cast<double>(n);
  return c * std::pow(base, 1.0 / (2.0 * (1.0 + 1.0 / eta)));
}

std::vector<Eigen::MatrixXd> rank_truncations(const Eigen::MatrixXd& sigma) {
  require_symmetric(sigma);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(symmetrized(sigma));
  const auto d = sigma.rows();
  const Eigen::MatrixXd& U = eig.eigenvectors();
  const Eigen::VectorXd& mu = eig.eigenvalues();  // ascending
  std::vector<Eigen::MatrixXd> out;
  Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(d, d);
  for (Eigen::Index r = 1; r <= d; ++r) {
    const Eigen::Index i = d - r;
    acc += mu(i) * U.col(i) * U.col(i).transpose();
    out.push_back(symmetrized(acc));
  }
  return out;
}

std::size_t numerical_rank(const Eigen::MatrixXd& A) {
  require_symmetric(A);
  if (A.size() == 0) return 0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(symmetrized(A), Eigen::EigenvaluesOnly);
  const Eigen::VectorXd mags = eig.eigenvalues().cwiseAbs();
  const double cutoff = static_cast<double>(A.rows()) * std::numeric_limits<double>::epsilon() * mags.maxCoeff();
  return static_cast<std::size_t>((mags.array() > cutoff).count());
}

bool KoltReport::holds(double slack) const {
  return std::all_of(candidates.begin(), candidates.end(),
                     [&](const KoltCandidate& c) { return c.lhs <= c.rhs + slack * (1.0 + c.rhs); });
}

KoltReport kolt_bound_check(const Eigen::MatrixXd& sigma_lambda, const Eigen::MatrixXd& sigma_true,
                            const Eigen::MatrixXd& sigma_hat, double lambda, std::vector<Eigen::MatrixXd> candidates) {
  KoltReport report;
  report.deviation = spectral_norm(sigma_hat - sigma_true);
  report.vacuous = lambda < report.deviation;
  if (candidates.empty()) {
    candidates.push_back(sigma_true);
    for (auto& t : rank_truncations(sigma_true)) candidates.push_back(std::move(t));
  }
  const double c = 0.5 * (std::sqrt(2.0) + 1.0) * (std::sqrt(2.0) + 1.0) * lambda * lambda;
  const double lhs = 0.5 * (sigma_lambda - sigma_true).squaredNorm();
  for (const auto& A : candidates) {
    KoltCandidate kc;
    kc.rank = numerical_rank(A);
    kc.lhs = lhs;
    kc.rhs = 0.5 * (A - sigma_true).squaredNorm() + c * static_cast<double>(kc.rank);
    report.candidates.push_back(kc);
  }
  return report;
}

}  // namespace heavytail
