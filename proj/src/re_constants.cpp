#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <ostream>
#include <vector>

#include "heavytail/sparse_lasso.hpp"

namespace heavytail {

namespace {

// Euclidean projection onto {b : ||b||_1 <= radius}.
Eigen::VectorXd project_l1_ball(const Eigen::VectorXd& v, double radius) {
  if (v.lpNorm<1>() <= radius) return v;
  if (radius <= 0.0) return Eigen::VectorXd::Zero(v.size());
  std::vector<double> mags(static_cast<std::size_t>(v.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) mags[static_cast<std::size_t>(i)] = std::abs(v(i));
  std::sort(mags.begin(), mags.end(), std::greater<>());
  double cumulative = 0.0;
  double theta = 0.0;
  for (std::size_t i = 0; i < mags.size(); ++i) {
    cumulative += mags[i];
    const double t = (cumulative - radius) / static_cast<double>(i + 1);
    if (mags[i] > t) theta = t;
  }
  Eigen::VectorXd out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) out(i) = soft_threshold(v(i), theta);
  return out;
}

// min ||c + B b||_2 over ||b||_1 <= radius, by accelerated projected gradient
// warm-started at `b`. Returns the attained norm at a feasible point.
double min_over_l1_ball(const Eigen::VectorXd& c, const Eigen::MatrixXd& B, double lipschitz, double radius,
                        Eigen::VectorXd& b) {
  auto value = [&](const Eigen::VectorXd& x) { return (c + B * x).norm(); };
  if (B.cols() == 0 || lipschitz == 0.0) return c.norm();
  b = project_l1_ball(b, radius);
  Eigen::VectorXd x = b;
  Eigen::VectorXd z = b;
  double t = 1.0;
  double best = value(b);
  for (int it = 0; it < 4000; ++it) {
    const Eigen::VectorXd grad = B.transpose() * (c + B * z);
    const Eigen::VectorXd next = project_l1_ball(z - grad / lipschitz, radius);
    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    z = next + ((t - 1.0) / t_next) * (next - x);
    const double step = (next - x).norm();
    x = next;
    t = t_next;
    const double v = value(x);
    if (v < best) {
      best = v;
      b = x;
    }
    if (step <= 1e-13 * (1.0 + x.norm())) break;
  }
  return best;
}

// Angles k*pi/N for N a power of two, so halving the resolution refines the grid.
std::size_t angle_count(double resolution) {
  std::size_t n = 1;
  while (std::numbers::pi / static_cast<double>(n) > resolution) n *= 2;
  return n;
}

void for_each_support(std::size_t d, std::size_t s, const std::function<void(const std::vector<std::size_t>&)>& fn) {
  std::vector<std::size_t> idx(s);
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t pos, std::size_t start) {
    if (pos == s) {
      fn(idx);
      return;
    }
    for (std::size_t j = start; j + (s - pos) <= d; ++j) {
      idx[pos] = j;
      rec(pos + 1, j + 1);
    }
  };
  rec(0, 0);
}

double gamma_for_exact_size(const Eigen::MatrixXd& psi, std::size_t s, double resolution) {
  const auto d = static_cast<std::size_t>(psi.cols());
  const std::size_t angles = s == 1 ? 1 : angle_count(resolution);
  double best = std::numeric_limits<double>::infinity();
  for_each_support(d, s, [&](const std::vector<std::size_t>& support) {
    std::vector<std::size_t> rest;
    for (std::size_t j = 0; j < d; ++j)
      if (std::find(support.begin(), support.end(), j) == support.end()) rest.push_back(j);
    Eigen::MatrixXd head(psi.rows(), static_cast<Eigen::Index>(s));
    Eigen::MatrixXd tail(psi.rows(), static_cast<Eigen::Index>(rest.size()));
    for (std::size_t i = 0; i < s; ++i) head.col(static_cast<Eigen::Index>(i)) = psi.col(static_cast<Eigen::Index>(support[i]));
    for (std::size_t i = 0; i < rest.size(); ++i) tail.col(static_cast<Eigen::Index>(i)) = psi.col(static_cast<Eigen::Index>(rest[i]));
    const double lipschitz =
        tail.cols() == 0 ? 0.0 : Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(tail.transpose() * tail).eigenvalues().maxCoeff();

    Eigen::VectorXd b = Eigen::VectorXd::Zero(tail.cols());
    for (std::size_t m = 0; m < angles; ++m) {
      Eigen::VectorXd a(static_cast<Eigen::Index>(s));
      if (s == 1) {
        a(0) = 1.0;
      } else {
        const double theta = std::numbers::pi * static_cast<double>(m) / static_cast<double>(angles);
        a(0) = std::cos(theta);
        a(1) = std::sin(theta);
      }
      const Eigen::VectorXd c = head * a;
      const double v = min_over_l1_ball(c, tail, lipschitz, 3.0 * a.lpNorm<1>(), b);
      best = std::min(best, v);
    }
  });
  return best;
}

}  // namespace

double re_constant_gamma(const Eigen::MatrixXd& psi, std::size_t s, double resolution) {
  const auto d = static_cast<std::size_t>(psi.cols());
  if (d > 6 || s > 2 || !(resolution <= 0.05)) throw std::invalid_argument("γ search supported only at desk scale");
  if (s == 0 || s > d) throw std::invalid_argument("sparsity must lie in 1..d");
  if (!(resolution > 0.0)) throw std::invalid_argument("resolution must be positive");
  if (!psi.allFinite()) throw std::invalid_argument("non-finite design");
  double gamma = gamma_for_exact_size(psi, s, resolution);
  // The constant is antitone in s, so the smaller-s estimate also bounds it.
  if (s == 2) gamma = std::min(gamma, gamma_for_exact_size(psi, 1, resolution));
  return gamma;
}

double sparse_operator_norm_eta(const Eigen::MatrixXd& psi, std::size_t s) {
  const auto d = static_cast<std::size_t>(psi.cols());
  if (d > 20 || s > 3) throw std::invalid_argument("η enumeration supported only for d <= 20, s <= 3");
  if (s == 0 || d == 0) throw std::invalid_argument("sparsity must be positive");
  const std::size_t size = std::min(s, d);
  double best = 0.0;
  for_each_support(d, size, [&](const std::vector<std::size_t>& support) {
    Eigen::MatrixXd sub(psi.rows(), static_cast<Eigen::Index>(size));
    for (std::size_t i = 0; i < size; ++i) sub.col(static_cast<Eigen::Index>(i)) = psi.col(static_cast<Eigen::Index>(support[i]));
    const double top = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(sub.transpose() * sub).eigenvalues().maxCoeff();
    best = std::max(best, std::sqrt(std::max(top, 0.0)));
  });
  return best;
}

REReport re_report(const Eigen::MatrixXd& psi, std::size_t s, double resolution) {
  REReport r;
  r.s = s;
  r.resolution = resolution;
  r.gamma = re_constant_gamma(psi, s, resolution);
  r.eta = sparse_operator_norm_eta(psi, s);
  return r;
}

void write_re_report(std::ostream& out, const REReport& report) {
  auto name = [](REMethod m) { return m == REMethod::GridSearch ? "grid_search" : "exact_support_enum"; };
  out.precision(17);
  out << "gamma = " << report.gamma << '\n'
      << "eta = " << report.eta << '\n'
      << "s = " << report.s << '\n'
      << "gamma_method = " << name(report.gamma_method) << '\n'
      << "eta_method = " << name(report.eta_method) << '\n'
      << "resolution = " << report.resolution << '\n';
}

}  // namespace heavytail
