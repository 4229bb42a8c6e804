#include "heavytail/heavy_regression.hpp"

#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "heavytail/mom_scalar.hpp"

namespace heavytail {

std::size_t RegressionConfig::group_count() const {
  if (k.has_value() == delta.has_value()) throw std::invalid_argument("set exactly one of k and delta");
  if (!(lambda >= 0.0)) throw std::invalid_argument("lambda must be nonnegative");
  if (k) {
    if (*k == 0) throw std::invalid_argument("k must be positive");
    return *k;
  }
  return groups_for_confidence(*delta, k_constant);
}

Eigen::MatrixXd empirical_second_moment(const Eigen::MatrixXd& Xg) {
  if (Xg.rows() < 1) throw std::invalid_argument("empty group");
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(Xg.cols(), Xg.cols());
  s.selfadjointView<Eigen::Lower>().rankUpdate(Xg.transpose());
  s = s.selfadjointView<Eigen::Lower>();
  return s / static_cast<double>(Xg.rows());
}

Eigen::VectorXd fit_group_least_squares(const Eigen::MatrixXd& Xg, const Eigen::VectorXd& yg, double lambda) {
  if (Xg.rows() < 1) throw std::invalid_argument("empty group");
  if (Xg.rows() != yg.size()) throw std::invalid_argument("row count of X must equal length of y");
  if (!(lambda >= 0.0)) throw std::invalid_argument("lambda must be nonnegative");
  if (!Xg.allFinite() || !yg.allFinite()) throw std::invalid_argument("non-finite regression input");

  const auto m = static_cast<double>(Xg.rows());
  const auto d = Xg.cols();
  Eigen::MatrixXd A = empirical_second_moment(Xg);
  A.diagonal().array() += lambda;
  const Eigen::VectorXd b = Xg.transpose() * yg / m;

  if (lambda > 0.0) {
    Eigen::LLT<Eigen::MatrixXd> llt(A);
    if (llt.info() == Eigen::Success) return llt.solve(b);
  }
  // Pseudo-inverse semantics; cutoff at largest eigenvalue * d * machine epsilon.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(A);
  const auto& ev = eig.eigenvalues();
  const double cutoff = std::max(ev.cwiseAbs().maxCoeff(), 0.0) * static_cast<double>(d) *
                        std::numeric_limits<double>::epsilon();
  Eigen::VectorXd coeff = eig.eigenvectors().transpose() * b;
  for (Eigen::Index i = 0; i < d; ++i) coeff(i) = ev(i) > cutoff ? coeff(i) / ev(i) : 0.0;
  Eigen::VectorXd w = eig.eigenvectors() * coeff;
  if (!w.allFinite()) throw std::runtime_error("non-finite fit");
  return w;
}

SelectionReport select_regression_candidate(const Eigen::MatrixXd& group_weights,
                                            std::span<const Eigen::MatrixXd> sigmas, double lambda,
                                            SelfTerm self) {
  const auto k = group_weights.rows();
  if (k == 0) throw std::invalid_argument("empty candidate set");
  if (sigmas.size() != 1 && sigmas.size() != static_cast<std::size_t>(k))
    throw std::invalid_argument("need one second-moment matrix per candidate or a pooled one");
  Eigen::MatrixXd responses(k, k);
  for (Eigen::Index j = 0; j < k; ++j) {
    Eigen::MatrixXd metric = sigmas.size() == 1 ? sigmas[0] : sigmas[static_cast<std::size_t>(j)];
    metric.diagonal().array() += lambda;
    for (Eigen::Index i = 0; i < k; ++i) {
      const Eigen::VectorXd diff = (group_weights.row(i) - group_weights.row(j)).transpose();
      // PSD forms can dip below zero by rounding only.
      responses(j, i) = std::max(0.0, diff.dot(metric * diff));
    }
  }
  return select_median_noisy_table(responses, self);
}

RegressionModel heavy_tail_regress(const Dataset& data, const RegressionConfig& config) {
  data.validate();
  const std::size_t k = config.group_count();
  const auto groups = partition_indices(data.n(), k, config.seed);
  const auto d = static_cast<Eigen::Index>(data.d());

  RegressionModel model;
  model.group_weights.resize(static_cast<Eigen::Index>(k), d);
  std::vector<Eigen::MatrixXd> per_group(k);
  for (std::size_t g = 0; g < k; ++g) {
    const Dataset part = data.subset(groups[g]);
    model.group_weights.row(static_cast<Eigen::Index>(g)) =
        fit_group_least_squares(part.X, part.y, config.lambda).transpose();
    per_group[g] = empirical_second_moment(part.X);
  }

  if (config.variant == SigmaVariant::Pooled) {
    // Equal group sizes make the pooled moment the average of the group moments.
    Eigen::MatrixXd pooled = Eigen::MatrixXd::Zero(d, d);
    for (const auto& s : per_group) pooled += s;
    pooled /= static_cast<double>(k);
    model.group_sigmas = {0.5 * (pooled + pooled.transpose())};
  } else {
    model.group_sigmas = std::move(per_group);
  }

  model.report = select_regression_candidate(model.group_weights, model.group_sigmas, config.lambda, config.self_term);
  model.weights = model.group_weights.row(static_cast<Eigen::Index>(model.report.selected_index)).transpose();
  return model;
}

Eigen::VectorXd fit_full_sample(const Dataset& data, double lambda) {
  data.validate();
  return fit_group_least_squares(data.X, data.y, lambda);
}

double excess_loss(const Eigen::VectorXd& w, const GroundTruth& truth) {
  const Eigen::VectorXd diff = w - truth.w_opt;
  return 0.5 * diff.dot(truth.sigma * diff);
}

double excess_loss(const Eigen::VectorXd& w, const Dataset& data) {
  if (!data.truth) throw std::invalid_argument("missing ground truth");
  return excess_loss(w, *data.truth);
}

double optimal_loss(const GroundTruth& truth) {
  if (!truth.noise_variance) throw std::invalid_argument("noise variance unknown");
  return 0.5 * *truth.noise_variance;
}

std::size_t chernoff_group_size(double r_lambda, double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0, 1)");
  if (!(r_lambda >= 0.0)) throw std::invalid_argument("r must be nonnegative");
  double m = 1.0;
  for (int it = 0; it < 1000; ++it) {
    const double need = std::ceil(80.0 * r_lambda * r_lambda * std::log(4.0 * m * m / delta));
    if (need <= m) return static_cast<std::size_t>(m);
    m = need;
  }
  throw std::runtime_error("sample-size iteration did not settle");
}

double gradient_second_moment(const Dataset& data) {
  if (!data.truth) throw std::invalid_argument("missing ground truth");
  const Eigen::VectorXd residual = data.X * data.truth->w_opt - data.y;
  double s = 0.0;
  for (Eigen::Index i = 0; i < data.X.rows(); ++i) s += residual(i) * residual(i) * data.X.row(i).squaredNorm();
  return s / static_cast<double>(data.X.rows());
}

void write_model_csv(std::ostream& out, const RegressionModel& model) {
  out.precision(17);
  out << "index,r,selected\n";
  for (std::size_t i = 0; i < model.report.radii.size(); ++i)
    out << i << ',' << model.report.radii[i] << ',' << (i == model.report.selected_index ? 1 : 0) << '\n';
  out << "weights";
  for (Eigen::Index j = 0; j < model.weights.size(); ++j) out << ',' << model.weights(j);
  out << '\n';
}

}  // namespace heavytail
