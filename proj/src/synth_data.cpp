#include "heavytail/synth_data.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <boost/random/lognormal_distribution.hpp>
#include <boost/random/normal_distribution.hpp>
#include <boost/random/student_t_distribution.hpp>

namespace heavytail {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_args(std::string_view s) {
  std::vector<std::string> out;
  std::string cur;
  for (const char c : s) {
    if (c == ',') {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!trim(cur).empty() || !out.empty()) out.push_back(trim(cur));
  return out;
}

double to_double(const std::string& s, std::string_view context) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size())
    throw std::invalid_argument("distribution " + std::string(context) + ": bad number '" + s + "'");
  return v;
}

}  // namespace

void validate(const DistSpec& spec) {
  std::visit(overloaded{
                 [](const Gaussian& g) {
                   if (!(g.sd >= 0.0) || !std::isfinite(g.mean)) throw std::invalid_argument("gaussian: sd must be >= 0");
                 },
                 [](const StudentT& t) {
                   if (!(t.dof > 0.0)) throw std::invalid_argument("student_t: dof must be positive");
                 },
                 [](const Pareto& p) {
                   if (!(p.shape > 0.0)) throw std::invalid_argument("pareto: shape must be positive");
                   if (!(p.scale > 0.0)) throw std::invalid_argument("pareto: scale must be positive");
                   if (p.centered && p.shape <= 1.0) throw std::invalid_argument("mean undefined");
                 },
                 [](const LogNormal& l) {
                   if (!(l.sigma >= 0.0)) throw std::invalid_argument("lognormal: sigma must be >= 0");
                 },
                 [](const TwoPoint& t) {
                   if (t.values.empty() || t.values.size() != t.probs.size())
                     throw std::invalid_argument("twopoint: values and probs must be nonempty and equal length");
                   double total = 0.0;
                   for (const double p : t.probs) {
                     if (!(p >= 0.0)) throw std::invalid_argument("twopoint: negative probability");
                     total += p;
                   }
                   if (std::abs(total - 1.0) > 1e-9) throw std::invalid_argument("twopoint: probs must sum to 1");
                 },
             },
             spec);
}

std::optional<double> dist_mean(const DistSpec& spec) {
  return std::visit(overloaded{
                        [](const Gaussian& g) -> std::optional<double> { return g.mean; },
                        [](const StudentT& t) -> std::optional<double> {
                          if (t.dof > 1.0) return 0.0;
                          return std::nullopt;
                        },
                        [](const Pareto& p) -> std::optional<double> {
                          if (p.shape <= 1.0) return std::nullopt;
                          return p.centered ? 0.0 : p.shape * p.scale / (p.shape - 1.0);
                        },
                        [](const LogNormal& l) -> std::optional<double> {
                          return std::exp(l.mu + 0.5 * l.sigma * l.sigma);
                        },
                        [](const TwoPoint& t) -> std::optional<double> {
                          return std::inner_product(t.values.begin(), t.values.end(), t.probs.begin(), 0.0);
                        },
                    },
                    spec);
}

std::optional<double> dist_variance(const DistSpec& spec) {
  return std::visit(
      overloaded{
          [](const Gaussian& g) -> std::optional<double> { return g.sd * g.sd; },
          [](const StudentT& t) -> std::optional<double> {
            if (t.dof > 2.0) return t.dof / (t.dof - 2.0);
            return std::nullopt;
          },
          [](const Pareto& p) -> std::optional<double> {
            if (p.shape <= 2.0) return std::nullopt;
            const double a = p.shape;
            return p.scale * p.scale * a / ((a - 1.0) * (a - 1.0) * (a - 2.0));
          },
          [](const LogNormal& l) -> std::optional<double> {
            const double s2 = l.sigma * l.sigma;
            return (std::exp(s2) - 1.0) * std::exp(2.0 * l.mu + s2);
          },
          [](const TwoPoint& t) -> std::optional<double> {
            const double m = std::inner_product(t.values.begin(), t.values.end(), t.probs.begin(), 0.0);
            double v = 0.0;
            for (std::size_t i = 0; i < t.values.size(); ++i) v += t.probs[i] * (t.values[i] - m) * (t.values[i] - m);
            return v;
          },
      },
      spec);
}

DistSpec parse_dist_spec(std::string_view text) {
  const std::string s = trim(text);
  const auto open = s.find('(');
  if (open == std::string::npos || s.back() != ')')
    throw std::invalid_argument("distribution '" + s + "': expected family(args)");
  std::string family = trim(std::string_view(s).substr(0, open));
  std::transform(family.begin(), family.end(), family.begin(), [](unsigned char c) { return std::tolower(c); });
  const auto args = split_args(std::string_view(s).substr(open + 1, s.size() - open - 2));
  auto need = [&](std::size_t lo, std::size_t hi) {
    if (args.size() < lo || args.size() > hi)
      throw std::invalid_argument("distribution " + family + ": wrong number of arguments");
  };

  DistSpec spec;
  if (family == "gaussian" || family == "normal") {
    need(0, 2);
    Gaussian g;
    if (args.size() > 0) g.mean = to_double(args[0], family);
    if (args.size() > 1) g.sd = to_double(args[1], family);
    spec = g;
  } else if (family == "student_t" || family == "t" || family == "studentt") {
    need(1, 1);
    spec = StudentT{to_double(args[0], family)};
  } else if (family == "pareto") {
    need(1, 3);
    Pareto p;
    p.shape = to_double(args[0], family);
    if (args.size() > 1) p.scale = to_double(args[1], family);
    if (args.size() > 2) {
      if (args[2] != "centered") throw std::invalid_argument("pareto: third argument must be 'centered'");
      p.centered = true;
    }
    spec = p;
  } else if (family == "lognormal") {
    need(2, 2);
    spec = LogNormal{to_double(args[0], family), to_double(args[1], family)};
  } else if (family == "twopoint" || family == "discrete") {
    if (args.empty()) throw std::invalid_argument("twopoint: needs value:prob pairs");
    TwoPoint t;
    for (const auto& a : args) {
      const auto colon = a.find(':');
      if (colon == std::string::npos) throw std::invalid_argument("twopoint: entries must be value:prob");
      t.values.push_back(to_double(trim(a.substr(0, colon)), family));
      t.probs.push_back(to_double(trim(a.substr(colon + 1)), family));
    }
    spec = t;
  } else {
    throw std::invalid_argument("unknown distribution family '" + family + "'");
  }
  validate(spec);
  return spec;
}

std::string format_dist_spec(const DistSpec& spec) {
  std::ostringstream out;
  out.precision(17);
  std::visit(overloaded{
                 [&](const Gaussian& g) { out << "gaussian(" << g.mean << "," << g.sd << ")"; },
                 [&](const StudentT& t) { out << "student_t(" << t.dof << ")"; },
                 [&](const Pareto& p) {
                   out << "pareto(" << p.shape << "," << p.scale << (p.centered ? ",centered" : "") << ")";
                 },
                 [&](const LogNormal& l) { out << "lognormal(" << l.mu << "," << l.sigma << ")"; },
                 [&](const TwoPoint& t) {
                   out << "twopoint(";
                   for (std::size_t i = 0; i < t.values.size(); ++i)
                     out << (i ? "," : "") << t.values[i] << ":" << t.probs[i];
                   out << ")";
                 },
             },
             spec);
  return out.str();
}

double draw_standard_normal(Rng& rng) {
  boost::random::normal_distribution<double> normal(0.0, 1.0);
  return normal(rng);
}

double draw(const DistSpec& spec, Rng& rng) {
  return std::visit(overloaded{
                        [&](const Gaussian& g) { return g.mean + g.sd * draw_standard_normal(rng); },
                        [&](const StudentT& t) {
                          boost::random::student_t_distribution<double> dist(t.dof);
                          return dist(rng);
                        },
                        [&](const Pareto& p) {
                          // Inverse CDF with 1 - U in (0, 1].
                          const double u = 1.0 - rng.uniform();
                          const double x = p.scale * std::pow(u, -1.0 / p.shape);
                          return p.centered ? x - p.shape * p.scale / (p.shape - 1.0) : x;
                        },
                        [&](const LogNormal& l) {
                          boost::random::lognormal_distribution<double> dist(l.mu, l.sigma);
                          return dist(rng);
                        },
                        [&](const TwoPoint& t) {
                          const double u = rng.uniform();
                          double acc = 0.0;
                          for (std::size_t i = 0; i + 1 < t.values.size(); ++i) {
                            acc += t.probs[i];
                            if (u < acc) return t.values[i];
                          }
                          return t.values.back();
                        },
                    },
                    spec);
}

std::vector<double> sample_scalar(const DistSpec& spec, std::size_t n, std::uint64_t seed) {
  validate(spec);
  Rng rng(seed);
  std::vector<double> out(n);
  for (auto& v : out) v = draw(spec, rng);
  return out;
}

Eigen::MatrixXd psd_factor(const Eigen::MatrixXd& sigma) {
  if (sigma.rows() != sigma.cols()) throw std::invalid_argument("covariance must be square");
  const double scale = std::max(1.0, sigma.cwiseAbs().maxCoeff());
  if ((sigma - sigma.transpose()).cwiseAbs().maxCoeff() > 1e-9 * scale)
    throw std::invalid_argument("covariance must be symmetric");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(0.5 * (sigma + sigma.transpose()));
  const auto& ev = eig.eigenvalues();
  const double top = std::max(1.0, ev.cwiseAbs().maxCoeff());
  if (ev.minCoeff() < -1e-9 * top) throw std::invalid_argument("covariance is not PSD");
  return eig.eigenvectors() * ev.cwiseMax(0.0).cwiseSqrt().asDiagonal();
}

Dataset gen_linear_model(std::size_t n, std::size_t d, const Eigen::VectorXd& w_star, const CovSpec& cov,
                         const DistSpec& noise, std::uint64_t seed) {
  if (d == 0) throw std::invalid_argument("d must be positive");
  if (static_cast<std::size_t>(w_star.size()) != d) throw std::invalid_argument("w_star must have length d");
  validate(noise);
  const auto noise_mean = dist_mean(noise);
  if (!noise_mean) throw std::invalid_argument("mean undefined");

  const auto D = static_cast<Eigen::Index>(d);
  const auto N = static_cast<Eigen::Index>(n);
  Dataset data;
  data.X.resize(N, D);
  data.y.resize(N);
  GroundTruth truth;
  truth.w_opt = w_star;
  truth.noise_variance = dist_variance(noise);

  // Covariates and noise use separate streams so changing one never shifts the other.
  Rng x_rng(seed, 0);
  Rng noise_rng(seed, 1);
  std::visit(overloaded{
                 [&](const IdentityCov&) {
                   truth.sigma = Eigen::MatrixXd::Identity(D, D);
                   for (Eigen::Index i = 0; i < N; ++i)
                     for (Eigen::Index j = 0; j < D; ++j) data.X(i, j) = draw_standard_normal(x_rng);
                 },
                 [&](const ExplicitCov& c) {
                   if (c.sigma.rows() != D) throw std::invalid_argument("covariance must be d x d");
                   const Eigen::MatrixXd L = psd_factor(c.sigma);
                   truth.sigma = 0.5 * (c.sigma + c.sigma.transpose());
                   Eigen::VectorXd z(D);
                   for (Eigen::Index i = 0; i < N; ++i) {
                     for (Eigen::Index j = 0; j < D; ++j) z(j) = draw_standard_normal(x_rng);
                     data.X.row(i) = (L * z).transpose();
                   }
                 },
                 [&](const OrthonormalBasisUniform&) {
                   truth.sigma = Eigen::MatrixXd::Identity(D, D) / static_cast<double>(d);
                   data.X.setZero();
                   for (Eigen::Index i = 0; i < N; ++i) data.X(i, static_cast<Eigen::Index>(x_rng.below(d))) = 1.0;
                 },
             },
             cov);
  for (Eigen::Index i = 0; i < N; ++i) data.y(i) = data.X.row(i).dot(w_star) + (draw(noise, noise_rng) - *noise_mean);
  data.truth = std::move(truth);
  return data;
}

MinimaxDataset gen_minimax_design(std::size_t n, std::size_t d, double sigma, const Eigen::VectorXd& w_star,
                                  std::uint64_t seed) {
  MinimaxDataset out;
  out.data = gen_linear_model(n, d, w_star, OrthonormalBasisUniform{}, Gaussian{0.0, sigma}, seed);
  out.basis_counts.assign(d, 0);
  for (Eigen::Index i = 0; i < out.data.X.rows(); ++i) {
    Eigen::Index j = 0;
    out.data.X.row(i).maxCoeff(&j);
    ++out.basis_counts[static_cast<std::size_t>(j)];
  }
  return out;
}

}  // namespace heavytail
