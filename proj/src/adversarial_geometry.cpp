#include "heavytail/adversarial_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "heavytail/metric_select.hpp"

namespace heavytail {

namespace {

void check_alpha_open(double alpha) {
  if (!(alpha > 0.0 && alpha < 0.5)) throw std::invalid_argument("alpha must lie in (0, 1/2)");
}

double snap_to_integer(double x) {
  const double r = std::round(x);
  return std::abs(x - r) <= 1e-9 * std::max(1.0, std::abs(x)) ? r : x;
}

FiniteMetric two_layer_fixture(double alpha, double bb, double ab_same) {
  const std::size_t n = obstruction_size(alpha);
  const std::size_t per_b = 2;  // k = 2n, the smallest multiple of n that is >= 2n
  FiniteMetric m;
  for (std::size_t i = 1; i <= n; ++i) m.labels.push_back("a" + std::to_string(i));
  for (std::size_t i = 1; i <= n; ++i) m.labels.push_back("b" + std::to_string(i));
  const auto size = static_cast<Eigen::Index>(2 * n);
  m.dist = Eigen::MatrixXd::Zero(size, size);
  const auto N = static_cast<Eigen::Index>(n);
  for (Eigen::Index i = 0; i < N; ++i) {
    for (Eigen::Index j = 0; j < N; ++j) {
      if (i != j) {
        m.dist(i, j) = 2.0;
        m.dist(N + i, N + j) = bb;
      }
      const double ab = (i == j) ? ab_same : 1.0;
      m.dist(i, N + j) = ab;
      m.dist(N + j, i) = ab;
    }
  }
  for (std::size_t i = 1; i <= n; ++i) {
    m.w_opt_candidates.push_back("a" + std::to_string(i));
    m.multiplicity["b" + std::to_string(i)] = per_b;
  }
  return m;
}

}  // namespace

std::size_t FiniteMetric::index_of(const std::string& label) const {
  const auto it = std::find(labels.begin(), labels.end(), label);
  if (it == labels.end()) throw std::out_of_range("unknown label " + label);
  return static_cast<std::size_t>(it - labels.begin());
}

double FiniteMetric::distance(const std::string& a, const std::string& b) const {
  return dist(static_cast<Eigen::Index>(index_of(a)), static_cast<Eigen::Index>(index_of(b)));
}

std::size_t FiniteMetric::k() const {
  std::size_t total = 0;
  for (const auto& [label, count] : multiplicity) total += count;
  return total;
}

std::vector<std::size_t> FiniteMetric::candidate_points() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const auto it = multiplicity.find(labels[i]);
    if (it == multiplicity.end()) continue;
    out.insert(out.end(), it->second, i);
  }
  return out;
}

double FiniteMetric::delta_radius(const std::string& center, double alpha) const {
  const auto c = static_cast<Eigen::Index>(index_of(center));
  std::vector<double> d;
  for (const auto p : candidate_points()) d.push_back(dist(c, static_cast<Eigen::Index>(p)));
  return delta_radius_from_distances(d, alpha);
}

MetricValidation verify_metric(const Eigen::MatrixXd& table, double rel_tol) {
  MetricValidation v;
  if (table.rows() != table.cols()) {
    v.valid = v.square = false;
    return v;
  }
  const auto n = table.rows();
  const double scale = n > 0 ? std::max(1.0, table.cwiseAbs().maxCoeff()) : 1.0;
  const double slack = rel_tol * scale;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (std::abs(table(i, i)) > slack) v.zero_diagonal = false;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (!std::isfinite(table(i, j)) || table(i, j) < -slack) v.nonnegative = false;
      if (std::abs(table(i, j) - table(j, i)) > slack) v.symmetric = false;
    }
  }
  v.worst_violation = n >= 3 ? -std::numeric_limits<double>::infinity() : 0.0;
  for (Eigen::Index a = 0; a < n; ++a)
    for (Eigen::Index b = 0; b < n; ++b)
      for (Eigen::Index c = 0; c < n; ++c) {
        if (a == b || b == c || a == c) continue;
        const double excess = table(a, c) - table(a, b) - table(b, c);
        if (excess > v.worst_violation) {
          v.worst_violation = excess;
          v.worst_triple = {static_cast<std::size_t>(a), static_cast<std::size_t>(b), static_cast<std::size_t>(c)};
        }
      }
  v.valid = v.zero_diagonal && v.nonnegative && v.symmetric && v.worst_violation <= slack;
  return v;
}

void write_metric_table(std::ostream& out, const Eigen::MatrixXd& table) {
  out << table.rows() << '\n';
  out.precision(17);
  for (Eigen::Index i = 0; i < table.rows(); ++i) {
    for (Eigen::Index j = 0; j < table.cols(); ++j) out << (j ? " " : "") << table(i, j);
    out << '\n';
  }
}

Eigen::MatrixXd read_metric_table(std::istream& in) {
  long long n = -1;
  if (!(in >> n) || n < 0) throw std::runtime_error("metric table: expected point count on the first line");
  Eigen::MatrixXd table(n, n);
  for (long long i = 0; i < n; ++i)
    for (long long j = 0; j < n; ++j)
      if (!(in >> table(i, j)))
        throw std::runtime_error("metric table: missing entry at row " + std::to_string(i + 1) + ", column " +
                                 std::to_string(j + 1));
  const auto v = verify_metric(table);
  if (!v.symmetric) throw std::runtime_error("metric table: not symmetric");
  if (!v.zero_diagonal) throw std::runtime_error("metric table: nonzero diagonal");
  if (!v.nonnegative) throw std::runtime_error("metric table: negative or non-finite distance");
  if (!v.valid) {
    const auto& t = v.worst_triple;
    throw std::runtime_error("metric table: triangle inequality fails on (" + std::to_string(t[0] + 1) + "," +
                             std::to_string(t[1] + 1) + "," + std::to_string(t[2] + 1) + ")");
  }
  return table;
}

void write_fixture(std::ostream& out, const FiniteMetric& metric) {
  write_metric_table(out, metric.dist);
  out << "labels";
  for (const auto& l : metric.labels) out << ' ' << l;
  out << "\nw_opt";
  for (const auto& l : metric.w_opt_candidates) out << ' ' << l;
  out << "\nW";
  for (const auto& l : metric.labels) {
    const auto it = metric.multiplicity.find(l);
    if (it != metric.multiplicity.end()) out << ' ' << l << ':' << it->second;
  }
  out << '\n';
}

FiniteMetric read_fixture(std::istream& in) {
  FiniteMetric m;
  m.dist = read_metric_table(in);
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream fields(line);
    std::string key;
    if (!(fields >> key)) continue;
    std::string item;
    if (key == "labels") {
      while (fields >> item) m.labels.push_back(item);
    } else if (key == "w_opt") {
      while (fields >> item) m.w_opt_candidates.push_back(item);
    } else if (key == "W") {
      while (fields >> item) {
        const auto colon = item.rfind(':');
        if (colon == std::string::npos) throw std::runtime_error("fixture: W entry must be label:count");
        m.multiplicity[item.substr(0, colon)] = std::stoul(item.substr(colon + 1));
      }
    } else {
      throw std::runtime_error("fixture: unknown sidecar key " + key);
    }
  }
  if (m.labels.size() != static_cast<std::size_t>(m.dist.rows()))
    throw std::runtime_error("fixture: label count does not match table size");
  for (const auto& [label, count] : m.multiplicity) (void)m.index_of(label);
  for (const auto& label : m.w_opt_candidates) (void)m.index_of(label);
  return m;
}

std::size_t obstruction_size(double alpha) {
  check_alpha_open(alpha);
  const double x = snap_to_integer(1.0 / (0.5 - alpha));
  return static_cast<std::size_t>(std::floor(x)) + 1;
}

FiniteMetric build_setbased_lb_fixture(double alpha) { return two_layer_fixture(alpha, 2.0, 3.0); }

FiniteMetric build_spacebased_lb_fixture(double alpha) { return two_layer_fixture(alpha, 1.0, 2.0); }

FiniteMetric build_geomedian_lb_fixture(double alpha, std::size_t k, double beta, double epsilon) {
  check_alpha_open(alpha);
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  const double raw = static_cast<double>(k) * (0.5 + alpha);
  const double n_real = snap_to_integer(raw);
  if (n_real != std::floor(n_real)) {
    std::size_t suggestion = k + 1;
    while (suggestion < 1000 * (k + 1)) {
      const double t = snap_to_integer(static_cast<double>(suggestion) * (0.5 + alpha));
      if (t == std::floor(t)) break;
      ++suggestion;
    }
    throw std::invalid_argument("k(1/2 + alpha) must be an integer; try k = " + std::to_string(suggestion));
  }
  const auto n = static_cast<std::size_t>(n_real);
  if (n >= k) throw std::invalid_argument("need at least one y point");

  FiniteMetric m;
  for (std::size_t i = 1; i <= n; ++i) m.labels.push_back("v" + std::to_string(i));
  for (std::size_t i = 1; i <= k - n; ++i) m.labels.push_back("y" + std::to_string(i));
  m.labels.push_back("w_opt");
  const auto size = static_cast<Eigen::Index>(k + 1);
  const auto N = static_cast<Eigen::Index>(n);
  const auto K = static_cast<Eigen::Index>(k);
  m.dist = Eigen::MatrixXd::Zero(size, size);
  auto set = [&](Eigen::Index i, Eigen::Index j, double d) {
    m.dist(i, j) = d;
    m.dist(j, i) = d;
  };
  for (Eigen::Index i = 0; i < N; ++i) {
    set(i, K, epsilon);
    for (Eigen::Index j = i + 1; j < N; ++j) set(i, j, 2.0 * epsilon);
    for (Eigen::Index t = N; t < K; ++t) set(i, t, beta - epsilon);
  }
  for (Eigen::Index t = N; t < K; ++t) set(t, K, beta);
  m.w_opt_candidates = {"w_opt"};
  for (std::size_t i = 0; i < k; ++i) m.multiplicity[m.labels[i]] = 1;
  return m;
}

double geomedian_set_boundary_beta(double alpha, std::size_t k, double epsilon) {
  check_alpha_open(alpha);
  const double n = snap_to_integer(static_cast<double>(k) * (0.5 + alpha));
  // With n = k(1/2 + alpha) integral the boundary is (4n - k - 2) / (2n - k) eps,
  // a ratio of integers rounded once.
  if (n == std::floor(n) && 2.0 * n > static_cast<double>(k)) {
    const double kk = static_cast<double>(k);
    return (4.0 * n - kk - 2.0) / (2.0 * n - kk) * epsilon;
  }
  return (2.0 + 1.0 / (2.0 * alpha) - 1.0 / (static_cast<double>(k) * alpha)) * epsilon;
}

double geomedian_space_boundary_beta(double alpha, double epsilon) {
  check_alpha_open(alpha);
  return (1.0 + 1.0 / (2.0 * alpha)) * epsilon;
}

double simplex_center_coordinate(std::size_t n, double p) {
  if (!(p > 1.0)) throw std::invalid_argument("p must exceed 1");
  if (n < 2) throw std::invalid_argument("n must be at least 2");
  const double m = static_cast<double>(n - 1);
  return 1.0 / (1.0 + std::pow(m, 1.0 / (p - 1.0)));
}

double simplex_inradius(std::size_t n, double p) {
  if (!(p > 1.0)) throw std::invalid_argument("p must exceed 1");
  if (n < 2) throw std::invalid_argument("n must be at least 2");
  const double m = static_cast<double>(n - 1);
  const double first = std::pow(1.0 + std::pow(m, -1.0 / (p - 1.0)), -p);
  const double rest = m * std::pow(1.0 + std::pow(m, 1.0 / (p - 1.0)), -p);
  return std::pow(first + rest, 1.0 / p);
}

SimplexFixture build_hilbert_simplex_fixture(std::size_t n) {
  if (n < 3) throw std::invalid_argument("simplex fixture needs n >= 3");
  SimplexFixture f;
  const auto N = static_cast<Eigen::Index>(n);
  for (Eigen::Index i = 0; i < N; ++i) {
    f.vertices.push_back(Eigen::VectorXd::Unit(N, i));
    Eigen::VectorXd b = Eigen::VectorXd::Constant(N, 1.0 / static_cast<double>(n - 1));
    b(i) = 0.0;
    f.face_centers.push_back(std::move(b));
  }
  return f;
}

namespace factors {

namespace {
double ceil_inverse_margin(double alpha) { return std::ceil(snap_to_integer(1.0 / (0.5 - alpha))); }
}  // namespace

double median_distance_set(double) { return 3.0; }
double median_distance_space(double) { return 2.0; }
double geometric_median_set(double alpha) { return 2.0 + 1.0 / (2.0 * alpha); }
double geometric_median_space(double alpha) { return 1.0 + 1.0 / (2.0 * alpha); }
double minsker_hilbert(double alpha) { return (0.5 + alpha) / std::sqrt(2.0 * alpha); }

double hilbert_set_lower(double alpha) {
  const double n = ceil_inverse_margin(alpha);
  return std::sqrt(1.0 + 2.0 / (n - 2.0));
}

double hilbert_space_lower(double alpha) {
  const double n = ceil_inverse_margin(alpha);
  return std::sqrt(1.0 + 1.0 / (n * n - 2.0 * n));
}

}  // namespace factors

NormalizedFactor minimize_normalized_factor(const std::function<double(double)>& c_alpha) {
  auto f = [&](double a) { return c_alpha(a) / (0.5 - a); };
  constexpr int cells = 4000;
  constexpr double edge = 1e-12;
  const double h = 0.5 / cells;
  int best = 1;
  double best_value = std::numeric_limits<double>::infinity();
  for (int i = 1; i < cells; ++i) {
    const double v = f(i * h);
    if (v < best_value) {
      best_value = v;
      best = i;
    }
  }
  double lo = std::max(edge, (best - 1) * h);
  double hi = std::min(0.5 - edge, (best + 1) * h);
  const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - ratio * (hi - lo);
  double x2 = lo + ratio * (hi - lo);
  double f1 = f(x1);
  double f2 = f(x2);
  for (int it = 0; it < 200 && hi - lo > 1e-14; ++it) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - ratio * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + ratio * (hi - lo);
      f2 = f(x2);
    }
  }
  NormalizedFactor out{best * h, best_value};
  for (const double a : {x1, x2, lo, hi}) {
    const double v = f(a);
    if (v < out.value) out = {a, v};
  }
  return out;
}

}  // namespace heavytail
