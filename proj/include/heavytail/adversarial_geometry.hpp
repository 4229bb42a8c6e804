#pragma once

// Finite metric spaces and simplex geometry that realize the lower bounds and
// tightness results for robust distance approximation, plus formula
// evaluators for the approximation-factor tables.

#include <array>
#include <cstddef>
#include <functional>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace heavytail {

struct FiniteMetric {
  std::vector<std::string> labels;
  Eigen::MatrixXd dist;
  // Labels that may play the role of the unknown target.
  std::vector<std::string> w_opt_candidates;
  // How many candidates of W sit at each label. Labels absent here carry none.
  std::map<std::string, std::size_t> multiplicity;

  std::size_t index_of(const std::string& label) const;
  double distance(const std::string& a, const std::string& b) const;
  std::size_t k() const;
  // W expanded to point indices, in label order.
  std::vector<std::size_t> candidate_points() const;
  // Delta_W(label, alpha) over the candidate multiset.
  double delta_radius(const std::string& center, double alpha) const;
};

struct MetricValidation {
  bool valid = true;
  bool square = true;
  bool symmetric = true;
  bool zero_diagonal = true;
  bool nonnegative = true;
  // Largest d(a,c) - d(a,b) - d(b,c) over all triples (<= 0 when the
  // triangle inequality holds), and the triple attaining it.
  double worst_violation = 0.0;
  std::array<std::size_t, 3> worst_triple{0, 0, 0};
};

// Exhaustive check of a distance table. Zero off-diagonal entries are allowed
// (pseudometrics). Violations are measured against rel_tol * max entry.
MetricValidation verify_metric(const Eigen::MatrixXd& table, double rel_tol = 1e-9);

// Text table: first line n, then n lines of n space-separated distances.
void write_metric_table(std::ostream& out, const Eigen::MatrixXd& table);
// Parses and validates; throws std::runtime_error on malformed or invalid input.
Eigen::MatrixXd read_metric_table(std::istream& in);

// Table plus sidecar lines: "labels ...", "w_opt ...", "W label:count ...".
void write_fixture(std::ostream& out, const FiniteMetric& metric);
FiniteMetric read_fixture(std::istream& in);

// Number of symmetric positions n with 1/n < 1/2 - alpha strictly, so that
// (n-1)/n of the candidates form a strict (1/2 + alpha) majority.
std::size_t obstruction_size(double alpha);

// Points a_1..a_n, b_1..b_n; d(a_i,a_j) = d(b_i,b_j) = 2, d(a_i,b_j) = 1,
// d(a_i,b_i) = 3. W puts k/n candidates at every b_i with k = 2n.
FiniteMetric build_setbased_lb_fixture(double alpha);

// As above with d(b_i,b_j) = 1 and d(a_i,b_i) = 2.
FiniteMetric build_spacebased_lb_fixture(double alpha);

// Pseudometric on v_1..v_n, y_1..y_{k-n}, w_opt with n = k(1/2 + alpha):
// d(w,v) = eps, d(w,y) = beta, d(v,v') = 2 eps, d(v,y) = beta - eps, d(y,y') = 0.
// W is the v's and y's, one candidate each. Throws std::invalid_argument when
// k(1/2 + alpha) is not an integer (the message suggests a k that works).
FiniteMetric build_geomedian_lb_fixture(double alpha, std::size_t k, double beta, double epsilon);

// Largest beta for which sumd(y_l) <= sumd(v_i) on the fixture above:
// (2 + 1/(2 alpha) - 1/(k alpha)) eps.
double geomedian_set_boundary_beta(double alpha, std::size_t k, double epsilon);
// Largest beta for which sumd(w_opt) >= sumd(y_l): (1 + 1/(2 alpha)) eps.
double geomedian_space_boundary_beta(double alpha, double epsilon);

// Radius of the smallest l_p ball containing e_1..e_n, and the coordinate a of
// its center (a, ..., a).
double simplex_inradius(std::size_t n, double p);
double simplex_center_coordinate(std::size_t n, double p);

struct SimplexFixture {
  std::vector<Eigen::VectorXd> vertices;      // e_i
  std::vector<Eigen::VectorXd> face_centers;  // b_i: 0 at i, 1/(n-1) elsewhere
};
SimplexFixture build_hilbert_simplex_fixture(std::size_t n);

// Approximation-factor formulas, as functions of alpha in (0, 1/2).
namespace factors {
double median_distance_set(double alpha);
double median_distance_space(double alpha);
double geometric_median_set(double alpha);
double geometric_median_space(double alpha);
double minsker_hilbert(double alpha);
double hilbert_set_lower(double alpha);
double hilbert_space_lower(double alpha);
}  // namespace factors

struct NormalizedFactor {
  double alpha = 0.0;
  double value = 0.0;
};

// inf over alpha in (0, 1/2) of c(alpha) / (1/2 - alpha): grid scan then
// golden-section refinement around the best cell.
NormalizedFactor minimize_normalized_factor(const std::function<double(double)>& c_alpha);

}  // namespace heavytail
