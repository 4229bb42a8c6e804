#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "heavytail/heavy_regression.hpp"
#include "heavytail/lowrank_cov.hpp"
#include "heavytail/rng.hpp"
#include "heavytail/synth_data.hpp"

using namespace heavytail;

namespace {

Eigen::MatrixXd random_psd(std::mt19937_64& gen, Eigen::Index d) {
  std::normal_distribution<double> g;
  Eigen::MatrixXd a(d, d);
  for (Eigen::Index i = 0; i < a.size(); ++i) a.data()[i] = g(gen);
  Eigen::MatrixXd s = a * a.transpose() / static_cast<double>(d);
  return 0.5 * (s + s.transpose());
}

Eigen::MatrixXd random_orthogonal(std::mt19937_64& gen, Eigen::Index d) {
  std::normal_distribution<double> g;
  Eigen::MatrixXd a(d, d);
  for (Eigen::Index i = 0; i < a.size(); ++i) a.data()[i] = g(gen);
  return a.householderQr().householderQ();
}

// Minimizes 1/2 (mu - a)^2 + lambda |a| by golden-section search on [-|mu|-1, |mu|+1].
double scalar_prox_oracle(double mu, double lambda) {
  // Bisection on the sign of the monotone subgradient a - mu + lambda sign(a).
  if (std::abs(mu) <= lambda) return 0.0;
  double lo = -std::abs(mu) - 1, hi = std::abs(mu) + 1;
  for (int i = 0; i < 200; ++i) {
    const double m = 0.5 * (lo + hi);
    const double g = m - mu + (m > 0 ? lambda : m < 0 ? -lambda : 0.0);
    if (g > 0) {
      hi = m;
    } else {
      lo = m;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST(SpectralNorm, Examples) {
  EXPECT_DOUBLE_EQ(spectral_norm(Eigen::Vector2d(3, -5).asDiagonal().toDenseMatrix()), 5.0);
  EXPECT_NEAR(spectral_norm(Eigen::MatrixXd::Identity(4, 4)), 1.0, 1e-15);
  Eigen::MatrixXd m(2, 2);
  m << 2, 1, 1, 2;
  EXPECT_NEAR(spectral_norm(m), 3.0, 1e-14);
  m(0, 1) = 1.5;
  EXPECT_THROW(spectral_norm(m), std::invalid_argument);
}

TEST(TraceNormShrink, Examples) {
  const Eigen::MatrixXd s = Eigen::Vector3d(3, 1, 0.2).asDiagonal();
  const Eigen::MatrixXd out = trace_norm_shrink(s, 0.5);
  EXPECT_TRUE(out.isApprox(Eigen::Vector3d(2.5, 0.5, 0).asDiagonal().toDenseMatrix(), 1e-14));
  EXPECT_TRUE(trace_norm_shrink(s, 0.0).isApprox(s, 1e-14));
  EXPECT_EQ(trace_norm_shrink(s, 3.0), Eigen::MatrixXd::Zero(3, 3));
}

TEST(TraceNormShrink, Errors) {
  const Eigen::MatrixXd ind = Eigen::Vector2d(1, -0.1).asDiagonal();
  try {
    trace_norm_shrink(ind, 0.1);
    FAIL();
  } catch (const std::invalid_argument& e) {
    EXPECT_STREQ(e.what(), "input not PSD");
  }
  EXPECT_THROW(trace_norm_shrink(Eigen::MatrixXd::Identity(2, 2), -1.0), std::invalid_argument);
  // Rounding-level negative eigenvalues are tolerated.
  const Eigen::MatrixXd tiny = Eigen::Vector2d(1, -1e-12).asDiagonal();
  EXPECT_NO_THROW(trace_norm_shrink(tiny, 0.1));
}

TEST(TraceNormShrink, MatchesScalarOracle) {
  std::mt19937_64 gen(17);
  for (int trial = 0; trial < 200; ++trial) {
    const Eigen::Index d = 1 + trial % 6;
    const Eigen::MatrixXd s = random_psd(gen, d);
    const double lambda = 0.05 * (trial % 20);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(s);
    Eigen::VectorXd mu = eig.eigenvalues();
    for (Eigen::Index i = 0; i < d; ++i) mu(i) = scalar_prox_oracle(mu(i), lambda);
    const Eigen::MatrixXd oracle = eig.eigenvectors() * mu.asDiagonal() * eig.eigenvectors().transpose();
    ASSERT_LE((trace_norm_shrink(s, lambda) - oracle).cwiseAbs().maxCoeff(), 1e-8);
  }
}

TEST(TraceNormShrink, RotationEquivariance) {
  std::mt19937_64 gen(19);
  for (int trial = 0; trial < 50; ++trial) {
    const Eigen::Index d = 2 + trial % 5;
    const Eigen::MatrixXd s = random_psd(gen, d);
    const Eigen::MatrixXd q = random_orthogonal(gen, d);
    const Eigen::MatrixXd lhs = trace_norm_shrink(q * s * q.transpose(), 0.3);
    const Eigen::MatrixXd rhs = q * trace_norm_shrink(s, 0.3) * q.transpose();
    ASSERT_LE((lhs - rhs).cwiseAbs().maxCoeff(), 1e-8);
  }
}

TEST(CovSelect, IdenticalRows) {
  Eigen::MatrixXd x(30, 3);
  x.rowwise() = Eigen::RowVector3d(1, -2, 0.5);
  const auto sel = cov_median_select(x, 5, 3);
  const Eigen::Vector3d v(1, -2, 0.5);
  EXPECT_TRUE(sel.sigma_hat.isApprox(v * v.transpose()));
  for (double r : sel.report.radii) EXPECT_NEAR(r, 0.0, 1e-12);
}

TEST(CovSelect, OutlierGroupIsNotSelected) {
  std::vector<Eigen::MatrixXd> groups = {Eigen::MatrixXd::Identity(2, 2), Eigen::MatrixXd::Identity(2, 2),
                                         Eigen::Vector2d(100, 1).asDiagonal()};
  const auto rep = select_median_distance_set(
      groups, [](const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) { return spectral_norm(a - b); });
  EXPECT_LT(rep.selected_index, 2u);
  EXPECT_DOUBLE_EQ(rep.radii[2], 99.0);
}

TEST(CovSelect, GaussianEnvelope) {
  const std::size_t n = 5000, d = 5;
  int within = 0;
  const int reps = 200;
  for (int r = 0; r < reps; ++r) {
    const auto data = gen_linear_model(n, d, Eigen::VectorXd::Zero(d), IdentityCov{}, Gaussian{}, derive_seed(4, r));
    const auto sel = cov_median_select(data.X, 10, derive_seed(5, r));
    const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(d, d);
    within += spectral_norm(sel.sigma_hat - id) <= 5.0 * spectral_norm(empirical_second_moment(data.X) - id);
  }
  EXPECT_GE(within, 0.95 * reps);
}

TEST(CovSelect, FactorThreeAgainstProbe) {
  // More than half of the group matrices sit within eps of the probe.
  std::mt19937_64 gen(23);
  std::uniform_real_distribution<double> u(-1, 1);
  const double eps = 0.1;
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t k = 3 + trial % 7;
    const Eigen::MatrixXd probe = random_psd(gen, 3);
    std::vector<Eigen::MatrixXd> groups;
    for (std::size_t i = 0; i < k; ++i) {
      Eigen::MatrixXd e(3, 3);
      for (Eigen::Index j = 0; j < 9; ++j) e.data()[j] = u(gen);
      e = (0.5 * (e + e.transpose())).eval();
      const double scale = i < k / 2 + 1 ? eps / spectral_norm(e) * std::abs(u(gen)) : 10.0 / spectral_norm(e);
      groups.push_back(probe + scale * e);
    }
    auto rho = [](const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) { return spectral_norm(a - b); };
    const auto rep = select_median_distance_set(groups, rho);
    ASSERT_LE(rho(groups[rep.selected_index], probe), 3 * eps + 1e-12);
  }
}

TEST(RankTruncations, BestApproximations) {
  const Eigen::MatrixXd s = Eigen::Vector3d(1, 3, 0.5).asDiagonal();
  const auto t = rank_truncations(s);
  ASSERT_EQ(t.size(), 3u);
  EXPECT_TRUE(t[0].isApprox(Eigen::Vector3d(0, 3, 0).asDiagonal().toDenseMatrix()));
  EXPECT_TRUE(t[1].isApprox(Eigen::Vector3d(1, 3, 0).asDiagonal().toDenseMatrix()));
  EXPECT_TRUE(t[2].isApprox(s));
  EXPECT_EQ(numerical_rank(t[0]), 1u);
  EXPECT_EQ(numerical_rank(t[1]), 2u);
  EXPECT_EQ(numerical_rank(Eigen::MatrixXd::Zero(2, 2)), 0u);
}

TEST(KoltCheck, ExactEstimateHasNonnegativeMargin) {
  const Eigen::MatrixXd s = Eigen::Vector3d(3, 1, 0).asDiagonal();
  const auto rep = kolt_bound_check(s, s, s, 0.1);
  EXPECT_FALSE(rep.vacuous);
  for (const auto& c : rep.candidates) EXPECT_GE(c.margin(), 0.0);
}

TEST(KoltCheck, PerturbedDiagonal) {
  const Eigen::MatrixXd sigma = Eigen::Vector3d(3, 1, 0).asDiagonal();
  Eigen::MatrixXd e(3, 3);
  e << 0.5, 1, 0, 1, -0.2, 0, 0, 0, 1;
  const Eigen::MatrixXd hat = sigma + 0.1 * e;
  const double lambda = 0.2;
  ASSERT_LE(spectral_norm(hat - sigma), lambda);
  const auto rep = kolt_bound_check(trace_norm_shrink(hat, lambda), sigma, hat, lambda);
  EXPECT_FALSE(rep.vacuous);
  ASSERT_EQ(rep.candidates.size(), 4u);  // sigma and its rank 1, 2, 3 truncations
  EXPECT_TRUE(rep.holds());
  for (const auto& c : rep.candidates) EXPECT_GE(c.margin(), 0.0);
}

TEST(KoltCheck, VacuousGate) {
  const Eigen::MatrixXd sigma = Eigen::MatrixXd::Identity(2, 2);
  const auto rep = kolt_bound_check(sigma, sigma, 2.0 * sigma, 0.5);
  EXPECT_TRUE(rep.vacuous);
  EXPECT_DOUBLE_EQ(rep.deviation, 1.0);
}

TEST(ShrinkageLevel, RateShape) {
  const double l1 = shrinkage_level(1.0, 5, 1000, 0.01, 2.0);
  const double l4 = shrinkage_level(1.0, 5, 4000, 0.01, 2.0);
  // Exponent 1 / (2 (1 + 1/eta)) = 1/3 for eta = 2.
  EXPECT_NEAR(l1 / l4, std::pow(4.0, 1.0 / 3.0), 1e-12);
  EXPECT_THROW(shrinkage_level(0.0, 5, 10, 0.1, 1.0), std::invalid_argument);
}
