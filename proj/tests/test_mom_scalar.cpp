#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "heavytail/median.hpp"
#include "heavytail/mom_scalar.hpp"
#include "heavytail/rng.hpp"
#include "heavytail/synth_data.hpp"

using namespace heavytail;

namespace {

// Two-sample Kolmogorov-Smirnov statistic.
double ks_statistic(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == x) ++i;
    while (j < b.size() && b[j] == x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / a.size() - static_cast<double>(j) / b.size()));
  }
  return d;
}

}  // namespace

TEST(Median, LowerMedianConvention) {
  EXPECT_DOUBLE_EQ(lower_median(std::vector<double>{0, 0, 5, 5}), 0.0);
  EXPECT_DOUBLE_EQ(lower_median(std::vector<double>{3, 1, 2}), 2.0);
  EXPECT_DOUBLE_EQ(lower_median(std::vector<double>{4}), 4.0);
  EXPECT_THROW(lower_median(std::vector<double>{}), std::invalid_argument);
}

TEST(Partition, SizesAndDrops) {
  const std::vector<double> six = {1, 2, 3, 4, 5, 6};
  auto g = partition(six, 3, 1);
  ASSERT_EQ(g.size(), 3u);
  for (const auto& grp : g) EXPECT_EQ(grp.size(), 2u);

  const std::vector<double> seven = {1, 2, 3, 4, 5, 6, 7};
  g = partition(seven, 3, 1);
  std::vector<double> used;
  for (const auto& grp : g) {
    EXPECT_EQ(grp.size(), 2u);
    used.insert(used.end(), grp.begin(), grp.end());
  }
  std::sort(used.begin(), used.end());
  EXPECT_EQ(used.size(), 6u);
  EXPECT_TRUE(std::includes(seven.begin(), seven.end(), used.begin(), used.end()));
  EXPECT_EQ(std::adjacent_find(used.begin(), used.end()), used.end());

  g = partition(seven, 1, 4);
  ASSERT_EQ(g.size(), 1u);
  std::vector<double> all = g[0];
  std::sort(all.begin(), all.end());
  EXPECT_EQ(all, seven);
}

TEST(Partition, Deterministic) {
  EXPECT_EQ(partition_indices(50, 7, 123), partition_indices(50, 7, 123));
  EXPECT_NE(partition_indices(50, 7, 123), partition_indices(50, 7, 124));
}

TEST(Partition, Errors) {
  const std::vector<double> two = {1, 2};
  EXPECT_THROW(partition(two, 3, 0), std::invalid_argument);
  EXPECT_THROW(partition(two, 0, 0), std::invalid_argument);
}

TEST(MedianOfMeans, SpecExamples) {
  const std::vector<double> c(40, 2.5);
  for (std::size_t k : {1u, 3u, 8u, 40u}) EXPECT_DOUBLE_EQ(median_of_means(c, {k, 9}), 2.5);
  const std::vector<double> s = {1, 2, 3, 4, 5, 6};
  EXPECT_DOUBLE_EQ(median_of_means_ordered(s, 3), 3.5);
  const std::vector<double> v = {9, -1, 4, 7, 0, 3, 3};
  EXPECT_DOUBLE_EQ(median_of_means(v, {7, 5}), lower_median(v));
}

TEST(MedianOfMeans, NonFiniteInputThrows) {
  const std::vector<double> v = {1, std::nan(""), 2};
  EXPECT_THROW(median_of_means(v, {1, 0}), std::invalid_argument);
}

TEST(MedianOfMeans, AffineEquivariance) {
  // Odd k: with even k a negative scale swaps the lower and upper medians.
  const auto x = sample_scalar(StudentT{3.0}, 301, 17);
  for (double a : {2.0, -0.5, 3.0}) {
    std::vector<double> y(x.size());
    std::transform(x.begin(), x.end(), y.begin(), [&](double v) { return a * v + 4.0; });
    const double lhs = median_of_means(y, {11, 77});
    const double rhs = a * median_of_means(x, {11, 77}) + 4.0;
    EXPECT_NEAR(lhs, rhs, 1e-12 * (1 + std::abs(rhs)));
  }
}

TEST(MedianOfMeans, PermutationInvarianceInDistribution) {
  constexpr std::size_t trials = 10000;
  std::vector<double> a, b;
  for (std::size_t t = 0; t < trials; ++t) {
    auto x = sample_scalar(StudentT{3.0}, 60, derive_seed(2024, t));
    a.push_back(median_of_means(x, {5, derive_seed(1, t)}));
    std::reverse(x.begin(), x.end());
    std::rotate(x.begin(), x.begin() + 17, x.end());
    b.push_back(median_of_means(x, {5, derive_seed(2, t)}));
  }
  // Critical value at level 1e-3: sqrt(-ln(5e-4) / 2) * sqrt(2 / trials).
  const double crit = std::sqrt(-std::log(0.0005) / 2.0) * std::sqrt(2.0 / trials);
  EXPECT_LT(ks_statistic(a, b), crit);
}

TEST(DeviationBound, SpecExamples) {
  EXPECT_NEAR(mom_deviation_bound(1.0, 1200, 24), 0.34641016, 1e-8);
  EXPECT_DOUBLE_EQ(mom_deviation_bound(0.0, 1200, 24), 0.0);
  EXPECT_NEAR(mom_deviation_bound(2.0, 600, 6), 0.48989795, 1e-8);
  EXPECT_NEAR(mom_failure_probability(24), std::exp(-24 / 4.5), 1e-15);
}

TEST(DeviationBound, GroupsForConfidence) {
  EXPECT_EQ(groups_for_confidence(0.01), static_cast<std::size_t>(std::ceil(4.5 * std::log(100.0))));
  EXPECT_EQ(groups_for_confidence(0.1), 11u);
  EXPECT_EQ(groups_for_confidence(0.001), 32u);
  EXPECT_THROW(groups_for_confidence(0.0), std::invalid_argument);
  EXPECT_THROW(groups_for_confidence(1.0), std::invalid_argument);
}
