#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace heavytail {

struct MomConfig {
  std::size_t k = 1;
  std::uint64_t seed = 0;
};

// Seeded uniform shuffle of 0..n-1, split into k contiguous groups of
// floor(n/k) indices; the n - k*floor(n/k) trailing indices are dropped.
// Throws std::invalid_argument("more groups than samples") when k > n.
std::vector<std::vector<std::size_t>> partition_indices(std::size_t n, std::size_t k, std::uint64_t seed);

std::vector<std::vector<double>> partition(std::span<const double> sample, std::size_t k, std::uint64_t seed);

// Lower median of the group means after a seeded partition.
double median_of_means(std::span<const double> sample, const MomConfig& config);

// Same estimator on the sample in its given order (no shuffle): group g is
// sample[g*m, (g+1)*m) with m = floor(n/k).
double median_of_means_ordered(std::span<const double> sample, std::size_t k);

// sigma * sqrt(6k/n): the deviation that holds with probability >= 1 - exp(-k/4.5).
double mom_deviation_bound(double sigma, std::size_t n, std::size_t k);
double mom_failure_probability(std::size_t k);

// k = ceil(c * ln(1/delta)), at least 1. The default c = 4.5 inverts the
// exp(-k/4.5) failure probability.
std::size_t groups_for_confidence(double delta, double c = 4.5);

}  // namespace heavytail
