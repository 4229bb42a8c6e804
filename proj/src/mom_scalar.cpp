#include "heavytail/mom_scalar.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "heavytail/median.hpp"
#include "heavytail/rng.hpp"

namespace heavytail {

namespace {

double group_mean(std::span<const double> values) {
  double s = 0.0;
  for (const double v : values) s += v;
  return s / static_cast<double>(values.size());
}

void check_finite(std::span<const double> sample) {
  for (const double v : sample)
    if (!std::isfinite(v)) throw std::invalid_argument("sample has non-finite values");
}

}  // namespace

std::vector<std::vector<std::size_t>> partition_indices(std::size_t n, std::size_t k, std::uint64_t seed) {
  if (k == 0) throw std::invalid_argument("k must be positive");
  if (k > n) throw std::invalid_argument("more groups than samples");
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed);
  for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);

  const std::size_t m = n / k;
  std::vector<std::vector<std::size_t>> groups(k);
  for (std::size_t g = 0; g < k; ++g)
    groups[g].assign(order.begin() + static_cast<std::ptrdiff_t>(g * m),
                     order.begin() + static_cast<std::ptrdiff_t>((g + 1) * m));
  return groups;
}

std::vector<std::vector<double>> partition(std::span<const double> sample, std::size_t k, std::uint64_t seed) {
  const auto idx = partition_indices(sample.size(), k, seed);
  std::vector<std::vector<double>> groups(idx.size());
  for (std::size_t g = 0; g < idx.size(); ++g) {
    groups[g].reserve(idx[g].size());
    for (const auto i : idx[g]) groups[g].push_back(sample[i]);
  }
  return groups;
}

double median_of_means(std::span<const double> sample, const MomConfig& config) {
  check_finite(sample);
  const auto groups = partition(sample, config.k, config.seed);
  std::vector<double> means;
  means.reserve(groups.size());
  for (const auto& g : groups) means.push_back(group_mean(g));
  return lower_median(means);
}

double median_of_means_ordered(std::span<const double> sample, std::size_t k) {
  if (k == 0) throw std::invalid_argument("k must be positive");
  if (k > sample.size()) throw std::invalid_argument("more groups than samples");
  check_finite(sample);
  const std::size_t m = sample.size() / k;
  std::vector<double> means(k);
  for (std::size_t g = 0; g < k; ++g) means[g] = group_mean(sample.subspan(g * m, m));
  return lower_median(means);
}

double mom_deviation_bound(double sigma, std::size_t n, std::size_t k) {
  return sigma * std::sqrt(6.0 * static_cast<double>(k) / static_cast<double>(n));
}

double mom_failure_probability(std::size_t k) { return std::exp(-static_cast<double>(k) / 4.5); }

std::size_t groups_for_confidence(double delta, double c) {
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0, 1)");
  const double k = std::ceil(c * std::log(1.0 / delta) - 1e-12);
  return k < 1.0 ? 1 : static_cast<std::size_t>(k);
}

}  // namespace heavytail
