#pragma once

#include <cstddef>
#include <span>

namespace heavytail {

// 1-based rank of the lower median among m values: ceil(m/2).
constexpr std::size_t lower_median_rank(std::size_t m) { return (m + 1) / 2; }

// Lower median (order statistic ceil(m/2)); always an attained value.
// Throws std::invalid_argument on empty input.
double lower_median(std::span<const double> values);

// Value of the given 1-based order statistic. Requires 1 <= rank <= size.
double order_statistic(std::span<const double> values, std::size_t rank);

}  // namespace heavytail
