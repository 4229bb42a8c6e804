#include "heavytail/median.hpp"

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace heavytail {

double order_statistic(std::span<const double> values, std::size_t rank) {
  if (values.empty()) throw std::invalid_argument("order statistic of an empty set");
  if (rank < 1 || rank > values.size()) throw std::out_of_range("order statistic rank out of range");
  std::vector<double> buf(values.begin(), values.end());
  auto nth = buf.begin() + static_cast<std::ptrdiff_t>(rank - 1);
  std::nth_element(buf.begin(), nth, buf.end());
  return *nth;
}

double lower_median(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("median of an empty set");
  return order_statistic(values, lower_median_rank(values.size()));
}

}  // namespace heavytail
