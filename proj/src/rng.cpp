#include "heavytail/rng.hpp"

#include <stdexcept>

namespace heavytail {

std::uint64_t Rng::below(std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("bound must be positive");
  // Reject the top partial block so every residue is equally likely.
  const std::uint64_t limit = max() - max() % bound;
  for (;;) {
    const std::uint64_t x = (*this)();
    if (x < limit) return x % bound;
  }
}

}  // namespace heavytail
