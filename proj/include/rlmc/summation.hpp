#pragma once

#include <cstddef>
#include <span>

namespace rlmc {

// Pairwise (tree) summation. Fixed order for a given input, error O(log n eps).
inline double pairwise_sum(std::span<const double> x) {
  constexpr std::size_t kBlock = 8;
  if (x.size() <= kBlock) {
    double s = 0.0;
    for (double v : x) s += v;
    return s;
  }
  const std::size_t half = x.size() / 2;
  return pairwise_sum(x.first(half)) + pairwise_sum(x.subspan(half));
}

}  // namespace rlmc
