#pragma once

#include <cstddef>

namespace hmf::detail {

// Four interleaved accumulators (element i goes to lane i % 4) folded as
// (l0 + l1) + (l2 + l3). Every kernel that reduces over a chunk uses this
// layout so that equal inputs give bitwise-equal sums.
struct LaneSum {
  double lane[4] = {0.0, 0.0, 0.0, 0.0};
  void add(std::size_t i, double v) { lane[i & 3] += v; }
  double total() const { return (lane[0] + lane[1]) + (lane[2] + lane[3]); }
};

}  // namespace hmf::detail
