#pragma once

#include <cmath>

namespace hmf::detail {

// Positions and momenta live on fixed binary grids and every kick and drift
// increment is rounded onto the same grid. Sums of grid values are exact
// (for |x + dt p| < 32 and |p| < 128), so a step with -dt undoes a step with
// dt bit for bit, even where round-off would otherwise grow exponentially.
// 2 pi in double precision is a multiple of the position quantum, so
// wrapping stays exact too.
inline constexpr double kPositionQuantum = 0x1p-48;
inline constexpr double kMomentumQuantum = 0x1p-46;

// Symmetric under v -> -v (round half to even).
inline double snap(double v, double quantum) { return std::rint(v / quantum) * quantum; }

}  // namespace hmf::detail
