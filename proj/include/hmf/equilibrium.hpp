#pragma once

#include <cstddef>

namespace hmf {

/// Thermal stationary state f0(x,p) = N exp(-beta (p^2/2 - m0 cos x)) of the
/// HMF model, with m0 the self-consistent magnetization.
struct EquilibriumState {
  double temperature = 0.0;
  double beta = 0.0;
  double m0 = 0.0;
  double omega0 = 0.0;  ///< sqrt(m0), small-oscillation frequency of the well
  double norm = 0.0;    ///< normalization constant of f0 over (-pi,pi] x R
  double log_norm = 0.0;
};

inline constexpr double kDefaultEquilibriumTolerance = 1e-10;
inline constexpr std::size_t kConsistencyNodes = 1024;

/// Magnetization produced by the Boltzmann factor of a field of strength m,
/// <cos x> under exp(beta m cos x), by periodic trapezoidal quadrature.
double consistency_map(double m, double beta, std::size_t nodes = kConsistencyNodes);

/// Largest fixed point of consistency_map; m0 = 0 when T >= 1/2.
EquilibriumState solve_m0(double temperature, double tol = kDefaultEquilibriumTolerance);

double f0_density(double x, double p, const EquilibriumState& eq);

}  // namespace hmf
