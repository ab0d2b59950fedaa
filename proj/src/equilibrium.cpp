#include "hmf/equilibrium.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "hmf/error.hpp"

namespace hmf {
namespace {

constexpr double kPi = std::numbers::pi;

struct BoltzmannMoments {
  double weight_sum = 0.0;  // sum of exp(beta m (cos x - 1))
  double cos_sum = 0.0;     // same, weighted by cos x
};

BoltzmannMoments boltzmann_moments(double m, double beta, std::size_t nodes) {
  BoltzmannMoments mom;
  const double h = 2.0 * kPi / static_cast<double>(nodes);
  for (std::size_t j = 0; j < nodes; ++j) {
    const double x = -kPi + h * static_cast<double>(j);
    const double c = std::cos(x);
    const double e = std::exp(beta * m * (c - 1.0));
    mom.weight_sum += e;
    mom.cos_sum += c * e;
  }
  return mom;
}

// log of int_{-pi}^{pi} exp(beta m cos x) dx
double log_spatial_partition(double m, double beta, std::size_t nodes) {
  const auto mom = boltzmann_moments(m, beta, nodes);
  const double h = 2.0 * kPi / static_cast<double>(nodes);
  return beta * m + std::log(h * mom.weight_sum);
}

}  // namespace

double consistency_map(double m, double beta, std::size_t nodes) {
  const auto mom = boltzmann_moments(m, beta, nodes);
  return mom.cos_sum / mom.weight_sum;
}

EquilibriumState solve_m0(double temperature, double tol) {
  if (!(temperature > 0.0) || !std::isfinite(temperature))
    throw InvalidParameter("temperature must be positive, got " + std::to_string(temperature));
  if (!(tol > 0.0)) throw InvalidParameter("tolerance must be positive");

  EquilibriumState eq;
  eq.temperature = temperature;
  eq.beta = 1.0 / temperature;
  const double beta = eq.beta;
  auto residual = [&](double m) { return consistency_map(m, beta) - m; };

  // For beta <= 2 the map satisfies M(m) < beta m / 2 <= m for every m > 0.
  double m = 0.0;
  if (beta > 2.0) {
    // Iterates from m = 1 decrease monotonically onto the largest fixed point.
    constexpr double relax = 1.0;
    constexpr int max_iterations = 500;
    m = 1.0;
    double g = residual(m);
    for (int it = 0; it < max_iterations && std::abs(g) > tol; ++it) {
      m += relax * g;
      g = residual(m);
    }
    if (std::abs(g) > tol) {
      // Slow contraction near the critical point: bisect on the sign change.
      double hi = m;
      double lo = 0.5 * hi;
      while (lo > 1e-300 && residual(lo) <= 0.0) lo *= 0.5;
      if (lo <= 1e-300) {
        m = 0.0;
      } else {
        for (int it = 0; it < 2000; ++it) {
          const double mid = 0.5 * (lo + hi);
          const double gm = residual(mid);
          m = mid;
          if (std::abs(gm) <= tol || hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * mid)
            break;
          (gm > 0.0 ? lo : hi) = mid;
        }
      }
    }
  }

  eq.m0 = m;
  eq.omega0 = std::sqrt(m);
  eq.log_norm = -(0.5 * std::log(2.0 * kPi / beta) + log_spatial_partition(m, beta, kConsistencyNodes));
  eq.norm = std::exp(eq.log_norm);
  return eq;
}

double f0_density(double x, double p, const EquilibriumState& eq) {
  return std::exp(eq.log_norm - eq.beta * (0.5 * p * p - eq.m0 * std::cos(x)));
}

}  // namespace hmf
