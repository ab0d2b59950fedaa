#include "hmf/theory.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "hmf/error.hpp"

namespace hmf {
namespace {

constexpr double kPi = std::numbers::pi;

// int_0^{pi/2} g(phi) dphi for g even and pi-periodic, by the trapezoidal rule
// over a full period with repeated doubling. Converges geometrically for
// analytic g; the rate degrades only next to the separatrix.
template <typename G>
double quarter_period_integral(G&& g) {
  std::size_t n = 16;
  double sum = 0.0;
  for (std::size_t j = 0; j < n; ++j) sum += g(kPi * static_cast<double>(j) / static_cast<double>(n));
  double estimate = 0.5 * kPi / static_cast<double>(n) * sum;
  constexpr std::size_t max_nodes = std::size_t{1} << 25;
  while (n < max_nodes) {
    double mid = 0.0;
    for (std::size_t j = 0; j < n; ++j)
      mid += g(kPi * (static_cast<double>(j) + 0.5) / static_cast<double>(n));
    sum += mid;
    n *= 2;
    const double next = 0.5 * kPi / static_cast<double>(n) * sum;
    const bool done = std::abs(next - estimate) <= 1e-15 * std::abs(next);
    estimate = next;
    if (done && n >= 64) break;
  }
  return estimate;
}

// Gauss-Legendre rule on [-1, 1] by Newton iteration on P_n.
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

GaussRule gauss_legendre(std::size_t n) {
  GaussRule rule{std::vector<double>(n), std::vector<double>(n)};
  for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(kPi * (static_cast<double>(i) + 0.75) / (static_cast<double>(n) + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * static_cast<double>(j) + 1.0) * z * p1 - static_cast<double>(j) * p2) /
             (static_cast<double>(j) + 1.0);
      }
      dp = static_cast<double>(n) * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    rule.nodes[i] = -z;
    rule.nodes[n - 1 - i] = z;
    rule.weights[i] = rule.weights[n - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
  return rule;
}

void require_positive_m0(double m0) {
  if (!(m0 > 0.0) || !std::isfinite(m0))
    throw InvalidParameter("pendulum strength m0 must be positive, got " + std::to_string(m0));
}

// Libration: sin(x/2) = k sin(phi), k^2 = (E + m0) / (2 m0), which removes
// the square-root singularities at the turning points.
PendulumOrbit libration(double energy, double m0) {
  const double k2 = std::clamp((energy + m0) / (2.0 * m0), 0.0, 1.0);
  const double root_m0 = std::sqrt(m0);
  const double quarter = quarter_period_integral(
      [k2](double phi) { const double s = std::sin(phi); return 1.0 / std::sqrt(1.0 - k2 * s * s); });
  const double area = quarter_period_integral([k2](double phi) {
    const double s = std::sin(phi);
    const double c = std::cos(phi);
    return c * c / std::sqrt(1.0 - k2 * s * s);
  });
  PendulumOrbit o;
  o.energy = energy;
  o.m0 = m0;
  o.regime = OrbitRegime::Libration;
  o.period = 4.0 * quarter / root_m0;
  o.frequency = 2.0 * kPi / o.period;
  o.action = 8.0 * root_m0 * k2 * area / kPi;
  return o;
}

// Rotation: E + m0 cos x = (E + m0)(1 - q^2 sin^2(x/2)), q^2 = 2 m0 / (E + m0).
PendulumOrbit rotation(double energy, double m0) {
  const double q2 = 2.0 * m0 / (energy + m0);
  const double scale = std::sqrt(2.0 * (energy + m0));
  const double inv = quarter_period_integral(
      [q2](double psi) { const double s = std::sin(psi); return 1.0 / std::sqrt(1.0 - q2 * s * s); });
  const double speed = quarter_period_integral(
      [q2](double psi) { const double s = std::sin(psi); return std::sqrt(1.0 - q2 * s * s); });
  PendulumOrbit o;
  o.energy = energy;
  o.m0 = m0;
  o.regime = OrbitRegime::Rotation;
  o.period = 4.0 * inv / scale;
  o.frequency = 2.0 * kPi / o.period;
  o.action = 4.0 * scale * speed / (2.0 * kPi);
  return o;
}

// Safeguarded Newton solve of J(E) = target on [lo, hi], using dJ/dE = 1/Omega.
PendulumOrbit solve_action(double target, double m0, double lo, double hi, double guess) {
  double e = std::clamp(guess, lo, hi);
  PendulumOrbit o = orbit_from_energy(e, m0);
  const double tol = 1e-14 * std::max(target, separatrix_action(m0));
  for (int it = 0; it < 200; ++it) {
    const double diff = o.action - target;
    if (std::abs(diff) <= tol) break;
    (diff > 0.0 ? hi : lo) = e;
    double next = e - diff * o.frequency;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (next == e) break;
    e = next;
    o = orbit_from_energy(e, m0);
  }
  return o;
}

}  // namespace

PendulumOrbit orbit_from_energy(double energy, double m0) {
  require_positive_m0(m0);
  if (!std::isfinite(energy) || energy < -m0)
    throw InvalidParameter("orbit energy must be >= -m0, got " + std::to_string(energy));
  if (std::abs(energy - m0) < kSeparatrixTolerance * m0)
    throw SeparatrixError("energy " + std::to_string(energy) + " lies on the separatrix");
  return energy < m0 ? libration(energy, m0) : rotation(energy, m0);
}

double separatrix_action(double m0) {
  require_positive_m0(m0);
  // upper branch p = 2 sqrt(m0) cos(x/2) over (-pi, pi), doubled for the lower one
  static const GaussRule rule = gauss_legendre(48);
  double upper = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double x = kPi * rule.nodes[i];
    upper += rule.weights[i] * 2.0 * std::sqrt(m0) * std::cos(0.5 * x);
  }
  upper *= kPi;
  return 2.0 * upper / (2.0 * kPi);
}

PendulumOrbit orbit_from_action(double action, double m0, OrbitRegime regime) {
  require_positive_m0(m0);
  const double js = separatrix_action(m0);
  const double gap = 2.0 * kSeparatrixTolerance * m0;
  if (regime == OrbitRegime::Libration) {
    if (!(action >= 0.0) || !(action < js))
      throw InvalidParameter("libration actions lie in [0, " + std::to_string(js) + ")");
    if (action == 0.0) return orbit_from_energy(-m0, m0);
    return solve_action(action, m0, -m0, m0 - gap, -m0 + std::sqrt(m0) * action);
  }
  if (!(action > 0.5 * js) || !std::isfinite(action))
    throw InvalidParameter("rotation actions lie above " + std::to_string(0.5 * js));
  double hi = std::max(2.0 * m0, 0.5 * action * action + m0);
  while (orbit_from_energy(hi, m0).action < action) hi *= 2.0;
  return solve_action(action, m0, m0 + gap, hi, 0.5 * action * action);
}

std::complex<double> angle_fourier(int m, const PendulumOrbit& orbit, AngleBasis which,
                                   std::size_t samples) {
  require_positive_m0(orbit.m0);
  if (!(orbit.period > 0.0) || !std::isfinite(orbit.period))
    throw SeparatrixError("orbit has no finite period");
  if (samples < 8) throw InvalidParameter("angle_fourier needs at least 8 samples");

  const double m0 = orbit.m0;
  double x, p;
  if (orbit.regime == OrbitRegime::Libration) {
    x = std::acos(std::clamp(-orbit.energy / m0, -1.0, 1.0));
    p = 0.0;
  } else {
    x = -kPi;
    p = std::sqrt(2.0 * (orbit.energy - m0));
  }

  constexpr std::size_t substeps = 8;
  const double h = orbit.period / static_cast<double>(samples * substeps);
  auto accel = [m0](double xx) { return -m0 * std::sin(xx); };

  std::complex<double> sum = 0.0;
  for (std::size_t n = 0; n < samples; ++n) {
    const double theta = 2.0 * kPi * static_cast<double>(n) / static_cast<double>(samples);
    const double g = which == AngleBasis::Cos ? std::cos(x) : std::sin(x);
    sum += g * std::polar(1.0, -static_cast<double>(m) * theta);
    for (std::size_t s = 0; s < substeps; ++s) {
      const double k1x = p, k1p = accel(x);
      const double k2x = p + 0.5 * h * k1p, k2p = accel(x + 0.5 * h * k1x);
      const double k3x = p + 0.5 * h * k2p, k3p = accel(x + 0.5 * h * k2x);
      const double k4x = p + h * k3p, k4p = accel(x + h * k3x);
      x += h / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
      p += h / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
    }
  }
  return sum * (2.0 * kPi / static_cast<double>(samples));
}

double small_action_slope(int m, AngleBasis which, double m0, double lo_fraction,
                          double hi_fraction, std::size_t points) {
  if (!(lo_fraction > 0.0 && lo_fraction < hi_fraction && hi_fraction < 1.0) || points < 2)
    throw InvalidParameter("need 0 < lo_fraction < hi_fraction < 1 and at least two points");
  const double js = separatrix_action(m0);
  std::vector<EnvelopePoint> pts;
  for (std::size_t i = 0; i < points; ++i) {
    const double u = static_cast<double>(i) / static_cast<double>(points - 1);
    const double j = js * lo_fraction * std::pow(hi_fraction / lo_fraction, u);
    const auto orbit = orbit_from_action(j, m0);
    pts.push_back({j, std::abs(angle_fourier(m, orbit, which))});
  }
  return fit_power_law(pts, pts.front().t, pts.back().t).exponent;
}

int leading_harmonic(AngleBasis which, double m0, double action_fraction, double threshold,
                     int max_harmonic) {
  const auto orbit = orbit_from_action(action_fraction * separatrix_action(m0), m0);
  for (int m = 1; m <= max_harmonic; ++m)
    if (std::abs(angle_fourier(m, orbit, which)) > threshold) return m;
  return 0;
}

DecayPrediction predict_decay(Component observable, double m0) {
  if (!(m0 >= 0.0)) throw InvalidParameter("m0 must be non-negative");
  // cos x is even under x -> -x, so its odd angle harmonics cancel on every
  // libration orbit and the leading term is m = 2; sin x keeps m = 1.
  const int harmonic = observable == Component::Mx ? 2 : 1;
  DecayPrediction d;
  d.observable = observable;
  d.harmonic = harmonic;
  d.singularity_index = harmonic;
  d.exponent = -(d.singularity_index + 1.0);
  d.frequency = harmonic * std::sqrt(m0);
  return d;
}

}  // namespace hmf
