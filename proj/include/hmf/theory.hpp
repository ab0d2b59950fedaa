#pragma once

#include <complex>
#include <cstddef>

#include "hmf/analysis.hpp"

namespace hmf {

enum class OrbitRegime { Libration, Rotation };

/// Orbit of the effective pendulum h(x, p) = p^2/2 - m0 cos x.
struct PendulumOrbit {
  double energy = 0.0;
  double m0 = 0.0;
  OrbitRegime regime = OrbitRegime::Libration;
  double action = 0.0;     ///< (1/2pi) closed-loop integral of p dx
  double period = 0.0;
  double frequency = 0.0;  ///< 2 pi / period
};

/// Relative distance |E - m0| / m0 below which an orbit counts as the separatrix.
inline constexpr double kSeparatrixTolerance = 1e-10;

PendulumOrbit orbit_from_energy(double energy, double m0);

/// Inverts J(E) within one regime. Libration actions lie in [0, J_s),
/// rotation actions in (J_s / 2, inf).
PendulumOrbit orbit_from_action(double action, double m0,
                                OrbitRegime regime = OrbitRegime::Libration);

/// Action of the closed separatrix loop (both momentum branches), which is
/// the upper end of the libration actions.
double separatrix_action(double m0);

enum class AngleBasis { Cos, Sin };

inline constexpr std::size_t kDefaultAngleSamples = 4096;

/// int_0^{2pi} g(x(theta)) e^{-i m theta} dtheta with g = cos or sin, from a
/// Runge-Kutta solve sampled uniformly in time over one period. The angle
/// origin is the maximum-x turning point for libration and the x = -pi
/// crossing for rotation.
std::complex<double> angle_fourier(int m, const PendulumOrbit& orbit, AngleBasis which,
                                   std::size_t samples = kDefaultAngleSamples);

/// Log-log slope of |c_m(J)| (or |s_m(J)|) over libration actions in
/// [lo_fraction, hi_fraction] * J_s.
double small_action_slope(int m, AngleBasis which, double m0, double lo_fraction = 1e-4,
                          double hi_fraction = 1e-2, std::size_t points = 9);

/// Smallest m >= 1 whose coefficient does not vanish on a libration orbit at
/// the given fraction of J_s.
int leading_harmonic(AngleBasis which, double m0, double action_fraction = 0.5,
                     double threshold = 1e-8, int max_harmonic = 8);

/// Asymptotic law a(t) ~ e^{-i m w0 t} / t^(nu + 1) for a perturbation of the
/// magnetization component.
struct DecayPrediction {
  Component observable = Component::Mx;
  int harmonic = 0;           ///< m, the leading non-vanishing angle harmonic
  int singularity_index = 0;  ///< nu = |m|
  double exponent = 0.0;      ///< -(nu + 1)
  double frequency = 0.0;     ///< m sqrt(m0)
};

DecayPrediction predict_decay(Component observable, double m0);

}  // namespace hmf
