#include <doctest.h>

#include <boost/math/special_functions/jacobi_elliptic.hpp>
#include <cmath>

#include "hmf/equilibrium.hpp"
#include "hmf/error.hpp"
#include "hmf/theory.hpp"
#include "oracles.hpp"

using namespace hmf;

namespace {

const double kM0 = solve_m0(0.1).m0;

// Closed forms in terms of complete elliptic integrals (modulus convention of
// std::comp_ellint_*).
double libration_period(double e, double m0) {
  const double k = std::sqrt((e + m0) / (2 * m0));
  return 4.0 * std::comp_ellint_1(k) / std::sqrt(m0);
}
double libration_action(double e, double m0) {
  const double k = std::sqrt((e + m0) / (2 * m0));
  return 8.0 * std::sqrt(m0) / oracle::pi * (std::comp_ellint_2(k) - (1 - k * k) * std::comp_ellint_1(k));
}
double rotation_period(double e, double m0) {
  const double q = std::sqrt(2 * m0 / (e + m0));
  return 4.0 * std::comp_ellint_1(q) / std::sqrt(2 * (e + m0));
}
double rotation_action(double e, double m0) {
  const double q = std::sqrt(2 * m0 / (e + m0));
  return 2.0 / oracle::pi * std::sqrt(2 * (e + m0)) * std::comp_ellint_2(q);
}

// Quarter period from the maximum-x turning point to x = 0 by RK4, with the
// crossing located by re-stepping from the last point before it.
double ode_period(double e, double m0) {
  oracle::Rk4 rk{[m0](double x) { return -m0 * std::sin(x); }};
  double x = std::acos(-e / m0), p = 0.0, t = 0.0;
  const double h = 1e-3;
  for (;;) {
    double xn = x, pn = p;
    rk.step(xn, pn, h);
    if (xn <= 0.0) break;
    x = xn;
    p = pn;
    t += h;
  }
  // Secant on the step length for x(t + s) = 0.
  auto x_after = [&](double s) {
    double a = x, b = p;
    rk.step(a, b, s);
    return a;
  };
  double s0 = 0.0, s1 = h, f0 = x, f1 = x_after(h);
  for (int i = 0; i < 50 && std::abs(f1) > 1e-15; ++i) {
    const double s2 = s1 - f1 * (s1 - s0) / (f1 - f0);
    s0 = s1;
    f0 = f1;
    s1 = s2;
    f1 = x_after(s1);
  }
  return 4.0 * (t + s1);
}

// c_m on a libration orbit from the Jacobi-elliptic solution
// sin(x/2) = k cd(sqrt(m0) t, k), which starts at the maximum-x turning point.
std::complex<double> jacobi_fourier(int m, double e, double m0, bool sine_basis) {
  const double k = std::sqrt((e + m0) / (2 * m0));
  const double period = libration_period(e, m0);
  const std::size_t n = 2048;
  std::complex<double> acc = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double theta = 2 * oracle::pi * j / n;
    const double u = std::sqrt(m0) * period * j / n;
    double cn = 0, dn = 0;
    const double sn = boost::math::jacobi_elliptic(k, u, &cn, &dn);
    (void)sn;
    const double cd = cn / dn;
    const double x = 2.0 * std::asin(k * cd);
    const double g = sine_basis ? std::sin(x) : std::cos(x);
    acc += g * std::exp(std::complex<double>(0.0, -m * theta));
  }
  return acc * (2 * oracle::pi / n);
}

}  // namespace

TEST_CASE("orbits agree with elliptic-integral closed forms") {
  for (double e : {-0.9, -0.5, 0.0, 0.5, 0.9}) {
    const auto o = orbit_from_energy(e, kM0);
    CHECK(o.regime == OrbitRegime::Libration);
    CHECK(o.period == doctest::Approx(libration_period(e, kM0)).epsilon(1e-10));
    CHECK(o.action == doctest::Approx(libration_action(e, kM0)).epsilon(1e-10));
    CHECK(o.frequency == doctest::Approx(2 * oracle::pi / o.period).epsilon(1e-14));
  }
  for (double e : {1.0, 2.0, 10.0}) {
    const auto o = orbit_from_energy(e, kM0);
    CHECK(o.regime == OrbitRegime::Rotation);
    CHECK(o.period == doctest::Approx(rotation_period(e, kM0)).epsilon(1e-10));
    CHECK(o.action == doctest::Approx(rotation_action(e, kM0)).epsilon(1e-10));
  }
}

TEST_CASE("mid-libration period agrees with direct time integration") {
  const double m0 = 0.946;
  CHECK(orbit_from_energy(0.0, m0).period == doctest::Approx(ode_period(0.0, m0)).epsilon(1e-8));
}

TEST_CASE("frequency limits") {
  const double w0 = std::sqrt(kM0);
  CHECK(std::abs(orbit_from_energy(-kM0 + 1e-6, kM0).frequency - w0) <= 1e-4);
  CHECK(std::abs(w0 - 0.972) <= 0.001);
  CHECK(orbit_from_energy(-kM0, kM0).frequency == doctest::Approx(w0).epsilon(1e-12));
  for (double e : {20.0, 100.0, 1000.0}) {
    const double free_rotor = std::sqrt(2 * e);
    CHECK(std::abs(orbit_from_energy(e, kM0).frequency - free_rotor) / free_rotor <= kM0 / e);
  }
}

TEST_CASE("frequency vanishes logarithmically at the separatrix") {
  double prev = 1.0;
  for (double d : {1e-3, 1e-5, 1e-7, 1e-9}) {
    const double w = orbit_from_energy(kM0 * (1 - d), kM0).frequency;
    CHECK(w < prev);
    prev = w;
    // Libration near the separatrix: Omega ~ pi sqrt(m0) / log(32 / delta).
    CHECK(w * std::log(32.0 / d) / (oracle::pi * std::sqrt(kM0)) == doctest::Approx(1.0).epsilon(0.01));
  }
}

TEST_CASE("libration frequency decreases and action increases with energy") {
  double prev_w = 10.0, prev_j = -1.0;
  for (double e = -kM0 + 0.01; e < kM0 - 0.01; e += 0.05) {
    const auto o = orbit_from_energy(e, kM0);
    CHECK(o.frequency < prev_w);
    CHECK(o.action > prev_j);
    prev_w = o.frequency;
    prev_j = o.action;
  }
  prev_j = 0.0;
  for (double e = kM0 + 0.05; e < 5.0; e += 0.25) {
    const auto o = orbit_from_energy(e, kM0);
    CHECK(o.action > prev_j);
    prev_j = o.action;
  }
}

TEST_CASE("dJ/dE equals 1/Omega in both regimes") {
  for (double e : {-0.8, -0.3, 0.2, 0.7, 1.3, 2.0, 6.0}) {
    const double h = 1e-4;
    const double djde = (orbit_from_energy(e + h, kM0).action - orbit_from_energy(e - h, kM0).action) / (2 * h);
    const double inv_w = 1.0 / orbit_from_energy(e, kM0).frequency;
    CHECK(std::abs(djde - inv_w) <= 1e-6 * inv_w);
  }
}

TEST_CASE("separatrix action") {
  CHECK(separatrix_action(kM0) == doctest::Approx(8 * std::sqrt(kM0) / oracle::pi).epsilon(1e-13));
  CHECK(separatrix_action(0.25) == doctest::Approx(std::sqrt(0.25) * separatrix_action(1.0)).epsilon(1e-13));
  CHECK(std::abs(separatrix_action(1.0) - orbit_from_energy(1.0 - 1e-9, 1.0).action) <= 1e-6);
  CHECK_THROWS_AS(separatrix_action(0.0), InvalidParameter);
  CHECK_THROWS_AS(separatrix_action(-1.0), InvalidParameter);
}

TEST_CASE("orbit construction errors") {
  CHECK_THROWS_AS(orbit_from_energy(kM0, kM0), SeparatrixError);
  CHECK_THROWS_AS(orbit_from_energy(kM0 * (1 + 1e-12), kM0), SeparatrixError);
  CHECK_THROWS_AS(orbit_from_energy(-kM0 - 0.1, kM0), InvalidParameter);
  CHECK_THROWS_AS(orbit_from_energy(0.0, 0.0), InvalidParameter);
  PendulumOrbit sep{kM0, kM0, OrbitRegime::Libration, separatrix_action(kM0), INFINITY, 0.0};
  CHECK_THROWS_AS(angle_fourier(2, sep, AngleBasis::Cos), SeparatrixError);
}

TEST_CASE("action inversion round-trips") {
  const double js = separatrix_action(kM0);
  for (double frac : {1e-4, 0.1, 0.5, 0.9, 0.999}) {
    const auto o = orbit_from_action(frac * js, kM0);
    CHECK(o.action == doctest::Approx(frac * js).epsilon(1e-10));
    CHECK(orbit_from_energy(o.energy, kM0).action == doctest::Approx(o.action).epsilon(1e-10));
  }
  for (double frac : {0.6, 1.0, 3.0}) {
    const auto o = orbit_from_action(frac * js, kM0, OrbitRegime::Rotation);
    CHECK(o.regime == OrbitRegime::Rotation);
    CHECK(o.action == doctest::Approx(frac * js).epsilon(1e-10));
  }
  CHECK_THROWS_AS(orbit_from_action(1.1 * js, kM0), InvalidParameter);
  CHECK_THROWS_AS(orbit_from_action(0.4 * js, kM0, OrbitRegime::Rotation), InvalidParameter);
  CHECK_THROWS_AS(orbit_from_action(-0.1, kM0), InvalidParameter);
}

TEST_CASE("angle Fourier coefficients match the Jacobi-elliptic orbit") {
  for (double e : {-0.7, 0.0, 0.8}) {
    const auto o = orbit_from_energy(e, kM0);
    for (int m : {0, 1, 2, 4}) {
      const auto c = angle_fourier(m, o, AngleBasis::Cos);
      const auto s = angle_fourier(m, o, AngleBasis::Sin);
      const auto cr = jacobi_fourier(m, e, kM0, false);
      const auto sr = jacobi_fourier(m, e, kM0, true);
      CHECK(std::abs(c - cr) <= 1e-9);
      CHECK(std::abs(s - sr) <= 1e-9);
    }
  }
}

TEST_CASE("odd cosine harmonics vanish below the separatrix") {
  const double js = separatrix_action(kM0);
  for (double frac : {1e-3, 0.05, 0.3, 0.6, 0.9, 0.99}) {
    const auto o = orbit_from_action(frac * js, kM0);
    CHECK(std::abs(angle_fourier(1, o, AngleBasis::Cos)) <= 1e-8);
    CHECK(std::abs(angle_fourier(3, o, AngleBasis::Cos)) <= 1e-8);
    CHECK(std::abs(angle_fourier(2, o, AngleBasis::Cos)) > 1e-6);
    CHECK(std::abs(angle_fourier(1, o, AngleBasis::Sin)) > 1e-6);
  }
}

TEST_CASE("small-action scaling of the leading harmonics") {
  CHECK(std::abs(small_action_slope(2, AngleBasis::Cos, kM0) - 1.0) <= 0.1);
  CHECK(std::abs(small_action_slope(1, AngleBasis::Sin, kM0) - 0.5) <= 0.05);
  CHECK(leading_harmonic(AngleBasis::Cos, kM0) == 2);
  CHECK(leading_harmonic(AngleBasis::Sin, kM0) == 1);
}

TEST_CASE("zeroth harmonic is the time average of cos x") {
  for (double e : {-0.5, 0.4}) {
    const auto o = orbit_from_energy(e, kM0);
    oracle::Rk4 rk{[](double x) { return -kM0 * std::sin(x); }};
    double x = std::acos(-e / kM0), p = 0.0;
    const int n = 20000;
    const double h = o.period / n;
    double acc = 0.5 * std::cos(x);
    for (int i = 1; i < n; ++i) {
      rk.step(x, p, h);
      acc += std::cos(x);
    }
    rk.step(x, p, h);
    acc += 0.5 * std::cos(x);
    const double average = acc / n;
    CHECK(angle_fourier(0, o, AngleBasis::Cos).real() / (2 * oracle::pi) == doctest::Approx(average).epsilon(1e-9));
  }
}

TEST_CASE("conjugation symmetry and rotation orbits") {
  for (double e : {-0.3, 2.5}) {
    const auto o = orbit_from_energy(e, kM0);
    for (int m : {1, 2, 3}) {
      const auto plus = angle_fourier(m, o, AngleBasis::Cos);
      const auto minus = angle_fourier(-m, o, AngleBasis::Cos);
      CHECK(std::abs(minus - std::conj(plus)) <= 1e-12);
    }
  }
  // A rotation orbit covers the circle once, so cos x carries an m = 1 term.
  const auto rot = orbit_from_energy(1.5, kM0);
  CHECK(std::abs(angle_fourier(1, rot, AngleBasis::Cos)) > 1e-3);
}

TEST_CASE("decay predictions") {
  const auto mx = predict_decay(Component::Mx, kM0);
  const auto my = predict_decay(Component::My, kM0);
  CHECK(mx.exponent == -3.0);
  CHECK(mx.harmonic == 2);
  CHECK(mx.singularity_index == 2);
  CHECK(std::abs(mx.frequency - 1.945) <= 0.001);
  CHECK(my.exponent == -2.0);
  CHECK(my.harmonic == 1);
  CHECK(my.singularity_index == 1);
  CHECK(std::abs(my.frequency - 0.972) <= 0.001);
  CHECK(mx.frequency == doctest::Approx(2 * std::sqrt(kM0)));
  const auto mx2 = predict_decay(Component::Mx, 2 * kM0 / 1.5);
  const auto mx1 = predict_decay(Component::Mx, kM0 / 1.5);
  CHECK(mx2.frequency / mx1.frequency == doctest::Approx(std::sqrt(2.0)));
  CHECK(predict_decay(Component::My, 0.4).frequency / predict_decay(Component::My, 0.2).frequency ==
        doctest::Approx(std::sqrt(2.0)));
}
