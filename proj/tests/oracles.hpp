#pragma once

// Test-side reference computations, deliberately independent of the library
// code paths they check.

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <vector>

namespace oracle {

inline constexpr double pi = std::numbers::pi;

/// Composite Simpson rule on [a, b] with n (even) panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n) {
  if (n % 2) ++n;
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

/// 2D Simpson product rule over [ax, bx] x [ap, bp].
inline double simpson2(const std::function<double(double, double)>& f, double ax, double bx, double ap,
                       double bp, int nx, int np) {
  return simpson([&](double x) { return simpson([&](double p) { return f(x, p); }, ap, bp, np); }, ax, bx,
                 nx);
}

/// Bessel-ratio magnetization I1(b m) / I0(b m), the closed form of the
/// thermal consistency map.
inline double bessel_map(double m, double beta) {
  const double z = beta * m;
  return std::cyl_bessel_i(1.0, z) / std::cyl_bessel_i(0.0, z);
}

/// Classical RK4 for a second-order autonomous ODE x'' = a(x).
struct Rk4 {
  std::function<double(double)> accel;
  void step(double& x, double& p, double h) const {
    const double k1x = p, k1p = accel(x);
    const double k2x = p + 0.5 * h * k1p, k2p = accel(x + 0.5 * h * k1x);
    const double k3x = p + 0.5 * h * k2p, k3p = accel(x + 0.5 * h * k2x);
    const double k4x = p + h * k3p, k4p = accel(x + h * k3x);
    x += h / 6.0 * (k1x + 2 * k2x + 2 * k3x + k4x);
    p += h / 6.0 * (k1p + 2 * k2p + 2 * k3p + k4p);
  }
};

/// Direct O(n M) DFT power |sum_j x_j e^{-2 pi i k j / M}|^2 at bin k.
inline double dft_power(const std::vector<double>& x, std::size_t padded, std::size_t k) {
  std::complex<long double> acc = 0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    const long double ang = -2.0L * std::numbers::pi_v<long double> * static_cast<long double>((k * j) % padded) /
                            static_cast<long double>(padded);
    acc += static_cast<long double>(x[j]) * std::complex<long double>(std::cos(ang), std::sin(ang));
  }
  return static_cast<double>(std::norm(acc));
}

}  // namespace oracle
