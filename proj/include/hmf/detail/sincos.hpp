#pragma once

namespace hmf::detail {

// Branch-free sin/cos for x in [-pi, pi], vectorizable by the compiler.
// Evaluates Taylor series of the half angle r = x/2 (|r| <= pi/2) and doubles
// back; absolute error stays below 1e-15 on the whole interval. The sine is
// exactly odd and the cosine exactly even in x.
inline void sincos_wrapped(double x, double& s, double& c) {
  const double r = 0.5 * x;
  const double r2 = r * r;
  // clang-format off
  const double sr = r * (1.0 + r2 * (-1.0 / 6.0 + r2 * (1.0 / 120.0 + r2 * (-1.0 / 5040.0
      + r2 * (1.0 / 362880.0 + r2 * (-1.0 / 39916800.0 + r2 * (1.0 / 6227020800.0
      + r2 * (-1.0 / 1307674368000.0 + r2 * (1.0 / 355687428096000.0
      + r2 * (-1.0 / 121645100408832000.0 + r2 * (1.0 / 51090942171709440000.0
      + r2 * (-1.0 / 25852016738884976640000.0))))))))))));
  const double cr = 1.0 + r2 * (-0.5 + r2 * (1.0 / 24.0 + r2 * (-1.0 / 720.0
      + r2 * (1.0 / 40320.0 + r2 * (-1.0 / 3628800.0 + r2 * (1.0 / 479001600.0
      + r2 * (-1.0 / 87178291200.0 + r2 * (1.0 / 20922789888000.0
      + r2 * (-1.0 / 6402373705728000.0 + r2 * (1.0 / 2432902008176640000.0
      + r2 * (-1.0 / 1124000727777607680000.0)))))))))));
  // clang-format on
  s = 2.0 * sr * cr;
  c = (cr - sr) * (cr + sr);
}

}  // namespace hmf::detail
