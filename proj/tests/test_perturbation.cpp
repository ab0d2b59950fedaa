#include <doctest.h>

#include <cmath>

#include "hmf/ensemble.hpp"
#include "hmf/equilibrium.hpp"
#include "hmf/error.hpp"
#include "hmf/perturbation.hpp"
#include "oracles.hpp"

using namespace hmf;

TEST_CASE("zero amplitude leaves f0 unchanged") {
  const auto s = solve_m0(0.1);
  for (auto kind : {PerturbationKind::None, PerturbationKind::Cosine, PerturbationKind::Sine}) {
    const auto f = perturbed_density(s, {kind, 0.0});
    for (double x : {-2.0, 0.0, 1.5})
      for (double p : {-1.0, 0.2}) CHECK(f(x, p) == f0_density(x, p, s));
  }
}

TEST_CASE("perturbation shape") {
  const auto s = solve_m0(0.1);
  const auto fc = perturbed_density(s, {PerturbationKind::Cosine, 0.1});
  const auto fs = perturbed_density(s, {PerturbationKind::Sine, 0.1});
  CHECK(fc(0.7, 0.3) == doctest::Approx(f0_density(0.7, 0.3, s) * (1 + 0.1 * std::cos(0.7))));
  CHECK(fs(0.7, 0.3) == doctest::Approx(f0_density(0.7, 0.3, s) * (1 + 0.1 * std::sin(0.7))));
}

TEST_CASE("cosine perturbation keeps the (x, p) -> (-x, -p) parity, sine breaks it") {
  const auto s = solve_m0(0.1);
  const auto fc = perturbed_density(s, {PerturbationKind::Cosine, 0.1});
  const auto fs = perturbed_density(s, {PerturbationKind::Sine, 0.1});
  bool broken = false;
  for (double x = -3.0; x <= 3.0; x += 0.37)
    for (double p = -2.0; p <= 2.0; p += 0.41) {
      CHECK(fc(x, p) == fc(-x, -p));
      broken = broken || fs(x, p) != fs(-x, -p);
    }
  CHECK(broken);
}

TEST_CASE("density stays non-negative for sub-unit amplitudes") {
  const auto s = solve_m0(0.1);
  for (double a : {-0.999, -0.5, 0.5, 0.999})
    for (auto kind : {PerturbationKind::Cosine, PerturbationKind::Sine}) {
      const auto f = perturbed_density(s, {kind, a});
      for (double x = -oracle::pi; x <= oracle::pi; x += 0.01) CHECK(f(x, 0.5) >= 0.0);
    }
}

TEST_CASE("amplitudes of magnitude one or more are rejected") {
  const auto s = solve_m0(0.1);
  CHECK_THROWS_AS(perturbed_density(s, {PerturbationKind::Cosine, 1.0}), InvalidParameter);
  CHECK_THROWS_AS(perturbed_density(s, {PerturbationKind::Sine, -1.5}), InvalidParameter);
  CHECK_THROWS_AS(perturbed_density(s, {PerturbationKind::Sine, std::nan("")}), InvalidParameter);
}

TEST_CASE("initial My of the sine-perturbed lattice matches quadrature") {
  const auto s = solve_m0(0.1);
  const double a = 0.1;
  // The sine term integrates to zero against f0, so the normalization is
  // unchanged and My = a <sin^2 x>_{f0}.
  auto f0 = [&](double x, double p) { return f0_density(x, p, s); };
  const double mass = oracle::simpson2(
      [&](double x, double p) { return f0(x, p) * (1 + a * std::sin(x)); }, -oracle::pi, oracle::pi, -3, 3, 800, 800);
  const double expected = a * oracle::simpson2([&](double x, double p) { return std::pow(std::sin(x), 2) * f0(x, p); },
                                               -oracle::pi, oracle::pi, -3, 3, 800, 800) / mass;
  const auto e = init_lattice({256, 256, 3.0}, perturbed_density(s, {PerturbationKind::Sine, a}));
  CHECK(magnetization(e).my == doctest::Approx(expected).epsilon(1e-8));
}

TEST_CASE("kind names") {
  CHECK(parse_perturbation_kind("cosine") == PerturbationKind::Cosine);
  CHECK(parse_perturbation_kind("sin") == PerturbationKind::Sine);
  CHECK(parse_perturbation_kind("none") == PerturbationKind::None);
  CHECK_THROWS_AS(parse_perturbation_kind("tangent"), InvalidParameter);
  for (auto k : {PerturbationKind::None, PerturbationKind::Cosine, PerturbationKind::Sine})
    CHECK(parse_perturbation_kind(to_string(k)) == k);
}
