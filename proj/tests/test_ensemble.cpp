#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "hmf/ensemble.hpp"
#include "hmf/equilibrium.hpp"
#include "hmf/error.hpp"
#include "hmf/parallel.hpp"
#include "oracles.hpp"

using namespace hmf;

namespace {

Density thermal(const EquilibriumState& s) {
  return [s](double x, double p) { return f0_density(x, p, s); };
}

double thermal_mx_oracle(const EquilibriumState& s) {
  return oracle::simpson2([&](double x, double p) { return std::cos(x) * f0_density(x, p, s); }, -oracle::pi,
                          oracle::pi, -3.0, 3.0, 1000, 1000);
}

}  // namespace

TEST_CASE("lattice nodes sit at cell centres") {
  const LatticeSpec spec{6, 4, 2.0};
  const auto e = init_lattice(spec, [](double, double) { return 1.0; });
  REQUIRE(e.size() == 24);
  std::vector<double> xs(e.x().begin(), e.x().end()), ps(e.p().begin(), e.p().end());
  std::sort(xs.begin(), xs.end());
  std::sort(ps.begin(), ps.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
  REQUIRE(xs.size() == 6);
  REQUIRE(ps.size() == 4);
  for (std::size_t j = 0; j < 6; ++j) CHECK(xs[j] == doctest::Approx(-oracle::pi + (j + 0.5) * 2 * oracle::pi / 6));
  for (std::size_t k = 0; k < 4; ++k) CHECK(ps[k] == doctest::Approx(-2.0 + (k + 0.5) * 4.0 / 4));
  CHECK(e.pmax() == 2.0);
}

TEST_CASE("constant density gives equal weights and no magnetization") {
  const auto e = init_lattice({32, 16, 3.0}, [](double, double) { return 2.5; });
  const double n = static_cast<double>(e.size());
  for (double w : e.weights()) CHECK(w == doctest::Approx(1.0 / n).epsilon(1e-14));
  const auto m = magnetization(e);
  CHECK(std::abs(m.mx) <= 1e-15);
  CHECK(std::abs(m.my) <= 1e-15);
}

TEST_CASE("magnetization of concentrated and cancelling clouds") {
  WeightedEnsemble at_zero({0.0, 0.0, 0.0, 0.0}, {0.1, -0.2, 0.0, 1.0}, {0.25, 0.25, 0.25, 0.25});
  auto m = magnetization(at_zero);
  CHECK(m.mx == 1.0);
  CHECK(m.my == 0.0);

  const double h = oracle::pi / 2;
  WeightedEnsemble opposed({h, -h}, {0.0, 0.0}, {0.5, 0.5});
  m = magnetization(opposed);
  // pi / 2 is rounded onto the 2^-48 position grid.
  CHECK(std::abs(m.mx) <= 4e-15);
  CHECK(std::abs(m.my) <= 1e-15);
}

TEST_CASE("thermal lattice reproduces the quadrature magnetization, better as the lattice grows") {
  const auto s = solve_m0(0.1);
  const double expected = thermal_mx_oracle(s);
  CHECK(std::abs(expected - s.m0) <= 1e-8);
  double prev = 1.0;
  for (std::size_t n : {8, 12, 16, 24}) {
    const double err = std::abs(magnetization(init_lattice({n, n, 3.0}, thermal(s))).mx - expected);
    CHECK(err < prev);
    prev = err;
  }
  const auto big = init_lattice({256, 256, 3.0}, thermal(s));
  CHECK(std::abs(magnetization(big).mx - expected) <= 1e-8);
  CHECK(std::abs(magnetization(big).mx - 0.946) <= 0.001);
}

TEST_CASE("casimirs") {
  SUBCASE("first power sum is one") {
    const auto s = solve_m0(0.1);
    const auto e = init_lattice({64, 64, 3.0}, thermal(s));
    CHECK(std::abs(casimirs(e, 1)[0] - 1.0) <= 1e-14);
  }
  SUBCASE("uniform weights") {
    const auto e = init_lattice({20, 10, 3.0}, [](double, double) { return 1.0; });
    const auto c = casimirs(e, 4);
    REQUIRE(c.size() == 4);
    CHECK(c[1] == doctest::Approx(1.0 / 200).epsilon(1e-13));
    CHECK(c[3] == doctest::Approx(std::pow(200.0, -3)).epsilon(1e-12));
  }
  SUBCASE("reduced ensemble counts mirror images") {
    const auto s = solve_m0(0.1);
    const auto full = casimirs(init_lattice({64, 64, 3.0}, thermal(s)), 4);
    const auto half = casimirs(init_lattice({64, 64, 3.0}, thermal(s), true), 4);
    for (int l = 0; l < 4; ++l) CHECK(half[l] == doctest::Approx(full[l]).epsilon(1e-13));
  }
  SUBCASE("order below one is rejected") {
    const auto e = init_lattice({4, 4, 3.0}, [](double, double) { return 1.0; });
    CHECK_THROWS_AS(casimirs(e, 0), InvalidParameter);
  }
}

TEST_CASE("initialization errors") {
  auto one = [](double, double) { return 1.0; };
  CHECK_THROWS_AS(init_lattice({8, 8, 3.0}, [](double, double) { return 0.0; }), DegenerateInitialization);
  CHECK_THROWS_AS(init_lattice({8, 8, 3.0}, [](double x, double) { return x; }), InvalidParameter);
  CHECK_THROWS_AS(init_lattice({1, 8, 3.0}, one), InvalidParameter);
  CHECK_THROWS_AS(init_lattice({8, 1, 3.0}, one), InvalidParameter);
  CHECK_THROWS_AS(init_lattice({8, 8, 0.0}, one), InvalidParameter);
  CHECK_THROWS_AS(init_lattice({8, 7, 3.0}, one, true), InvalidParameter);
  // Not even under (x, p) -> (-x, -p).
  CHECK_THROWS_AS(init_lattice({8, 8, 3.0}, [](double x, double) { return 1.0 + 0.5 * std::sin(x); }, true),
                  InvalidParameter);
  CHECK_THROWS_AS(WeightedEnsemble({0.0}, {0.0, 1.0}, {1.0}), InvalidParameter);
  CHECK_THROWS_AS(WeightedEnsemble({0.0}, {0.0}, {-1.0}), InvalidParameter);
}

TEST_CASE("symmetry-reduced lattice") {
  const auto s = solve_m0(0.1);
  const auto full = init_lattice({64, 64, 3.0}, thermal(s));
  const auto half = init_lattice({64, 64, 3.0}, thermal(s), true);
  CHECK(half.size() == full.size() / 2);
  CHECK(half.represented_size() == full.size());
  CHECK(half.symmetry_reduced());
  for (double p : half.p()) CHECK(p > 0.0);
  const double wsum = std::accumulate(half.weights().begin(), half.weights().end(), 0.0);
  CHECK(wsum == doctest::Approx(0.5).epsilon(1e-14));
  const auto mh = magnetization(half);
  CHECK(mh.my == 0.0);
  CHECK(mh.mx == doctest::Approx(magnetization(full).mx).epsilon(1e-13));
}

TEST_CASE("magnetization does not depend on particle order beyond round-off") {
  const auto s = solve_m0(0.1);
  const auto e = init_lattice({300, 300, 3.0}, [&](double x, double p) {
    return f0_density(x, p, s) * (1.0 + 0.1 * std::sin(x));
  });
  std::vector<std::size_t> perm(e.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::mt19937_64 rng(12345);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<double> x(e.size()), p(e.size()), w(e.size());
  for (std::size_t i = 0; i < e.size(); ++i) {
    x[i] = e.x()[perm[i]];
    p[i] = e.p()[perm[i]];
    w[i] = e.weights()[perm[i]];
  }
  const WeightedEnsemble shuffled(x, p, w);
  const auto a = magnetization(e), b = magnetization(shuffled);
  CHECK(std::abs(a.mx - b.mx) <= 1e-13 * std::abs(a.mx));
  CHECK(std::abs(a.my - b.my) <= 1e-13 * std::abs(a.my));
  // Same layout, same bits.
  const auto c = magnetization(e);
  CHECK(a.mx == c.mx);
  CHECK(a.my == c.my);
}

TEST_CASE("magnetization matches a plain long double sum") {
  const auto s = solve_m0(0.2);
  const auto e = init_lattice({257, 130, 3.0}, [&](double x, double p) {
    return f0_density(x, p, s) * (1.0 + 0.3 * std::sin(x));
  });
  long double mx = 0, my = 0;
  for (std::size_t i = 0; i < e.size(); ++i) {
    mx += e.weights()[i] * std::cos(static_cast<long double>(e.x()[i]));
    my += e.weights()[i] * std::sin(static_cast<long double>(e.x()[i]));
  }
  const auto m = magnetization(e);
  CHECK(std::abs(m.mx - static_cast<double>(mx)) <= 1e-14);
  CHECK(std::abs(m.my - static_cast<double>(my)) <= 1e-14);
}

TEST_CASE("chunked reduction is independent of the worker count") {
  const std::size_t n = 5 * kChunkSize + 77;
  std::vector<double> v(n);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (auto& x : v) x = u(rng);
  auto reduce = [&](ThreadPool& pool) {
    std::vector<double> part(chunk_count(n));
    pool.parallel_for(part.size(), [&](std::size_t c) {
      double s = 0.0;
      for (std::size_t i = c * kChunkSize; i < std::min(n, (c + 1) * kChunkSize); ++i) s += v[i];
      part[c] = s;
    });
    double total = 0.0;
    for (double s : part) total += s;
    return total;
  };
  ThreadPool one(1), four(4);
  CHECK(reduce(one) == reduce(four));
  CHECK(four.size() == 4);
}

TEST_CASE("angles wrap into (-pi, pi]") {
  CHECK(wrap_angle(oracle::pi) == oracle::pi);
  CHECK(wrap_angle(-oracle::pi) == doctest::Approx(oracle::pi));
  CHECK(wrap_angle(3 * oracle::pi / 2) == doctest::Approx(-oracle::pi / 2));
  CHECK(wrap_angle(-7.0) == doctest::Approx(-7.0 + 2 * oracle::pi));
  for (double x : {-100.0, -3.2, 0.0, 3.2, 1e4}) {
    const double w = wrap_angle(x);
    CHECK(w > -oracle::pi);
    CHECK(w <= oracle::pi);
    CHECK(std::abs(std::remainder(w - x, 2 * oracle::pi)) <= 1e-11);
  }
  const WeightedEnsemble e({7.0, -4.0}, {0.0, 0.0}, {0.5, 0.5});
  for (double x : e.x()) CHECK((x > -oracle::pi && x <= oracle::pi));
}

TEST_CASE("coordinates are stored on the phase-space grid") {
  const WeightedEnsemble e({0.1, -2.9, oracle::pi}, {0.3, -1.7, 2.0}, {0.2, 0.3, 0.5});
  for (double x : e.x()) {
    CHECK(std::ldexp(x, 48) == std::rint(std::ldexp(x, 48)));
    CHECK(std::abs(x) <= oracle::pi);
  }
  for (double p : e.p()) CHECK(std::ldexp(p, 46) == std::rint(std::ldexp(p, 46)));
  CHECK(std::abs(e.x()[0] - 0.1) <= 0x1p-49);
  CHECK(std::abs(e.p()[1] + 1.7) <= 0x1p-47);
  CHECK(e.p()[2] == 2.0);
}

TEST_CASE("isotropic lattice has equal node counts and an even row count") {
  const auto spec = isotropic_lattice(4'000'000);
  CHECK(spec.nx == spec.np);
  CHECK(spec.np % 2 == 0);
  CHECK(std::abs(static_cast<double>(spec.nx * spec.np) - 4e6) <= 0.01 * 4e6);
}
