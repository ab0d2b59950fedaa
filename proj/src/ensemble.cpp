#include "hmf/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "hmf/detail/grid.hpp"
#include "hmf/detail/reduction.hpp"
#include "hmf/detail/sincos.hpp"
#include "hmf/error.hpp"
#include "hmf/parallel.hpp"

namespace hmf {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Node i of an n-cell lattice on [-half, half], at the cell centre. The
// integer factor makes node n-1-i the exact negation of node i.
double node(std::size_t i, std::size_t n, double half) {
  const double k = 2.0 * static_cast<double>(i) + 1.0 - static_cast<double>(n);
  return k * (half / static_cast<double>(n));
}

}  // namespace

LatticeSpec isotropic_lattice(std::size_t n, double pmax) {
  // Equal relative widths dx / 2pi = dp / 2pmax means nx = np.
  auto side = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(n))));
  side = std::max<std::size_t>(side + (side & 1), 2);
  return {side, side, pmax};
}

WeightedEnsemble::WeightedEnsemble(std::vector<double> x, std::vector<double> p,
                                   std::vector<double> w, double time, bool symmetry_reduced,
                                   double pmax)
    : x_(std::move(x)),
      p_(std::move(p)),
      w_(std::move(w)),
      time_(time),
      symmetry_reduced_(symmetry_reduced),
      pmax_(pmax) {
  if (x_.size() != p_.size() || x_.size() != w_.size())
    throw InvalidParameter("ensemble arrays must have equal length");
  for (double& xi : x_) xi = wrap_angle(detail::snap(wrap_angle(xi), detail::kPositionQuantum));
  for (double& pi : p_) pi = detail::snap(pi, detail::kMomentumQuantum);
  for (double wi : w_)
    if (!(wi >= 0.0) || !std::isfinite(wi)) throw InvalidParameter("weights must be finite and >= 0");
}

double wrap_angle(double x) {
  if (x > kPi || x <= -kPi) {
    x = std::remainder(x, kTwoPi);  // [-pi, pi]
    if (x <= -kPi) x += kTwoPi;
  }
  return x;
}

WeightedEnsemble init_lattice(const LatticeSpec& lattice, const Density& f, bool symmetry_reduced) {
  const auto [nx, np, pmax] = lattice;
  if (nx < 2 || np < 2) throw InvalidParameter("lattice needs nx, np >= 2");
  if (!(pmax > 0.0) || !std::isfinite(pmax)) throw InvalidParameter("pmax must be positive");
  if (symmetry_reduced && np % 2 != 0)
    throw InvalidParameter("symmetry reduction needs an even number of momentum rows");

  const std::size_t first_row = symmetry_reduced ? np / 2 : 0;
  const std::size_t n = (np - first_row) * nx;
  std::vector<double> x(n), p(n), w(n);

  long double total = 0.0L;
  std::size_t i = 0;
  for (std::size_t k = first_row; k < np; ++k) {
    const double pk = node(k, np, pmax);
    for (std::size_t j = 0; j < nx; ++j, ++i) {
      x[i] = node(j, nx, kPi);
      p[i] = pk;
      const double v = f(x[i], pk);
      if (!(v >= 0.0) || !std::isfinite(v))
        throw InvalidParameter("density must be finite and non-negative, got " + std::to_string(v) +
                               " at (" + std::to_string(x[i]) + ", " + std::to_string(pk) + ")");
      if (symmetry_reduced) {
        const double mirror = f(-x[i], -pk);
        if (std::abs(mirror - v) > 1e-12 * std::max(std::abs(v), std::abs(mirror)) + 1e-300)
          throw InvalidParameter("density is not even under (x, p) -> (-x, -p)");
      }
      w[i] = v;
      total += v;
    }
  }
  if (total <= 0.0L) throw DegenerateInitialization("density vanishes on every lattice node");

  // Stored weights sum to 1, or to 1/2 when each one also carries a mirror.
  const double scale = static_cast<double>(1.0L / (symmetry_reduced ? 2.0L * total : total));
  for (double& wi : w) wi *= scale;
  return WeightedEnsemble(std::move(x), std::move(p), std::move(w), 0.0, symmetry_reduced, pmax);
}

MagnetizationSample magnetization(const WeightedEnsemble& e) {
  const auto x = e.x();
  const auto w = e.weights();
  const std::size_t chunks = chunk_count(e.size());
  std::vector<double> cx(chunks), cy(chunks);
  default_pool().parallel_for(chunks, [&](std::size_t c) {
    const std::size_t begin = c * kChunkSize;
    const std::size_t end = std::min(begin + kChunkSize, e.size());
    detail::LaneSum sx, sy;
    for (std::size_t i = begin; i < end; ++i) {
      double s, co;
      detail::sincos_wrapped(x[i], s, co);
      sx.add(i - begin, w[i] * co);
      sy.add(i - begin, w[i] * s);
    }
    cx[c] = sx.total();
    cy[c] = sy.total();
  });
  double mx = 0.0, my = 0.0;
  for (std::size_t c = 0; c < chunks; ++c) {
    mx += cx[c];
    my += cy[c];
  }
  if (e.symmetry_reduced()) return {e.time(), 2.0 * mx, 0.0};
  return {e.time(), mx, my};
}

std::vector<double> casimirs(const WeightedEnsemble& e, int lmax) {
  if (lmax < 1) throw InvalidParameter("casimir order must be >= 1");
  std::vector<double> sums(static_cast<std::size_t>(lmax), 0.0);
  for (double wi : e.weights()) {
    double power = 1.0;
    for (int l = 0; l < lmax; ++l) {
      power *= wi;
      sums[static_cast<std::size_t>(l)] += power;
    }
  }
  if (e.symmetry_reduced())
    for (double& s : sums) s *= 2.0;
  return sums;
}

}  // namespace hmf
