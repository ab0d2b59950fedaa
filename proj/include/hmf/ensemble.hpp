#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace hmf {

/// Phase-space density f(x, p), not necessarily normalized.
using Density = std::function<double(double x, double p)>;

struct MagnetizationSample {
  double t = 0.0;
  double mx = 0.0;
  double my = 0.0;
};

/// Regular lattice over (-pi, pi] x [-pmax, pmax] with nodes at cell centres.
struct LatticeSpec {
  std::size_t nx = 0;
  std::size_t np = 0;
  double pmax = 3.0;
  bool operator==(const LatticeSpec&) const = default;
};

/// Lattice with roughly n nodes and equal relative cell widths in x and p.
LatticeSpec isotropic_lattice(std::size_t n, double pmax = 3.0);

/// Cloud of weighted particles discretizing a distribution f(x, p).
///
/// Weights are fixed at construction. In symmetry-reduced mode only the
/// p > 0 half is stored; each stored particle stands for itself and its
/// mirror image at (-x, -p), and the stored weights sum to 1/2.
class WeightedEnsemble {
 public:
  WeightedEnsemble() = default;
  /// Coordinates are rounded onto the integrator's phase-space grid (spacing
  /// 2^-48 in x, 2^-46 in p) and x is wrapped into (-pi, pi].
  WeightedEnsemble(std::vector<double> x, std::vector<double> p, std::vector<double> w,
                   double time = 0.0, bool symmetry_reduced = false, double pmax = 0.0);

  std::size_t size() const noexcept { return x_.size(); }
  bool symmetry_reduced() const noexcept { return symmetry_reduced_; }
  /// Number of particles represented, counting mirror images.
  std::size_t represented_size() const noexcept { return symmetry_reduced_ ? 2 * size() : size(); }
  double time() const noexcept { return time_; }
  double pmax() const noexcept { return pmax_; }

  std::span<const double> x() const noexcept { return x_; }
  std::span<const double> p() const noexcept { return p_; }
  std::span<const double> weights() const noexcept { return w_; }

  // Mutable phase-space coordinates for the integrator. Weights stay const.
  std::span<double> x_mut() noexcept { return x_; }
  std::span<double> p_mut() noexcept { return p_; }
  void set_time(double t) noexcept { time_ = t; }

 private:
  std::vector<double> x_;
  std::vector<double> p_;
  std::vector<double> w_;
  double time_ = 0.0;
  bool symmetry_reduced_ = false;
  double pmax_ = 0.0;
};

/// Places one particle per lattice node with weight C f(x_i, p_i), C fixed by
/// sum w = 1. With symmetry_reduced the density must be even under
/// (x, p) -> (-x, -p) and np must be even.
WeightedEnsemble init_lattice(const LatticeSpec& lattice, const Density& f,
                              bool symmetry_reduced = false);

/// (sum w cos x, sum w sin x) reduced chunk by chunk in a fixed order.
MagnetizationSample magnetization(const WeightedEnsemble& e);

/// Power sums sum_i w_i^l for l = 1..lmax over the represented ensemble.
std::vector<double> casimirs(const WeightedEnsemble& e, int lmax);

/// Maps any angle into (-pi, pi].
double wrap_angle(double x);

}  // namespace hmf
