#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <vector>

#include "hmf/ensemble.hpp"

namespace hmf {

struct SimConfig {
  double dt = 0.1;
  double t_end = 0.0;
  std::size_t record_stride = 5;  // 0.5 time units at the default dt
  bool use_symmetry = false;
  std::size_t checkpoint_every = 0;  // steps; 0 disables checkpoints
  std::filesystem::path checkpoint_path = "checkpoint.bin";

  void validate() const;
  bool operator==(const SimConfig&) const = default;
};

/// Samples of (t, Mx, My), uniformly spaced by dt * record_stride.
struct MagnetizationSeries {
  std::vector<MagnetizationSample> samples;
  double spacing = 0.0;
};

/// Energy and momentum at every recorded sample of a run.
struct ConservationTrace {
  std::vector<double> t;
  std::vector<double> energy;
  std::vector<double> momentum;

  double max_relative_energy_drift() const;
  double max_momentum_drift() const;
};

struct RunResult {
  MagnetizationSeries series;
  ConservationTrace conservation;
  std::size_t steps = 0;
};

/// One kick-drift-kick leapfrog step of the mean-field equations
/// x' = p, p' = -Mx sin x + My cos x.
void step(WeightedEnsemble& e, double dt);

/// sum w p^2 / 2 - (Mx^2 + My^2) / 2
double total_energy(const WeightedEnsemble& e);

/// sum w p
double total_momentum(const WeightedEnsemble& e);

/// Advances the ensemble from its current time to cfg.t_end. Samples are
/// taken at every global step index divisible by record_stride (step 0 is
/// t = 0), so a run resumed from a checkpoint continues the same grid.
/// The optional observer sees each sample as it is recorded.
RunResult run(WeightedEnsemble& e, const SimConfig& cfg,
              const std::function<void(const MagnetizationSample&)>& observer = {});

}  // namespace hmf
