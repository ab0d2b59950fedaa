#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "hmf/analysis.hpp"
#include "hmf/config.hpp"
#include "hmf/dynamics.hpp"
#include "hmf/equilibrium.hpp"
#include "hmf/theory.hpp"

namespace hmf {

/// Relative energy drift above which a run is flagged FAILED.
inline constexpr double kEnergyDriftThreshold = 1e-5;

struct ConservationSummary {
  double energy_drift = 0.0;    ///< max relative deviation from the first sample
  double momentum_drift = 0.0;  ///< max absolute deviation from the first sample
  bool casimirs_identical = true;
  bool ok() const { return casimirs_identical && energy_drift <= kEnergyDriftThreshold; }
};

struct ObservableReport {
  Component observable = Component::Mx;
  DecayPrediction prediction;
  std::vector<EnvelopePoint> envelope;
  std::optional<PowerLawFit> fit;
  std::string fit_note;  ///< why no fit was made, when fit is empty
  Spectrum spectrum;
  std::optional<SpectralPeak> peak;
};

struct SimulationOutcome {
  EquilibriumState equilibrium;
  RunResult run;
  ConservationSummary conservation;
};

struct PipelineOutcome {
  SimulationOutcome simulation;
  std::vector<ObservableReport> observables;
  std::filesystem::path directory;
};

/// Equilibrium, lattice initialization (or a checkpoint to resume from) and
/// the run itself. Writes series.csv and manifest.txt into the output
/// directory.
SimulationOutcome simulate(const RunConfig& cfg,
                           const std::optional<std::filesystem::path>& resume = std::nullopt);

/// Detrending, envelope, fit and spectrum of one magnetization component.
ObservableReport analyze_component(const std::vector<MagnetizationSample>& samples,
                                   Component which, const RunConfig& cfg,
                                   const EquilibriumState& eq);

/// All stages; writes series.csv, envelope.csv, fit.txt, spectrum.csv and,
/// last, manifest.txt. Stage failures surface as StageError.
PipelineOutcome run_pipeline(const RunConfig& cfg);

/// Text of fit.txt: predicted and measured exponent and frequency per
/// analysed component.
std::string format_fit_report(const std::vector<ObservableReport>& reports);

}  // namespace hmf
