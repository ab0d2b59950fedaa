#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "hmf/dynamics.hpp"
#include "hmf/ensemble.hpp"
#include "hmf/equilibrium.hpp"
#include "hmf/perturbation.hpp"

namespace hmf {

enum class DetrendMode { Constant, Running };

std::string_view to_string(DetrendMode mode);
DetrendMode parse_detrend_mode(std::string_view name);

struct EquilibriumConfig {
  double temperature = 0.1;
  double tolerance = kDefaultEquilibriumTolerance;
  bool operator==(const EquilibriumConfig&) const = default;
};

struct AnalysisConfig {
  DetrendMode detrend = DetrendMode::Constant;
  std::optional<double> tail_start;  ///< constant detrend; default t_end / 2
  double window = 5.0;               ///< running detrend half window
  std::optional<double> fit_tmin;    ///< default t_end / 6
  std::optional<double> fit_tmax;    ///< default 5 t_end / 6
  std::optional<double> spectrum_t0;  ///< default fit_tmin
  std::optional<double> spectrum_t1;  ///< default t_end
  std::pair<double, double> band_mx{1.5, 2.5};
  std::pair<double, double> band_my{0.5, 1.5};
  std::size_t oversample = 4;
  bool operator==(const AnalysisConfig&) const = default;
};

/// The checkpoint file name itself lives in integration.checkpoint_path and
/// is written as the `checkpoint` key of the [output] section.
struct OutputConfig {
  std::filesystem::path directory = ".";
  bool operator==(const OutputConfig&) const = default;
};

/// Everything a simulate or pipeline invocation needs.
struct RunConfig {
  EquilibriumConfig equilibrium;
  LatticeSpec lattice;
  PerturbationSpec perturbation;
  SimConfig integration;
  AnalysisConfig analysis;
  OutputConfig output;
  bool operator==(const RunConfig&) const = default;
};

/// Parses INI-style text: [section] headers, `key = value` lines, and '#' or
/// ';' comments. Sections: equilibrium, lattice, perturbation, integration,
/// analysis, output. Unknown sections or keys, duplicates, missing required
/// keys (equilibrium.temperature, lattice.nx, lattice.np, integration.t_end)
/// and malformed values raise ParseError with the key and line.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::filesystem::path& path);

/// Text that parse_config maps back to an equal RunConfig.
std::string serialize_config(const RunConfig& cfg);

}  // namespace hmf
