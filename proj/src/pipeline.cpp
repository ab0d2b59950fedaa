#include "hmf/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>

#include "hmf/checkpoint.hpp"
#include "hmf/error.hpp"
#include "hmf/perturbation.hpp"
#include "hmf/series_io.hpp"

#ifndef HMF_VERSION
#define HMF_VERSION "unknown"
#endif

namespace hmf {
namespace {

namespace fs = std::filesystem;

std::string utc_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

// Runs fn and rethrows any library error tagged with the stage name.
template <class Fn>
auto staged(const char* stage, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(stage, e.what());
  }
}

struct Manifest {
  std::string started;
  std::vector<std::pair<std::string, fs::path>> outputs;
};

void write_manifest(const fs::path& dir, const RunConfig& cfg, const Manifest& m,
                    const SimulationOutcome& sim) {
  const auto& c = sim.conservation;
  std::string out;
  out += "status = " + std::string(c.ok() ? "OK" : "FAILED") + "\n";
  out += "version = " HMF_VERSION "\n";
  out += "started = " + m.started + "\n";
  out += "finished = " + utc_now() + "\n";
  out += "steps = " + std::to_string(sim.run.steps) + "\n";
  out += "m0 = " + fmt(sim.equilibrium.m0) + "\n";
  out += "omega0 = " + fmt(sim.equilibrium.omega0) + "\n";
  for (const auto& [name, path] : m.outputs) out += "output." + name + " = " + path.string() + "\n";
  out += "energy_drift = " + fmt(c.energy_drift) + "\n";
  out += "energy_drift_limit = " + fmt(kEnergyDriftThreshold) + "\n";
  out += "momentum_drift = " + fmt(c.momentum_drift) + "\n";
  out += "casimirs = " + std::string(c.casimirs_identical ? "identical" : "CHANGED") + "\n";
  out += "\n# config\n";
  out += serialize_config(cfg);
  write_text_atomic(dir / "manifest.txt", out);
}

WeightedEnsemble initial_ensemble(const RunConfig& cfg, const EquilibriumState& eq) {
  const Density f = perturbed_density(eq, cfg.perturbation);
  return init_lattice(cfg.lattice, f, cfg.integration.use_symmetry);
}

SimulationOutcome simulate_into(const RunConfig& cfg, const std::optional<fs::path>& resume,
                                Manifest& manifest) {
  const fs::path dir = cfg.output.directory;
  staged("output", [&] {
    fs::create_directories(dir);
    return 0;
  });

  SimulationOutcome out;
  out.equilibrium = staged("equilibrium", [&] {
    return solve_m0(cfg.equilibrium.temperature, cfg.equilibrium.tolerance);
  });

  WeightedEnsemble e = staged("init", [&] {
    if (resume) return read_checkpoint(*resume);
    return initial_ensemble(cfg, out.equilibrium);
  });

  SimConfig sim = cfg.integration;
  if (sim.checkpoint_path.is_relative()) sim.checkpoint_path = dir / sim.checkpoint_path;
  const auto casimirs_before = staged("init", [&] { return casimirs(e, 4); });

  out.run = staged("run", [&] { return run(e, sim); });

  const auto casimirs_after = casimirs(e, 4);
  out.conservation.casimirs_identical = casimirs_before == casimirs_after;
  out.conservation.energy_drift = out.run.conservation.max_relative_energy_drift();
  out.conservation.momentum_drift = out.run.conservation.max_momentum_drift();

  staged("output", [&] {
    write_series_csv(dir / "series.csv", out.run.series.samples);
    return 0;
  });
  manifest.outputs.emplace_back("series", dir / "series.csv");
  if (sim.checkpoint_every > 0 && fs::exists(sim.checkpoint_path))
    manifest.outputs.emplace_back("checkpoint", sim.checkpoint_path);
  return out;
}

std::pair<double, double> band_of(const RunConfig& cfg, Component which) {
  return which == Component::Mx ? cfg.analysis.band_mx : cfg.analysis.band_my;
}

const char* name_of(Component which) { return which == Component::Mx ? "mx" : "my"; }

}  // namespace

SimulationOutcome simulate(const RunConfig& cfg, const std::optional<fs::path>& resume) {
  Manifest manifest;
  manifest.started = utc_now();
  SimulationOutcome out = simulate_into(cfg, resume, manifest);
  staged("output", [&] {
    write_manifest(cfg.output.directory, cfg, manifest, out);
    return 0;
  });
  return out;
}

ObservableReport analyze_component(const std::vector<MagnetizationSample>& samples,
                                   Component which, const RunConfig& cfg,
                                   const EquilibriumState& eq) {
  ObservableReport r;
  r.observable = which;
  r.prediction = predict_decay(which, eq.m0);

  const double t_end = cfg.integration.t_end;
  const auto& a = cfg.analysis;
  const TimeSeries raw = component(samples, which);
  const TimeSeries f = a.detrend == DetrendMode::Constant
                           ? detrend_constant(raw, a.tail_start.value_or(t_end / 2.0))
                           : detrend_running(raw, a.window);
  r.envelope = envelope(f);

  const double spacing = raw.size() > 1 ? raw.t[1] - raw.t[0] : cfg.integration.dt;
  const double t_min = a.fit_tmin.value_or(t_end / 6.0);
  const double t_max = a.fit_tmax.value_or(5.0 * t_end / 6.0);
  const bool stationary =
      cfg.perturbation.kind == PerturbationKind::None || cfg.perturbation.amplitude == 0.0;
  if (stationary) {
    r.fit_note = "no decaying envelope (unperturbed stationary state)";
  } else {
    try {
      r.fit = fit_power_law(r.envelope, t_min, t_max);
    } catch (const InvalidFit& ex) {
      r.fit_note = std::string("no decaying envelope (") + ex.what() + ")";
    }
  }

  double t0 = a.spectrum_t0.value_or(t_min);
  double t1 = a.spectrum_t1.value_or(f.t.back() + spacing);
  if (!a.spectrum_t0) t0 = std::max(t0, f.t.front());
  if (!a.spectrum_t1) t1 = std::min(t1, f.t.back() + spacing);
  r.spectrum = power_spectrum(f, t0, t1, a.oversample);
  const auto [lo, hi] = band_of(cfg, which);
  r.peak = peak_frequency(r.spectrum, lo, hi);
  return r;
}

std::string format_fit_report(const std::vector<ObservableReport>& reports) {
  std::string out;
  for (const auto& r : reports) {
    out += std::string("[") + name_of(r.observable) + "]\n";
    out += "harmonic = " + std::to_string(r.prediction.harmonic) + "\n";
    out += "predicted_exponent = " + fmt(r.prediction.exponent) + "\n";
    if (r.fit) {
      out += "measured_exponent = " + fmt(r.fit->exponent) + "\n";
      out += "fit_residual = " + fmt(r.fit->residual) + "\n";
      out += "fit_points = " + std::to_string(r.fit->points) + "\n";
      out += "fit_window = " + fmt(r.fit->t_min) + ", " + fmt(r.fit->t_max) + "\n";
    } else {
      out += "measured_exponent = none\n";
      out += "fit_status = " + r.fit_note + "\n";
    }
    out += "predicted_frequency = " + fmt(r.prediction.frequency) + "\n";
    out += "measured_frequency = " + (r.peak ? fmt(r.peak->omega) : std::string("none")) + "\n";
    out += "spectrum_window = " + fmt(r.spectrum.t0) + ", " + fmt(r.spectrum.t1) + "\n\n";
  }
  return out;
}

PipelineOutcome run_pipeline(const RunConfig& cfg) {
  Manifest manifest;
  manifest.started = utc_now();
  PipelineOutcome out;
  out.directory = cfg.output.directory;
  out.simulation = simulate_into(cfg, std::nullopt, manifest);
  const auto& samples = out.simulation.run.series.samples;

  // My vanishes identically on a symmetry-reduced run.
  std::vector<Component> which{Component::Mx};
  if (!cfg.integration.use_symmetry) which.push_back(Component::My);
  for (Component c : which)
    out.observables.push_back(staged("analyze", [&] {
      return analyze_component(samples, c, cfg, out.simulation.equilibrium);
    }));

  const fs::path& dir = out.directory;
  staged("output", [&] {
    std::string env = "component,t,amplitude\n";
    char buf[96];
    for (const auto& r : out.observables)
      for (const auto& p : r.envelope) {
        std::snprintf(buf, sizeof(buf), "%s,%.15g,%.15g\n", name_of(r.observable), p.t,
                      p.amplitude);
        env += buf;
      }
    write_text_atomic(dir / "envelope.csv", env);

    std::string spec = "omega";
    for (const auto& r : out.observables) spec += std::string(",power_") + name_of(r.observable);
    spec += "\n";
    const auto& grid = out.observables.front().spectrum.omega;
    for (std::size_t k = 0; k < grid.size(); ++k) {
      std::snprintf(buf, sizeof(buf), "%.15g", grid[k]);
      spec += buf;
      for (const auto& r : out.observables) {
        std::snprintf(buf, sizeof(buf), ",%.15g", k < r.spectrum.power.size() ? r.spectrum.power[k] : 0.0);
        spec += buf;
      }
      spec += "\n";
    }
    write_text_atomic(dir / "spectrum.csv", spec);
    write_text_atomic(dir / "fit.txt", format_fit_report(out.observables));
    manifest.outputs.emplace_back("envelope", dir / "envelope.csv");
    manifest.outputs.emplace_back("fit", dir / "fit.txt");
    manifest.outputs.emplace_back("spectrum", dir / "spectrum.csv");
    write_manifest(dir, cfg, manifest, out.simulation);
    return 0;
  });
  return out;
}

}  // namespace hmf
