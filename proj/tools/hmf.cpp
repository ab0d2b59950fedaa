// hmf: command line front end for the HMF weighted-particle simulator.

#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "hmf/analysis.hpp"
#include "hmf/config.hpp"
#include "hmf/equilibrium.hpp"
#include "hmf/error.hpp"
#include "hmf/pipeline.hpp"
#include "hmf/series_io.hpp"
#include "hmf/theory.hpp"

namespace {

using namespace hmf;

struct SeriesOptions {
  std::string input;
  std::string column = "mx";
  std::string detrend = "constant";
  double window = 5.0;
  std::optional<double> tail_start;
};

void add_series_options(CLI::App* cmd, SeriesOptions& o) {
  cmd->add_option("--input", o.input, "CSV file with a t column")->required()->check(CLI::ExistingFile);
  cmd->add_option("--column", o.column, "column to analyse");
  cmd->add_option("--detrend", o.detrend, "none, constant or running")
      ->check(CLI::IsMember({"none", "constant", "running"}));
  cmd->add_option("--window", o.window, "running detrend half window");
  cmd->add_option("--tail-start", o.tail_start, "constant detrend: average over t >= this (default: half the span)");
}

TimeSeries load_detrended(const SeriesOptions& o) {
  const TimeSeries raw = read_series_column(o.input, o.column);
  if (o.detrend == "none") return raw;
  if (o.detrend == "running") return detrend_running(raw, o.window);
  const double start = o.tail_start.value_or(0.5 * (raw.t.front() + raw.t.back()));
  return detrend_constant(raw, start);
}

AngleBasis parse_basis(const std::string& s) { return s == "sin" ? AngleBasis::Sin : AngleBasis::Cos; }

Component parse_component(const std::string& s) {
  if (s == "mx") return Component::Mx;
  if (s == "my") return Component::My;
  throw InvalidParameter("component must be mx or my");
}

int report_conservation(const ConservationSummary& c) {
  std::printf("energy_drift = %.3e\nmomentum_drift = %.3e\ncasimirs = %s\n", c.energy_drift,
              c.momentum_drift, c.casimirs_identical ? "identical" : "CHANGED");
  if (c.ok()) return 0;
  std::fprintf(stderr, "[conservation] run FAILED: energy drift %.3e (limit %.0e)%s\n", c.energy_drift,
               kEnergyDriftThreshold, c.casimirs_identical ? "" : ", casimirs changed");
  return 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"HMF Vlasov weighted-particle simulator and algebraic damping toolkit"};
  app.set_version_flag("--version", HMF_VERSION);
  app.require_subcommand(1);

  // equilibrium
  double eq_temperature = 0.1;
  double eq_tolerance = kDefaultEquilibriumTolerance;
  auto* eq_cmd = app.add_subcommand("equilibrium", "solve the self-consistent magnetization");
  eq_cmd->add_option("--temperature,-T", eq_temperature, "temperature")->required();
  eq_cmd->add_option("--tolerance", eq_tolerance, "residual tolerance");

  // simulate
  std::string sim_config;
  std::string sim_resume;
  std::string sim_output;
  auto* sim_cmd = app.add_subcommand("simulate", "run the particle simulation and write series.csv");
  sim_cmd->add_option("--config", sim_config, "run configuration")->required()->check(CLI::ExistingFile);
  sim_cmd->add_option("--resume", sim_resume, "checkpoint to continue from")->check(CLI::ExistingFile);
  sim_cmd->add_option("--output", sim_output, "output directory (overrides the config)");

  // analyze
  auto* an_cmd = app.add_subcommand("analyze", "fit or transform a recorded series");
  an_cmd->require_subcommand(1);

  SeriesOptions fit_opts;
  double fit_tmin = 0.0, fit_tmax = 0.0;
  std::string fit_envelope_out;
  auto* fit_cmd = an_cmd->add_subcommand("fit", "power-law fit of the envelope");
  add_series_options(fit_cmd, fit_opts);
  fit_cmd->add_option("--tmin", fit_tmin, "fit window start")->required();
  fit_cmd->add_option("--tmax", fit_tmax, "fit window end")->required();
  fit_cmd->add_option("--envelope", fit_envelope_out, "write the envelope points to this CSV");

  SeriesOptions sp_opts;
  double sp_t0 = 0.0, sp_t1 = 0.0;
  std::pair<double, double> sp_band{0.0, 0.0};
  bool sp_band_set = false;
  std::size_t sp_oversample = kDefaultOversample;
  std::string sp_output;
  auto* sp_cmd = an_cmd->add_subcommand("spectrum", "power spectrum and peak frequency");
  add_series_options(sp_cmd, sp_opts);
  sp_cmd->add_option("--t0", sp_t0, "window start")->required();
  sp_cmd->add_option("--t1", sp_t1, "window end (exclusive)")->required();
  auto* band_opt = sp_cmd->add_option("--band", sp_band, "peak search band lo,hi")->delimiter(',');
  sp_cmd->add_option("--oversample", sp_oversample, "zero-padding factor")->check(CLI::PositiveNumber);
  sp_cmd->add_option("--output", sp_output, "write omega,power CSV here");

  // theory
  auto* th_cmd = app.add_subcommand("theory", "pendulum orbits and decay predictions");
  th_cmd->require_subcommand(1);
  double th_temperature = 0.1;

  double fr_energy = 0.0;
  auto* fr_cmd = th_cmd->add_subcommand("freq", "orbit frequency, period and action at an energy");
  fr_cmd->add_option("--temperature,-T", th_temperature)->required();
  fr_cmd->add_option("--energy,-E", fr_energy)->required();

  double fo_action = 0.0;
  std::optional<double> fo_fraction;
  int fo_m = 1;
  std::string fo_basis = "cos";
  std::string fo_regime = "libration";
  auto* fo_cmd = th_cmd->add_subcommand("fourier", "angle Fourier coefficient of cos x or sin x");
  fo_cmd->add_option("--temperature,-T", th_temperature)->required();
  auto* action_opt = fo_cmd->add_option("--action,-J", fo_action, "action");
  fo_cmd->add_option("--fraction", fo_fraction, "action as a fraction of the separatrix action")
      ->excludes(action_opt);
  fo_cmd->add_option("--m", fo_m, "harmonic")->required();
  fo_cmd->add_option("--basis", fo_basis)->check(CLI::IsMember({"cos", "sin"}));
  fo_cmd->add_option("--regime", fo_regime)->check(CLI::IsMember({"libration", "rotation"}));

  std::string pr_component;
  auto* pr_cmd = th_cmd->add_subcommand("predict", "asymptotic exponent and frequency");
  pr_cmd->add_option("--temperature,-T", th_temperature)->required();
  pr_cmd->add_option("--component", pr_component, "mx or my (default both)")
      ->check(CLI::IsMember({"mx", "my"}));

  // pipeline
  std::string pl_config;
  std::string pl_output;
  auto* pl_cmd = app.add_subcommand("pipeline", "simulate, analyse and compare with the prediction");
  pl_cmd->add_option("--config", pl_config, "run configuration")->required()->check(CLI::ExistingFile);
  pl_cmd->add_option("--output", pl_output, "output directory (overrides the config)");

  CLI11_PARSE(app, argc, argv);

  std::string stage = "cli";
  try {
    if (eq_cmd->parsed()) {
      stage = "equilibrium";
      const auto s = solve_m0(eq_temperature, eq_tolerance);
      std::printf("temperature = %.12g\nm0 = %.12g\nomega0 = %.12g\nnorm = %.12g\n", s.temperature,
                  s.m0, s.omega0, s.norm);
      return 0;
    }

    if (sim_cmd->parsed() || pl_cmd->parsed()) {
      stage = "config";
      RunConfig cfg = load_config(sim_cmd->parsed() ? sim_config : pl_config);
      const std::string& out_dir = sim_cmd->parsed() ? sim_output : pl_output;
      if (!out_dir.empty()) cfg.output.directory = out_dir;
      if (sim_cmd->parsed()) {
        std::optional<std::filesystem::path> resume;
        if (!sim_resume.empty()) resume = sim_resume;
        const auto out = simulate(cfg, resume);
        std::printf("steps = %zu\nsamples = %zu\n", out.run.steps, out.run.series.samples.size());
        return report_conservation(out.conservation);
      }
      const auto out = run_pipeline(cfg);
      std::fputs(format_fit_report(out.observables).c_str(), stdout);
      return report_conservation(out.simulation.conservation);
    }

    if (fit_cmd->parsed()) {
      stage = "analyze";
      const TimeSeries f = load_detrended(fit_opts);
      const auto env = envelope(f);
      if (!fit_envelope_out.empty()) {
        std::string text = "t,amplitude\n";
        char buf[80];
        for (const auto& p : env) {
          std::snprintf(buf, sizeof(buf), "%.15g,%.15g\n", p.t, p.amplitude);
          text += buf;
        }
        write_text_atomic(fit_envelope_out, text);
      }
      const auto fit = fit_power_law(env, fit_tmin, fit_tmax);
      std::printf("exponent = %.6f\nresidual = %.6g\npoints = %zu\namplitude = %.6g\n", fit.exponent,
                  fit.residual, fit.points, std::exp(fit.log_amplitude));
      return 0;
    }

    if (sp_cmd->parsed()) {
      stage = "analyze";
      sp_band_set = band_opt->count() > 0;
      const TimeSeries f = load_detrended(sp_opts);
      const Spectrum sp = power_spectrum(f, sp_t0, sp_t1, sp_oversample);
      if (!sp_output.empty()) write_spectrum_csv(sp_output, sp);
      const double lo = sp_band_set ? sp_band.first : sp.omega[1];
      const double hi = sp_band_set ? sp_band.second : sp.omega.back();
      const auto peak = peak_frequency(sp, lo, hi);
      std::printf("peak_omega = %.6f\npeak_power = %.6g\nbin_width = %.6g\nsamples = %zu\n", peak.omega,
                  peak.power, sp.omega[1] - sp.omega[0], sp.samples);
      return 0;
    }

    stage = "theory";
    const auto eq = solve_m0(th_temperature);
    if (fr_cmd->parsed()) {
      const auto o = orbit_from_energy(fr_energy, eq.m0);
      std::printf("regime = %s\nfrequency = %.12g\nperiod = %.12g\naction = %.12g\n",
                  o.regime == OrbitRegime::Libration ? "libration" : "rotation", o.frequency, o.period,
                  o.action);
      return 0;
    }
    if (fo_cmd->parsed()) {
      const double js = separatrix_action(eq.m0);
      const double j = fo_fraction ? *fo_fraction * js : fo_action;
      const auto regime = fo_regime == "rotation" ? OrbitRegime::Rotation : OrbitRegime::Libration;
      const auto o = orbit_from_action(j, eq.m0, regime);
      const auto c = angle_fourier(fo_m, o, parse_basis(fo_basis));
      std::printf("action = %.12g\nseparatrix_action = %.12g\nfrequency = %.12g\nre = %.12g\nim = %.12g\nabs = %.12g\n",
                  j, js, o.frequency, c.real(), c.imag(), std::abs(c));
      return 0;
    }
    if (pr_cmd->parsed()) {
      std::printf("m0 = %.12g\nomega0 = %.12g\nseparatrix_action = %.12g\n", eq.m0, eq.omega0,
                  separatrix_action(eq.m0));
      for (const char* name : {"mx", "my"}) {
        if (!pr_component.empty() && pr_component != name) continue;
        const auto p = predict_decay(parse_component(name), eq.m0);
        std::printf("%s: harmonic = %d, exponent = %g, frequency = %.6f\n", name, p.harmonic, p.exponent,
                    p.frequency);
      }
      if (eq.m0 > 0.0)
        std::printf("slope |c_2| = %.4f\nslope |s_1| = %.4f\n", small_action_slope(2, AngleBasis::Cos, eq.m0),
                    small_action_slope(1, AngleBasis::Sin, eq.m0));
      return 0;
    }
  } catch (const StageError& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "[%s] %s\n", stage.c_str(), e.what());
    return 1;
  }
  return 0;
}
