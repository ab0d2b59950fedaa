#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "hmf/ensemble.hpp"

namespace hmf {

/// Ordered samples (t_k, v_k) with strictly increasing t.
struct TimeSeries {
  std::vector<double> t;
  std::vector<double> value;

  std::size_t size() const noexcept { return t.size(); }
  void validate() const;
};

enum class Component { Mx, My };

TimeSeries component(std::span<const MagnetizationSample> samples, Component which);

/// Subtracts the mean of the samples with t >= t_tail_start.
TimeSeries detrend_constant(const TimeSeries& s, double t_tail_start);

/// Subtracts the centred moving mean (1/2D) int_{t-D}^{t+D} v dt', with the
/// integral taken over the piecewise-linear interpolant of the samples. Only
/// times with the whole window inside the series are returned.
TimeSeries detrend_running(const TimeSeries& s, double half_window);

struct EnvelopePoint {
  double t = 0.0;
  double amplitude = 0.0;
};

/// Strict local maxima of |v|, refined by a parabola through each maximum and
/// its two neighbours.
std::vector<EnvelopePoint> envelope(const TimeSeries& f);

struct PowerLawFit {
  double exponent = 0.0;
  double log_amplitude = 0.0;
  double residual = 0.0;  ///< RMS of the log-log residuals
  double t_min = 0.0;
  double t_max = 0.0;
  std::size_t points = 0;
};

/// Least squares line through (log t_k, log a_k) for t_k in [t_min, t_max].
PowerLawFit fit_power_law(std::span<const EnvelopePoint> env, double t_min, double t_max);

struct Spectrum {
  std::vector<double> omega;  ///< angular frequencies, uniform from 0
  std::vector<double> power;
  double t0 = 0.0;
  double t1 = 0.0;
  std::size_t samples = 0;     ///< samples taken from the series
  std::size_t oversample = 1;  ///< zero-padding factor
};

inline constexpr std::size_t kDefaultOversample = 4;

/// |DFT|^2 of the samples with t0 <= t < t1 (rectangular window), zero-padded
/// to oversample times their count. Bin k sits at omega = 2 pi k / (oversample
/// (t1 - t0)), with t1 - t0 taken as count times the sampling interval. Only
/// the non-negative half of the spectrum is kept.
Spectrum power_spectrum(const TimeSeries& f, double t0, double t1,
                        std::size_t oversample = kDefaultOversample);

struct SpectralPeak {
  double omega = 0.0;
  double power = 0.0;
};

/// Largest bin with omega in [omega_min, omega_max], refined by a parabola
/// through it and its neighbours.
SpectralPeak peak_frequency(const Spectrum& sp, double omega_min, double omega_max);

}  // namespace hmf
