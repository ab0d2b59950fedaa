#include "hmf/analysis.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <mutex>
#include <numbers>
#include <string>

#include "hmf/error.hpp"

namespace hmf {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// The FFTW planner is not re-entrant.
std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwFree {
  void operator()(void* p) const { fftw_free(p); }
};

}  // namespace

void TimeSeries::validate() const {
  if (t.size() != value.size()) throw InvalidParameter("time and value arrays differ in length");
  for (std::size_t k = 1; k < t.size(); ++k)
    if (!(t[k] > t[k - 1])) throw InvalidParameter("series times must be strictly increasing");
}

TimeSeries component(std::span<const MagnetizationSample> samples, Component which) {
  TimeSeries s;
  s.t.reserve(samples.size());
  s.value.reserve(samples.size());
  for (const auto& m : samples) {
    s.t.push_back(m.t);
    s.value.push_back(which == Component::Mx ? m.mx : m.my);
  }
  return s;
}

TimeSeries detrend_constant(const TimeSeries& s, double t_tail_start) {
  s.validate();
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t k = 0; k < s.size(); ++k) {
    if (s.t[k] >= t_tail_start) {
      sum += s.value[k];
      ++count;
    }
  }
  if (count == 0)
    throw InvalidWindow("no samples at or after t = " + std::to_string(t_tail_start) +
                        " to average over");
  const double mean = sum / static_cast<double>(count);
  TimeSeries out = s;
  for (double& v : out.value) v -= mean;
  return out;
}

TimeSeries detrend_running(const TimeSeries& s, double half_window) {
  s.validate();
  if (s.size() < 2) throw InvalidWindow("running average needs at least two samples");
  double max_step = 0.0;
  for (std::size_t k = 1; k < s.size(); ++k) max_step = std::max(max_step, s.t[k] - s.t[k - 1]);
  if (!(half_window >= max_step * (1.0 - 1e-12)))
    throw InvalidWindow("half window " + std::to_string(half_window) +
                        " is shorter than the sampling interval");
  const double t_first = s.t.front();
  const double t_last = s.t.back();
  if (2.0 * half_window > t_last - t_first)
    throw InvalidWindow("running-average window is longer than the series");

  // cumulative trapezoid integral at the sample times
  std::vector<double> cum(s.size(), 0.0);
  for (std::size_t k = 1; k < s.size(); ++k)
    cum[k] = cum[k - 1] + 0.5 * (s.t[k] - s.t[k - 1]) * (s.value[k] + s.value[k - 1]);

  // integral of the linear interpolant from t_first to tau
  auto integral_to = [&](double tau) {
    tau = std::clamp(tau, t_first, t_last);
    auto it = std::upper_bound(s.t.begin(), s.t.end(), tau);
    std::size_t j = it == s.t.begin() ? 0 : static_cast<std::size_t>(it - s.t.begin()) - 1;
    if (j + 1 >= s.size()) return cum.back();
    const double span = s.t[j + 1] - s.t[j];
    const double u = tau - s.t[j];
    const double slope = (s.value[j + 1] - s.value[j]) / span;
    return cum[j] + u * (s.value[j] + 0.5 * slope * u);
  };

  const double tol = 1e-9 * max_step;
  TimeSeries out;
  for (std::size_t k = 0; k < s.size(); ++k) {
    const double t = s.t[k];
    if (t - half_window < t_first - tol || t + half_window > t_last + tol) continue;
    const double mean = (integral_to(t + half_window) - integral_to(t - half_window)) / (2.0 * half_window);
    out.t.push_back(t);
    out.value.push_back(s.value[k] - mean);
  }
  return out;
}

std::vector<EnvelopePoint> envelope(const TimeSeries& f) {
  f.validate();
  std::vector<EnvelopePoint> env;
  for (std::size_t k = 1; k + 1 < f.size(); ++k) {
    const double y0 = std::abs(f.value[k - 1]);
    const double y1 = std::abs(f.value[k]);
    const double y2 = std::abs(f.value[k + 1]);
    if (!(y1 > y0 && y1 > y2)) continue;
    const double x0 = f.t[k - 1], x1 = f.t[k], x2 = f.t[k + 1];
    // Newton form of the interpolating parabola; strict maximum => curvature < 0.
    const double d01 = (y1 - y0) / (x1 - x0);
    const double d12 = (y2 - y1) / (x2 - x1);
    const double d012 = (d12 - d01) / (x2 - x0);
    EnvelopePoint pt{x1, y1};
    if (d012 < 0.0) {
      const double tv = std::clamp(0.5 * (x0 + x1) - d01 / (2.0 * d012), x0, x2);
      pt = {tv, y0 + d01 * (tv - x0) + d012 * (tv - x0) * (tv - x1)};
    }
    env.push_back(pt);
  }
  return env;
}

PowerLawFit fit_power_law(std::span<const EnvelopePoint> env, double t_min, double t_max) {
  if (!(t_min < t_max)) throw InvalidFit("fit window needs t_min < t_max");
  std::vector<double> lx, ly;
  for (const auto& pt : env) {
    if (pt.t < t_min || pt.t > t_max) continue;
    if (!(pt.amplitude > 0.0) || !(pt.t > 0.0))
      throw InvalidFit("non-positive amplitude or time at t = " + std::to_string(pt.t));
    lx.push_back(std::log(pt.t));
    ly.push_back(std::log(pt.amplitude));
  }
  const std::size_t n = lx.size();
  if (n < 3)
    throw InvalidFit("only " + std::to_string(n) + " envelope points in [" + std::to_string(t_min) +
                     ", " + std::to_string(t_max) + "], need 3");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  if (!(sxx > 0.0)) throw InvalidFit("envelope points share a single time");
  PowerLawFit fit;
  fit.exponent = sxy / sxx;
  fit.log_amplitude = my - fit.exponent * mx;
  double ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = ly[i] - (fit.log_amplitude + fit.exponent * lx[i]);
    ss += r * r;
  }
  fit.residual = std::sqrt(ss / static_cast<double>(n));
  fit.t_min = t_min;
  fit.t_max = t_max;
  fit.points = n;
  return fit;
}

Spectrum power_spectrum(const TimeSeries& f, double t0, double t1, std::size_t oversample) {
  f.validate();
  if (!(t0 < t1)) throw InvalidWindow("spectrum window needs t0 < t1");
  if (oversample < 1) throw InvalidParameter("oversample must be >= 1");
  if (f.size() < 2) throw InvalidWindow("series too short for a spectrum");
  const double spacing_hint = f.t[1] - f.t[0];
  const double eps = 1e-9 * spacing_hint;
  if (t0 < f.t.front() - eps || t1 > f.t.back() + spacing_hint + eps)
    throw InvalidWindow("spectrum window lies outside the series");

  std::vector<double> window;
  double first_t = 0.0, last_t = 0.0;
  for (std::size_t k = 0; k < f.size(); ++k) {
    if (f.t[k] >= t0 - eps && f.t[k] < t1 - eps) {
      if (window.empty()) first_t = f.t[k];
      last_t = f.t[k];
      window.push_back(f.value[k]);
    }
  }
  const std::size_t n = window.size();
  if (n < 16) throw InvalidWindow("spectrum window holds " + std::to_string(n) + " samples, need 16");
  const double dt = (last_t - first_t) / static_cast<double>(n - 1);
  for (std::size_t k = 0; k < f.size(); ++k) {
    if (f.t[k] < first_t || f.t[k] > last_t) continue;
    const double expected = first_t + dt * std::round((f.t[k] - first_t) / dt);
    if (std::abs(f.t[k] - expected) > 1e-6 * dt)
      throw InvalidWindow("spectrum needs uniformly spaced samples");
  }

  const std::size_t m = n * oversample;
  const std::size_t bins = m / 2 + 1;
  std::unique_ptr<double, FftwFree> in(static_cast<double*>(fftw_malloc(sizeof(double) * m)));
  std::unique_ptr<fftw_complex, FftwFree> out(
      static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * bins)));
  fftw_plan plan;
  {
    std::lock_guard lock(fftw_planner_mutex());
    plan = fftw_plan_dft_r2c_1d(static_cast<int>(m), in.get(), out.get(), FFTW_ESTIMATE);
  }
  std::fill(in.get(), in.get() + m, 0.0);
  std::copy(window.begin(), window.end(), in.get());
  fftw_execute(plan);
  {
    std::lock_guard lock(fftw_planner_mutex());
    fftw_destroy_plan(plan);
  }

  Spectrum sp;
  sp.t0 = t0;
  sp.t1 = t1;
  sp.samples = n;
  sp.oversample = oversample;
  sp.omega.resize(bins);
  sp.power.resize(bins);
  const double length = dt * static_cast<double>(m);
  for (std::size_t k = 0; k < bins; ++k) {
    const double re = out.get()[k][0];
    const double im = out.get()[k][1];
    sp.omega[k] = kTwoPi * static_cast<double>(k) / length;
    sp.power[k] = re * re + im * im;
  }
  return sp;
}

SpectralPeak peak_frequency(const Spectrum& sp, double omega_min, double omega_max) {
  std::size_t best = sp.omega.size();
  for (std::size_t k = 0; k < sp.omega.size(); ++k) {
    if (sp.omega[k] < omega_min || sp.omega[k] > omega_max) continue;
    if (best == sp.omega.size() || sp.power[k] > sp.power[best]) best = k;
  }
  if (best == sp.omega.size())
    throw InvalidWindow("no spectral bins in band [" + std::to_string(omega_min) + ", " +
                        std::to_string(omega_max) + "]");
  SpectralPeak peak{sp.omega[best], sp.power[best]};
  if (best == 0 || best + 1 >= sp.omega.size()) return peak;
  const double a = sp.power[best - 1], b = sp.power[best], c = sp.power[best + 1];
  const double denom = a - 2.0 * b + c;
  if (denom < 0.0) {
    const double d = std::clamp(0.5 * (a - c) / denom, -0.5, 0.5);
    const double step = sp.omega[1] - sp.omega[0];
    peak = {sp.omega[best] + d * step, b - 0.25 * (a - c) * d};
  }
  return peak;
}

}  // namespace hmf
