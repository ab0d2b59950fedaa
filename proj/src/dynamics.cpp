#include "hmf/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "hmf/checkpoint.hpp"
#include "hmf/detail/grid.hpp"
#include "hmf/detail/reduction.hpp"
#include "hmf/detail/sincos.hpp"
#include "hmf/error.hpp"
#include "hmf/parallel.hpp"

namespace hmf {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct ChunkSums {
  double mx = 0.0;
  double my = 0.0;
  double kinetic = 0.0;   // sum w p^2
  double momentum = 0.0;  // sum w p
};

struct Field {
  double mx = 0.0;
  double my = 0.0;
};

// Leapfrog state with sin/cos of the current positions cached, so each step
// costs one sin/cos evaluation per particle. Between steps the momenta may
// sit half a kick behind the positions (synced == false); the closing half
// kick is folded into the next pass. Increments are rounded onto the
// phase-space grid, which makes each step exactly invertible.
class Integrator {
 public:
  explicit Integrator(WeightedEnsemble& e)
      : e_(e), sin_(e.size()), cos_(e.size()), sums_(chunk_count(e.size())) {
    const auto x = e_.x();
    for (std::size_t i = 0; i < x.size(); ++i) detail::sincos_wrapped(x[i], sin_[i], cos_[i]);
    field_ = reduce_field(magnetization_of_cache());
  }

  Field field() const { return field_; }
  bool synced() const { return synced_; }

  // Full pass: optional closing half kick, optional recording of kinetic
  // energy and momentum at synchronized momenta, opening half kick, drift,
  // and reduction of the new field.
  ChunkSums advance(double dt, bool record) {
    const double h = 0.5 * dt;
    const bool close = !synced_;
    if (close && record) pass<true, true, true>(h, dt);
    else if (close) pass<true, false, true>(h, dt);
    else if (record) pass<false, true, true>(h, dt);
    else pass<false, false, true>(h, dt);
    ChunkSums recorded = combine();
    field_ = reduce_field(recorded);
    synced_ = false;
    e_.set_time(e_.time() + dt);
    return recorded;
  }

  // Closing half kick only, leaving momenta synchronized with positions.
  ChunkSums synchronize(double dt, bool record) {
    const double h = 0.5 * dt;
    if (!synced_) {
      if (record) pass<true, true, false>(h, dt);
      else pass<true, false, false>(h, dt);
      synced_ = true;
    } else if (record) {
      pass<false, true, false>(h, dt);
    }
    return combine();
  }

  double energy(const ChunkSums& s, const Field& f) const {
    const double scale = e_.symmetry_reduced() ? 2.0 : 1.0;
    return 0.5 * scale * s.kinetic - 0.5 * (f.mx * f.mx + f.my * f.my);
  }
  double momentum(const ChunkSums& s) const { return e_.symmetry_reduced() ? 0.0 : s.momentum; }

 private:
  template <bool Close, bool Record, bool Advance>
  void pass(double h, double dt) {
    const Field f = field_;
    double* __restrict x = e_.x_mut().data();
    double* __restrict p = e_.p_mut().data();
    double* __restrict sn = sin_.data();
    double* __restrict cs = cos_.data();
    const double* __restrict w = e_.weights().data();
    const std::size_t n = e_.size();
    default_pool().parallel_for(sums_.size(), [&](std::size_t c) {
      const std::size_t begin = c * kChunkSize;
      const std::size_t end = std::min(begin + kChunkSize, n);
      detail::LaneSum ax, ay, ak, am;
      for (std::size_t i = begin; i < end; ++i) {
        double pi = p[i];
        const double kick = detail::snap(h * (-f.mx * sn[i] + f.my * cs[i]), detail::kMomentumQuantum);
        if constexpr (Close) pi += kick;
        if constexpr (Record) {
          ak.add(i - begin, w[i] * pi * pi);
          am.add(i - begin, w[i] * pi);
        }
        if constexpr (Advance) {
          pi += kick;
          double xi = x[i] + detail::snap(dt * pi, detail::kPositionQuantum);
          xi = xi > kPi ? xi - kTwoPi : xi;
          xi = xi <= -kPi ? xi + kTwoPi : xi;
          x[i] = xi;
          double s, co;
          detail::sincos_wrapped(xi, s, co);
          sn[i] = s;
          cs[i] = co;
          ax.add(i - begin, w[i] * co);
          ay.add(i - begin, w[i] * s);
        }
        p[i] = pi;
      }
      if constexpr (Advance) {
        // Drifts longer than 2 pi escape the single wrap above.
        bool escaped = false;
        for (std::size_t i = begin; i < end; ++i) escaped |= (x[i] > kPi) | (x[i] <= -kPi);
        if (escaped) [[unlikely]] {
          ax = {};
          ay = {};
          for (std::size_t i = begin; i < end; ++i) {
            x[i] = wrap_angle(x[i]);
            detail::sincos_wrapped(x[i], sn[i], cs[i]);
            ax.add(i - begin, w[i] * cs[i]);
            ay.add(i - begin, w[i] * sn[i]);
          }
        }
      }
      sums_[c] = {ax.total(), ay.total(), ak.total(), am.total()};
    });
  }

  ChunkSums magnetization_of_cache() {
    const double* w = e_.weights().data();
    const std::size_t n = e_.size();
    for (std::size_t c = 0; c < sums_.size(); ++c) {
      const std::size_t begin = c * kChunkSize;
      const std::size_t end = std::min(begin + kChunkSize, n);
      detail::LaneSum ax, ay;
      for (std::size_t i = begin; i < end; ++i) {
        ax.add(i - begin, w[i] * cos_[i]);
        ay.add(i - begin, w[i] * sin_[i]);
      }
      sums_[c] = {ax.total(), ay.total(), 0.0, 0.0};
    }
    return combine();
  }

  ChunkSums combine() const {
    ChunkSums t;
    for (const auto& s : sums_) {
      t.mx += s.mx;
      t.my += s.my;
      t.kinetic += s.kinetic;
      t.momentum += s.momentum;
    }
    return t;
  }

  Field reduce_field(const ChunkSums& s) const {
    if (e_.symmetry_reduced()) return {2.0 * s.mx, 0.0};
    return {s.mx, s.my};
  }

  WeightedEnsemble& e_;
  std::vector<double> sin_;
  std::vector<double> cos_;
  std::vector<ChunkSums> sums_;
  Field field_;
  bool synced_ = true;
};

double max_abs_deviation(const std::vector<double>& v) {
  double worst = 0.0;
  for (double x : v) worst = std::max(worst, std::abs(x - v.front()));
  return worst;
}

}  // namespace

void SimConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidParameter("dt must be positive");
  if (!(t_end >= 0.0) || !std::isfinite(t_end)) throw InvalidParameter("t_end must be >= 0");
  if (record_stride < 1) throw InvalidParameter("record_stride must be >= 1");
}

double ConservationTrace::max_relative_energy_drift() const {
  if (energy.empty()) return 0.0;
  const double ref = std::abs(energy.front());
  return ref > 0.0 ? max_abs_deviation(energy) / ref : max_abs_deviation(energy);
}

double ConservationTrace::max_momentum_drift() const {
  return momentum.empty() ? 0.0 : max_abs_deviation(momentum);
}

void step(WeightedEnsemble& e, double dt) {
  if (!(dt != 0.0) || !std::isfinite(dt)) throw InvalidParameter("dt must be finite and non-zero");
  Integrator integ(e);
  integ.advance(dt, false);
  integ.synchronize(dt, false);
}

double total_energy(const WeightedEnsemble& e) {
  const auto m = magnetization(e);
  const auto p = e.p();
  const auto w = e.weights();
  const std::size_t chunks = chunk_count(e.size());
  std::vector<double> part(chunks);
  default_pool().parallel_for(chunks, [&](std::size_t c) {
    const std::size_t begin = c * kChunkSize;
    const std::size_t end = std::min(begin + kChunkSize, e.size());
    detail::LaneSum s;
    for (std::size_t i = begin; i < end; ++i) s.add(i - begin, w[i] * p[i] * p[i]);
    part[c] = s.total();
  });
  double kinetic = 0.0;
  for (double v : part) kinetic += v;
  if (e.symmetry_reduced()) kinetic *= 2.0;
  return 0.5 * kinetic - 0.5 * (m.mx * m.mx + m.my * m.my);
}

double total_momentum(const WeightedEnsemble& e) {
  if (e.symmetry_reduced()) return 0.0;
  const auto p = e.p();
  const auto w = e.weights();
  const std::size_t chunks = chunk_count(e.size());
  double total = 0.0;
  for (std::size_t c = 0; c < chunks; ++c) {
    const std::size_t begin = c * kChunkSize;
    const std::size_t end = std::min(begin + kChunkSize, e.size());
    detail::LaneSum s;
    for (std::size_t i = begin; i < end; ++i) s.add(i - begin, w[i] * p[i]);
    total += s.total();
  }
  return total;
}

RunResult run(WeightedEnsemble& e, const SimConfig& cfg,
              const std::function<void(const MagnetizationSample&)>& observer) {
  cfg.validate();
  if (cfg.use_symmetry != e.symmetry_reduced())
    throw InvalidParameter(cfg.use_symmetry ? "use_symmetry set but the ensemble is not symmetry-reduced"
                                            : "ensemble is symmetry-reduced but use_symmetry is off");

  const auto first = static_cast<std::size_t>(std::llround(e.time() / cfg.dt));
  const auto last = static_cast<std::size_t>(std::llround(cfg.t_end / cfg.dt));
  if (last < first) throw InvalidParameter("t_end lies before the ensemble's current time");

  RunResult result;
  result.series.spacing = cfg.dt * static_cast<double>(cfg.record_stride);
  Integrator integ(e);

  // Kinetic sums come from the pass that starts at the sampled state, so the
  // field and time must be captured before that pass moves them on.
  auto record = [&](double t, const Field& f, const ChunkSums& sums) {
    const MagnetizationSample s{t, f.mx, f.my};
    result.series.samples.push_back(s);
    result.conservation.t.push_back(t);
    result.conservation.energy.push_back(integ.energy(sums, f));
    result.conservation.momentum.push_back(integ.momentum(sums));
    if (observer) observer(s);
  };
  auto checkpoint = [&](std::size_t n) {
    try {
      write_checkpoint(cfg.checkpoint_path, e);
    } catch (const std::exception& ex) {
      throw CheckpointError(ex.what(), n);
    }
  };

  for (std::size_t n = first; n < last; ++n) {
    const bool sample = n % cfg.record_stride == 0;
    const double t = e.time();
    const Field f = integ.field();
    if (cfg.checkpoint_every > 0 && n > first && n % cfg.checkpoint_every == 0) {
      // Checkpoints hold synchronized momenta. The following pass then skips
      // the closing half kick, which leaves the trajectory bitwise unchanged.
      const ChunkSums sums = integ.synchronize(cfg.dt, sample);
      checkpoint(n);
      if (sample) record(t, f, sums);
      integ.advance(cfg.dt, false);
    } else {
      const ChunkSums sums = integ.advance(cfg.dt, sample);
      if (sample) record(t, f, sums);
    }
    ++result.steps;
  }

  const bool sample_last = last % cfg.record_stride == 0;
  const ChunkSums tail = integ.synchronize(cfg.dt, sample_last);
  if (sample_last) record(e.time(), integ.field(), tail);
  if (cfg.checkpoint_every > 0 && last > first && last % cfg.checkpoint_every == 0) checkpoint(last);
  return result;
}

}  // namespace hmf
