#include "ptrotor/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ptrotor/error.hpp"
#include "ptrotor/fit.hpp"

namespace ptrotor {

MomentumState MomentumState::localized(int truncation) {
  if (truncation < 1) throw Error(ErrorCode::InvalidParameter, "truncation must be >= 1");
  MomentumState s;
  s.amplitudes.assign(static_cast<std::size_t>(2 * truncation + 1), cplx{});
  s.amplitudes[static_cast<std::size_t>(truncation)] = 1.0;
  return s;
}

double spill_fraction(const MomentumState& state) {
  const long s = state.truncation();
  const double edge = kSpillBand * static_cast<double>(s);
  double total = 0.0;
  double outer = 0.0;
  for (long l = -s; l <= s; ++l) {
    const double p = std::norm(state.amplitudes[static_cast<std::size_t>(l + s)]);
    total += p;
    if (std::abs(static_cast<double>(l)) > edge) outer += p;
  }
  return total > 0.0 ? outer / total : 0.0;
}

KickPropagator::KickPropagator(const RotorParams& params, double quasi_momentum, double spill_tolerance)
    : params_(params),
      spill_tolerance_(spill_tolerance),
      fft_(next_power_of_two(4 * static_cast<std::size_t>(params.dimension()))) {
  const long s = params.truncation();
  free_phases_.resize(static_cast<std::size_t>(params.dimension()));
  for (long l = -s; l <= s; ++l) free_phases_[static_cast<std::size_t>(l + s)] = params.free_phase(l, quasi_momentum);

  const std::size_t grid = fft_.size();
  kick_factor_.resize(grid);
  const cplx minus_i{0.0, -1.0};
  // The 1/grid of the forward transform is folded into the kick factor.
  const double inv = 1.0 / static_cast<double>(grid);
  for (std::size_t j = 0; j < grid; ++j) {
    const double x = static_cast<double>(j) / static_cast<double>(grid);
    kick_factor_[j] = std::exp(minus_i * potential_value(x, params)) * inv;
  }
}

void KickPropagator::step(MomentumState& state) {
  const long s = params_.truncation();
  if (state.truncation() != s) throw Error(ErrorCode::InvalidParameter, "state truncation does not match propagator");
  const std::size_t grid = fft_.size();
  auto buf = fft_.data();
  std::fill(buf.begin(), buf.end(), cplx{});
  for (long l = -s; l <= s; ++l) {
    const std::size_t i = static_cast<std::size_t>(l + s);
    buf[wrap_index(l, grid)] = state.amplitudes[i] * free_phases_[i];
  }
  fft_.backward();  // psi(x_j) = sum_l psi_l e^{2 pi i l j / grid}
  for (std::size_t j = 0; j < grid; ++j) buf[j] *= kick_factor_[j];
  fft_.forward();
  for (long l = -s; l <= s; ++l) state.amplitudes[static_cast<std::size_t>(l + s)] = buf[wrap_index(l, grid)];
  ++state.kick_count;

  const double spill = spill_fraction(state);
  if (!(spill < spill_tolerance_)) {
    std::ostringstream msg;
    msg << "after kick " << state.kick_count << " a fraction " << spill << " of the norm sits in |l| > "
        << kSpillBand << " N_s (N_s = " << s << "); increase N_s";
    throw Error(ErrorCode::SpillExceeded, msg.str());
  }
}

MomentumState kick_step(const MomentumState& state, const RotorParams& params) {
  KickPropagator prop(params);
  MomentumState next = state;
  prop.step(next);
  return next;
}

ObservableSample observe(const MomentumState& state) {
  const long s = state.truncation();
  double p = 0.0, m1 = 0.0;
  for (long l = -s; l <= s; ++l) {
    const double w = std::norm(state.amplitudes[static_cast<std::size_t>(l + s)]);
    p += w;
    m1 += static_cast<double>(l) * w;
  }
  const double mean = p > 0.0 ? m1 / p : 0.0;
  double var = 0.0, raw = 0.0;
  for (long l = -s; l <= s; ++l) {
    const double w = std::norm(state.amplitudes[static_cast<std::size_t>(l + s)]);
    const double d = static_cast<double>(l) - mean;
    var += d * d * w;
    raw += static_cast<double>(l) * static_cast<double>(l) * w;
  }
  if (p > 0.0) {
    var /= p;
    raw /= p;
  }
  return {state.kick_count, p, mean, std::sqrt(var), std::sqrt(raw)};
}

const Snapshot* ObservableSeries::snapshot_at(long n) const noexcept {
  for (const Snapshot& s : snapshots) {
    if (s.n == n) return &s;
  }
  return nullptr;
}

ObservableSeries evolve(const RotorParams& params, long n_kicks, const EvolveOptions& options) {
  if (n_kicks < 0) throw Error(ErrorCode::InvalidParameter, "n_kicks must be >= 0");
  MomentumState state = options.initial ? *options.initial : MomentumState::localized(params.truncation());
  if (state.truncation() != params.truncation()) {
    throw Error(ErrorCode::InvalidParameter, "initial state truncation does not match params");
  }
  if (!(spill_fraction(state) < options.spill_tolerance)) {
    throw Error(ErrorCode::SpillExceeded, "initial state already violates the edge-spill guard");
  }
  state.kick_count = 0;

  std::vector<long> wanted = options.snapshot_kicks;
  std::sort(wanted.begin(), wanted.end());
  wanted.erase(std::unique(wanted.begin(), wanted.end()), wanted.end());

  ObservableSeries series{params, options.quasi_momentum, {}, {}};
  series.samples.reserve(static_cast<std::size_t>(n_kicks + 1));
  auto record = [&] {
    series.samples.push_back(observe(state));
    if (std::binary_search(wanted.begin(), wanted.end(), state.kick_count)) {
      Snapshot snap{state.kick_count, std::vector<double>(state.amplitudes.size()), std::nullopt};
      std::transform(state.amplitudes.begin(), state.amplitudes.end(), snap.abs2.begin(),
                     [](const cplx& c) { return std::norm(c); });
      if (options.keep_amplitudes) snap.amplitudes = state.amplitudes;
      series.snapshots.push_back(std::move(snap));
    }
  };

  record();
  if (n_kicks > 0) {
    KickPropagator prop(params, options.quasi_momentum, options.spill_tolerance);
    for (long n = 0; n < n_kicks; ++n) {
      prop.step(state);
      record();
    }
  }
  return series;
}

double spreading_exponent(const ObservableSeries& series, long n_first, long n_last) {
  if (n_first < 1 || n_last <= n_first || n_last >= static_cast<long>(series.samples.size())) {
    throw Error(ErrorCode::InvalidParameter, "fit window must satisfy 1 <= n_first < n_last <= last kick");
  }
  std::vector<double> x, y;
  double lo = INFINITY, hi = -INFINITY;
  for (long n = n_first; n <= n_last; ++n) {
    const double spread = series.samples[static_cast<std::size_t>(n)].spread;
    if (!(spread > 0.0)) throw Error(ErrorCode::DegenerateFit, "spread vanishes inside the fit window");
    x.push_back(std::log(static_cast<double>(n)));
    y.push_back(std::log(spread));
    lo = std::min(lo, spread);
    hi = std::max(hi, spread);
  }
  if (hi == lo) throw Error(ErrorCode::DegenerateFit, "spread is flat on the fit window");
  return fit_line(x, y).slope;
}

}  // namespace ptrotor
