#pragma once

#include <optional>
#include <span>
#include <vector>

#include "ptrotor/fft.hpp"
#include "ptrotor/model.hpp"

namespace ptrotor {

/// Momentum amplitudes psi_l, l in [-N_s, N_s] (index l + N_s), after
/// kick_count kicks.
struct MomentumState {
  std::vector<cplx> amplitudes;
  long kick_count = 0;

  int truncation() const noexcept { return static_cast<int>(amplitudes.size() / 2); }
  cplx at(long l) const { return amplitudes[static_cast<std::size_t>(l + truncation())]; }

  /// delta_{l,0} on [-N_s, N_s].
  static MomentumState localized(int truncation);
};

inline constexpr double kDefaultSpillTolerance = 1e-8;
inline constexpr double kSpillBand = 0.9;

/// Fraction of sum |psi_l|^2 carried by |l| > 0.9 N_s.
double spill_fraction(const MomentumState& state);

/// Stroboscopic propagator for one kick period, applied spectrally: free
/// phases exp(-2 pi i beta l^2) in momentum space, then multiplication by
/// exp[-iV(x)/hbar] on an x-grid of size nextpow2(4 (2 N_s + 1)).
///
/// Owns its FFT workspace; use one instance per trajectory.
class KickPropagator {
 public:
  /// quasi_momentum shifts the kinetic term to beta (l + quasi_momentum)^2
  /// (Bloch sector of a non-periodic field); 0 gives the rotor.
  explicit KickPropagator(const RotorParams& params, double quasi_momentum = 0.0,
                          double spill_tolerance = kDefaultSpillTolerance);

  const RotorParams& params() const noexcept { return params_; }
  std::size_t grid_size() const noexcept { return fft_.size(); }

  /// Advances by one kick in place. No renormalization. Throws SpillExceeded
  /// when the result violates the edge-spill guard.
  void step(MomentumState& state);

 private:
  RotorParams params_;
  double spill_tolerance_;
  std::vector<cplx> free_phases_;
  std::vector<cplx> kick_factor_;
  Fft fft_;
};

/// One kick from `state` (builds a propagator; prefer KickPropagator in loops).
MomentumState kick_step(const MomentumState& state, const RotorParams& params);

struct ObservableSample {
  long n;
  double norm;        ///< P(n) = sum |psi_l|^2
  double mean_l;      ///< sum l |psi_l|^2 / P
  double spread;      ///< sqrt(sum (l - <l>)^2 |psi_l|^2 / P)
  double raw_spread;  ///< sqrt(sum l^2 |psi_l|^2 / P), no mean subtraction
};

ObservableSample observe(const MomentumState& state);

struct Snapshot {
  long n;
  std::vector<double> abs2;  ///< |psi_l|^2 over l + N_s
  std::optional<std::vector<cplx>> amplitudes;
};

struct ObservableSeries {
  RotorParams params;
  double quasi_momentum = 0.0;
  std::vector<ObservableSample> samples;  ///< samples[n] for n = 0..n_kicks
  std::vector<Snapshot> snapshots;

  const Snapshot* snapshot_at(long n) const noexcept;
};

inline const std::vector<long> kDefaultSnapshotKicks{0, 5, 10, 20, 50, 100, 500, 1000};

struct EvolveOptions {
  std::vector<long> snapshot_kicks = kDefaultSnapshotKicks;
  bool keep_amplitudes = false;
  std::optional<MomentumState> initial;  ///< defaults to delta_{l,0}
  double quasi_momentum = 0.0;
  double spill_tolerance = kDefaultSpillTolerance;
};

/// Iterates the kick map n_kicks times recording observables after every kick.
ObservableSeries evolve(const RotorParams& params, long n_kicks, const EvolveOptions& options = {});

/// Least-squares slope of log <Delta l> against log n over n in [n_first, n_last].
/// Throws DegenerateFit for a flat or vanishing spread.
double spreading_exponent(const ObservableSeries& series, long n_first, long n_last);

}  // namespace ptrotor
