#pragma once

#include <string_view>
#include <vector>

#include "ptrotor/dynamics.hpp"
#include "ptrotor/fft.hpp"
#include "ptrotor/model.hpp"

namespace ptrotor {

/// Periodic transverse grid centred on x = 0.
struct CavityGrid {
  double extent;       ///< metres
  std::size_t points;  ///< power of two
};

inline constexpr int kDefaultPointsPerPeriod = 128;

/// Fabry-Perot resonator with intracavity phase grating A cos(2 pi x/a) and
/// loss grating A lambda [1 - sin(2 pi x/a)]. Lengths in metres.
struct CavityConfig {
  double grating_amplitude;  ///< A, radians
  double nonhermiticity;     ///< lambda, loss-to-phase ratio
  double grating_period;     ///< a
  double wavelength;         ///< lambda_0
  double mirror_spacing;     ///< L
  double focal_length;       ///< f
  double beam_waist;         ///< w0
  CavityGrid grid;
  int round_trips;

  double beta() const noexcept { return wavelength * mirror_spacing / (grating_period * grating_period); }
  double gamma() const noexcept { return grating_amplitude * nonhermiticity; }
  double talbot_length() const noexcept { return grating_period * grating_period / wavelength; }
  double peak_spacing() const noexcept { return wavelength * focal_length / grating_period; }
  /// L / k0, the coefficient of d^2/dx^2 in the free-propagation operator.
  double diffraction_coefficient() const noexcept { return mirror_spacing * wavelength / (2.0 * kPi); }
  double dx() const noexcept { return grid.extent / static_cast<double>(grid.points); }

  /// Throws InvalidParameter on any violated invariant (positive lengths,
  /// lambda in [0, 1), extent >= 6 w0, >= 16 samples per period, power-of-two grid).
  void validate() const;
};

/// Extent = smallest power-of-two number of grating periods covering 12 w0,
/// sampled with points_per_period (a power of two) per period.
CavityGrid default_grid(double grating_period, double beam_waist, int points_per_period = kDefaultPointsPerPeriod);

/// L = beta a^2 / lambda_0.
double mirror_spacing_for_beta(double beta, double grating_period, double wavelength) noexcept;

/// "fig6" (beta = 1/(4 pi)) or "fig7" (beta = 1/12): A = 3, lambda = 1/30,
/// a = 300 um, lambda_0 = 780 nm, f = 5 cm, w0 = (100/pi) a, 20 round trips.
CavityConfig cavity_preset(std::string_view name);

struct TransverseField {
  std::vector<cplx> samples;  ///< x_j = -extent/2 + j dx
  double extent = 0.0;
  long round_trip = 0;

  double dx() const noexcept { return extent / static_cast<double>(samples.size()); }
  double x(std::size_t j) const noexcept { return -0.5 * extent + static_cast<double>(j) * dx(); }
  /// sum |psi|^2 dx
  double power() const noexcept;
};

/// psi_0(x) = exp(-x^2 / w0^2) on the configured grid.
TransverseField initial_gaussian(const CavityConfig& config);

inline constexpr double kWindowGuardBand = 0.05;
inline constexpr double kWindowGuardTolerance = 1e-8;

/// Power fraction in the outer 5% of the grid (2.5% on each side).
double window_spill(const TransverseField& field);

/// Grating-periodic test inputs fill the whole window by construction and
/// must skip the guard.
enum class WindowGuard { Enforce, Skip };

/// Reusable round-trip operator with its own FFT workspace.
class CavityPropagator {
 public:
  explicit CavityPropagator(const CavityConfig& config);

  /// Free propagation exp(i (L/k0) d^2/dx^2) applied as exp(-i (L/k0) k^2) in
  /// k-space (forward kernel e^{-ikx}), then the grating transmission
  /// exp[-i theta1 - theta2]. Throws WindowOverflow when the guard fails.
  void roundtrip(TransverseField& field, WindowGuard guard = WindowGuard::Enforce);

  /// Only the spectral free-propagation part.
  void propagate_free(TransverseField& field);

 private:
  CavityConfig config_;
  std::vector<cplx> free_factor_;
  std::vector<cplx> transmission_;
  Fft fft_;
};

TransverseField roundtrip(const TransverseField& field, const CavityConfig& config,
                          WindowGuard guard = WindowGuard::Enforce);

struct FarFieldPeak {
  long order;
  double position;  ///< X of the brightest sample inside the order's cell
  double power;     ///< intensity integrated over |X - order * spacing| < spacing / 2
};

/// Focal-plane intensity, X = (lambda_0 f / 2 pi) k_x, normalized so that
/// sum(intensity) equals the near-field power.
struct FarField {
  std::vector<double> X;
  std::vector<double> intensity;
  std::vector<FarFieldPeak> peaks;
  double spacing;
  double total_power;
  double mean_over_spacing;
  double std_over_spacing;

  const FarFieldPeak* peak(long order) const noexcept;
};

FarField far_field(const TransverseField& field, const CavityConfig& config);

struct UnitReport {
  double talbot_length;
  double beta;
  double mirror_spacing;
  double peak_spacing;
  double waist_over_period;
  double beam_waist;
};

UnitReport physical_units(const CavityConfig& config);

struct CavityTrip {
  long n;
  double power;
  double mean_over_spacing;
  double std_over_spacing;
  std::vector<FarFieldPeak> peaks;
};

struct DecayRun {
  CavityConfig config;
  std::vector<CavityTrip> trips;  ///< n = 0..round_trips
  std::vector<std::pair<long, FarField>> far_field_snapshots;
  std::vector<TransverseField> near_field_snapshots;
};

struct DecayOptions {
  std::vector<long> snapshot_trips{0, 5, 10, 20};
};

/// Launches exp(-x^2/w0^2) and records far-field moments and power every trip.
DecayRun run_decay(const CavityConfig& config, const DecayOptions& options = {});

/// Expected peak powers |psi_l(n)|^2 (before the e^{-2 gamma n} envelope).
struct RotorPowerTable {
  int truncation;
  std::vector<std::vector<double>> abs2;  ///< abs2[n][l + truncation]
  std::vector<double> centroid;           ///< <l>(n)
};

/// Takes |psi_l(n)|^2 from the series snapshots; needs one at every n.
RotorPowerTable rotor_power_table(const ObservableSeries& series, long trips);

/// Rotor powers averaged over the quasi-momentum distribution of the
/// Gaussian launch, sigma = a / (2 pi w0), by Gauss-Hermite quadrature.
RotorPowerTable bloch_averaged_rotor(const CavityConfig& config, int truncation, int nodes = 40);

struct EquivalenceOptions {
  double tolerance = 0.02;
  double min_peak_fraction = 0.01;
  double centroid_tolerance = 0.1;  ///< peak-spacing units
};

struct TripComparison {
  long n;
  std::size_t compared_peaks;
  double worst_relative_error;
  long worst_order;
  double cavity_centroid;
  double rotor_centroid;
};

struct EquivalenceReport {
  std::vector<TripComparison> trips;
  double worst_relative_error = 0.0;
  double worst_centroid_gap = 0.0;
  bool passed = false;
};

/// Peak powers normalized to the trip-0 total against |psi_l(n)|^2 e^{-2 gamma n}
/// for peaks holding more than min_peak_fraction of the trip's power, and
/// far-field centroid against <l>. Trips beyond the table raise MismatchedParams.
EquivalenceReport compare_peak_powers(const DecayRun& run, const RotorPowerTable& expected,
                                      const EquivalenceOptions& options = {});

/// Checks that (A, lambda, beta) and the trip/kick counts match, then compares
/// against the delta_{l,0} rotor. Throws MismatchedParams otherwise.
EquivalenceReport rotor_equivalence(const DecayRun& run, const ObservableSeries& rotor,
                                    const EquivalenceOptions& options = {});

/// Nodes and weights (summing to 1) for integrals against a unit normal density.
void gauss_hermite_normal(int count, std::vector<double>& nodes, std::vector<double>& weights);

}  // namespace ptrotor
