#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "ptrotor/error.hpp"
#include "ptrotor/model.hpp"

namespace ptrotor {

/// Truncated one-period propagator in momentum space,
/// U_{l,n} = W_{l-n} exp(-2 pi i beta n^2), rows/columns l, n in [-N_s, N_s]
/// stored at index l + N_s.
struct FloquetMatrix {
  RotorParams params;
  Eigen::MatrixXcd entries;

  cplx at(long l, long n) const {
    const long s = params.truncation();
    return entries(l + s, n + s);
  }
};

/// Builds U from closed-form kick coefficients with n_max = max(default band, 2 N_s).
FloquetMatrix build_floquet_matrix(const RotorParams& params);

/// Builds U from caller-supplied coefficients. Throws InsufficientCoefficients
/// when 2 N_s > coefficients.n_max().
FloquetMatrix build_floquet_matrix(const RotorParams& params, const KickCoefficients& coefficients);

/// eps T = i Log(mu) on the principal branch, Re in (-pi, pi].
cplx quasi_energy_from_eigenvalue(cplx mu) noexcept;

/// Wraps a real phase into (-pi, pi].
double wrap_phase(double phase) noexcept;

struct FloquetMode {
  cplx eps_t;
  double participation_ratio = 1.0;
  /// Mean of l under the mode density (see QuasiEnergySpectrum::density).
  double center = 0.0;
  /// Mode density carried by the outer edge_fraction band; set by filter_edge_states.
  double edge_weight = 0.0;
  bool edge_flagged = false;
  /// ||U phi - mu phi|| / ||phi||, NaN unless residuals were requested.
  double residual = std::numeric_limits<double>::quiet_NaN();

  cplx multiplier() const noexcept;  ///< mu = exp(-i eps T)
};

/// Quasi-energy spectrum of a FloquetMatrix, sorted by Re(eps T).
///
/// The mode density used for center and edge weight is the biorthogonal
/// density |u_l^* phi_l| / sum_l |u_l^* phi_l| built from the left (u) and right
/// (phi) eigenvectors. It equals |phi_l|^2 for a unitary propagator and is
/// unchanged by the imaginary gauge phi_l -> e^{y l} phi_l, so skin-localized
/// right eigenvectors of the non-Hermitian matrix are not mistaken for
/// truncation states.
struct QuasiEnergySpectrum {
  RotorParams params;
  std::vector<FloquetMode> modes;
  /// Column k: right eigenvector of modes[k] with sum |phi_l|^2 = 1 (empty unless kept).
  Eigen::MatrixXcd eigenvectors;
  /// Column k: mode density of modes[k] over l + N_s; columns sum to 1.
  Eigen::MatrixXd density;
  /// Fraction used by the last filter_edge_states call, 0 when unfiltered.
  double edge_fraction = 0.0;

  std::size_t unflagged_count() const noexcept;
};

struct SpectrumOptions {
  bool keep_eigenvectors = true;
  bool compute_residuals = false;
};

/// Throws EigenFailure if the dense eigensolver does not converge.
QuasiEnergySpectrum quasi_energy_spectrum(const FloquetMatrix& matrix, const SpectrumOptions& options = {});

/// (sum |phi|^2)^2 / sum |phi|^4. Throws ZeroVector for an all-zero input.
double participation_ratio(std::span<const cplx> eigvec);

inline constexpr double kDefaultEdgeFraction = 0.1;

/// Flags (never removes) modes with |center| > (1 - f) N_s or with more than
/// half of their density in |l| > (1 - f) N_s. Throws AllFiltered if nothing
/// survives.
QuasiEnergySpectrum filter_edge_states(QuasiEnergySpectrum spectrum, double edge_fraction = kDefaultEdgeFraction);

/// Mean |Im eps T| over unflagged modes. Throws AllFiltered when there are none.
double mean_im_quasienergy(const QuasiEnergySpectrum& spectrum);

/// Build + eigensolve + filter + mean |Im eps T| in one call (eigenvectors dropped).
double pt_detector(const RotorParams& params, double edge_fraction = kDefaultEdgeFraction);

struct DetectorSample {
  double lambda;
  double mean_abs_im;
};

enum class ThresholdStatus {
  Bracketed,              ///< a crossing was found and bisected
  BrokenAtOrigin,         ///< detector already above tolerance at the smallest probed lambda
  UnbrokenAcrossBracket,  ///< never above tolerance; lambda_pt is the 1^- sentinel
};

struct ThresholdOptions {
  double detector_tolerance = 1e-4;
  double bisection_tolerance = 1e-3;
  double scan_step = 0.1;
  double scan_max = 0.9;
  double edge_fraction = kDefaultEdgeFraction;
};

struct ThresholdResult {
  double lambda_pt;
  ThresholdStatus status;
  /// Every probed point, sorted by lambda.
  std::vector<DetectorSample> scan;
};

/// Raised when the coarse scan shows the detector dropping back below
/// tolerance after having exceeded it.
class NonMonotoneDetectorError : public Error {
 public:
  NonMonotoneDetectorError(const std::string& what, std::vector<DetectorSample> scan)
      : Error(ErrorCode::NonMonotoneDetector, what), scan_(std::move(scan)) {}
  const std::vector<DetectorSample>& scan() const noexcept { return scan_; }

 private:
  std::vector<DetectorSample> scan_;
};

/// 1^- sentinel reported when the scan never crosses the tolerance.
inline constexpr double kUnbrokenSentinel = 1.0 - std::numeric_limits<double>::epsilon() / 2;

/// Smallest lambda with mean |Im eps T| above detector_tolerance: a coarse
/// scan over [0, scan_max] followed by bisection inside the first crossing.
/// The lambda stored in `base` is ignored.
ThresholdResult pt_threshold(const RotorParams& base, const ThresholdOptions& options = {});

/// Order-of-magnitude scales: lambda < ~ 4/K^2 and xi_L ~ K^2/4.
struct ThresholdEstimate {
  double lambda_scale;
  double localization_length;
};

ThresholdEstimate estimate_threshold_small_lambda(const RotorParams& params);

/// Quasi-energy bands at rational beta = N/M: for each q in
/// [-pi/M, pi/M), eigenvalues of the M x M matrix S(q).
struct BandStructure {
  long period;  ///< M
  std::vector<double> q;
  /// bands[b][k]: b-th quasi-energy (sorted by real part) at q[k].
  std::vector<std::vector<cplx>> bands;
};

/// Throws NotCoprime for N/M with gcd > 1 and InvalidParameter when beta was
/// not supplied as a fraction.
BandStructure resonance_bands(const RotorParams& params, int q_count);

/// The M x M Bloch matrix S(q).
Eigen::MatrixXcd bloch_matrix(const RotorParams& params, const KickCoefficients& coefficients, double q);

}  // namespace ptrotor
