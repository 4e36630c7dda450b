#include "ptrotor/floquet.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "ptrotor/eigensolve.hpp"

namespace ptrotor {

FloquetMatrix build_floquet_matrix(const RotorParams& params) {
  const int n_max = std::max(default_coefficient_band(params), 2 * params.truncation());
  return build_floquet_matrix(params, kick_coefficients_bessel(params, n_max));
}

FloquetMatrix build_floquet_matrix(const RotorParams& params, const KickCoefficients& coefficients) {
  const long s = params.truncation();
  if (2 * s > coefficients.n_max()) {
    std::ostringstream msg;
    msg << "2 N_s = " << 2 * s << " exceeds n_max = " << coefficients.n_max();
    throw Error(ErrorCode::InsufficientCoefficients, msg.str());
  }
  const Eigen::Index dim = params.dimension();
  FloquetMatrix out{params, Eigen::MatrixXcd(dim, dim)};
  for (long n = -s; n <= s; ++n) {
    const cplx phase = params.free_phase(n);
    for (long l = -s; l <= s; ++l) out.entries(l + s, n + s) = coefficients[l - n] * phase;
  }
  return out;
}

double wrap_phase(double phase) noexcept {
  double r = std::remainder(phase, 2.0 * kPi);  // [-pi, pi]
  if (r <= -kPi) r += 2.0 * kPi;
  return r;
}

cplx quasi_energy_from_eigenvalue(cplx mu) noexcept {
  // i Log mu = -arg(mu) + i ln|mu|
  return {wrap_phase(-std::arg(mu)), std::log(std::abs(mu))};
}

cplx FloquetMode::multiplier() const noexcept { return std::exp(cplx{0.0, -1.0} * eps_t); }

std::size_t QuasiEnergySpectrum::unflagged_count() const noexcept {
  return static_cast<std::size_t>(
      std::count_if(modes.begin(), modes.end(), [](const FloquetMode& m) { return !m.edge_flagged; }));
}

double participation_ratio(std::span<const cplx> eigvec) {
  double s2 = 0.0;
  double s4 = 0.0;
  for (const cplx& c : eigvec) {
    const double p = std::norm(c);
    s2 += p;
    s4 += p * p;
  }
  if (s4 == 0.0) throw Error(ErrorCode::ZeroVector, "participation ratio of a zero vector");
  return s2 * s2 / s4;
}

QuasiEnergySpectrum quasi_energy_spectrum(const FloquetMatrix& matrix, const SpectrumOptions& options) {
  const Eigen::Index dim = matrix.entries.rows();
  const long s = matrix.params.truncation();
  EigenDecomposition eig = eigen_decompose(matrix.entries, EigenvectorSides::Both);

  std::vector<Eigen::Index> order(static_cast<std::size_t>(dim));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::vector<cplx> eps(static_cast<std::size_t>(dim));
  for (Eigen::Index k = 0; k < dim; ++k) eps[static_cast<std::size_t>(k)] = quasi_energy_from_eigenvalue(eig.values(k));
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    return eps[static_cast<std::size_t>(a)].real() < eps[static_cast<std::size_t>(b)].real();
  });

  QuasiEnergySpectrum out{matrix.params, {}, {}, Eigen::MatrixXd(dim, dim), 0.0};
  out.modes.resize(static_cast<std::size_t>(dim));
  if (options.keep_eigenvectors) out.eigenvectors.resize(dim, dim);

  Eigen::MatrixXcd residual_block;
  if (options.compute_residuals) {
    residual_block = matrix.entries * eig.right - eig.right * eig.values.asDiagonal();
  }

  for (Eigen::Index k = 0; k < dim; ++k) {
    const Eigen::Index src = order[static_cast<std::size_t>(k)];
    FloquetMode& mode = out.modes[static_cast<std::size_t>(k)];
    mode.eps_t = eps[static_cast<std::size_t>(src)];

    auto right = eig.right.col(src);
    const double norm = right.norm();
    if (options.keep_eigenvectors) out.eigenvectors.col(k) = right / norm;
    mode.participation_ratio = participation_ratio({right.data(), static_cast<std::size_t>(dim)});
    if (options.compute_residuals) mode.residual = residual_block.col(src).norm() / norm;

    auto rho = out.density.col(k);
    for (Eigen::Index i = 0; i < dim; ++i) rho(i) = std::abs(std::conj(eig.left(i, src)) * right(i));
    double total = rho.sum();
    if (!(total > 0.0) || !std::isfinite(total)) {
      for (Eigen::Index i = 0; i < dim; ++i) rho(i) = std::norm(right(i));
      total = rho.sum();
    }
    rho /= total;
    double center = 0.0;
    for (Eigen::Index i = 0; i < dim; ++i) center += static_cast<double>(i - s) * rho(i);
    mode.center = center;
  }
  return out;
}

QuasiEnergySpectrum filter_edge_states(QuasiEnergySpectrum spectrum, double edge_fraction) {
  if (!(edge_fraction > 0.0 && edge_fraction < 1.0)) {
    throw Error(ErrorCode::InvalidParameter, "edge_fraction must lie in (0, 1)");
  }
  const long s = spectrum.params.truncation();
  const double inner = (1.0 - edge_fraction) * static_cast<double>(s);
  const Eigen::Index dim = spectrum.density.rows();
  for (std::size_t k = 0; k < spectrum.modes.size(); ++k) {
    FloquetMode& mode = spectrum.modes[k];
    double outer = 0.0;
    for (Eigen::Index i = 0; i < dim; ++i) {
      if (std::abs(static_cast<double>(i - s)) > inner) outer += spectrum.density(i, static_cast<Eigen::Index>(k));
    }
    mode.edge_weight = outer;
    mode.edge_flagged = std::abs(mode.center) > inner || outer > 0.5;
  }
  spectrum.edge_fraction = edge_fraction;
  if (spectrum.unflagged_count() == 0) {
    std::ostringstream msg;
    msg << "all " << spectrum.modes.size() << " modes flagged as edge states; increase N_s";
    throw Error(ErrorCode::AllFiltered, msg.str());
  }
  return spectrum;
}

double mean_im_quasienergy(const QuasiEnergySpectrum& spectrum) {
  double sum = 0.0;
  std::size_t count = 0;
  for (const FloquetMode& m : spectrum.modes) {
    if (m.edge_flagged) continue;
    sum += std::abs(m.eps_t.imag());
    ++count;
  }
  if (count == 0) throw Error(ErrorCode::AllFiltered, "no unflagged modes to average");
  return sum / static_cast<double>(count);
}

double pt_detector(const RotorParams& params, double edge_fraction) {
  const FloquetMatrix u = build_floquet_matrix(params);
  QuasiEnergySpectrum spec = quasi_energy_spectrum(u, {.keep_eigenvectors = false});
  return mean_im_quasienergy(filter_edge_states(std::move(spec), edge_fraction));
}

ThresholdResult pt_threshold(const RotorParams& base, const ThresholdOptions& options) {
  if (!(options.scan_step > 0.0) || !(options.scan_max > 0.0 && options.scan_max < 1.0) ||
      !(options.bisection_tolerance > 0.0) || !(options.detector_tolerance > 0.0)) {
    throw Error(ErrorCode::InvalidParameter, "threshold options out of range");
  }
  const double eta = options.detector_tolerance;
  auto probe = [&](double lambda) {
    return DetectorSample{lambda, pt_detector(base.with_nonhermiticity(lambda), options.edge_fraction)};
  };

  std::vector<DetectorSample> scan;
  const int steps = static_cast<int>(std::floor(options.scan_max / options.scan_step + 1e-9));
  for (int k = 0; k <= steps; ++k) scan.push_back(probe(k * options.scan_step));

  std::size_t first = scan.size();
  for (std::size_t k = 0; k < scan.size(); ++k) {
    if (scan[k].mean_abs_im > eta) {
      first = k;
      break;
    }
  }
  for (std::size_t k = first; k < scan.size(); ++k) {
    if (scan[k].mean_abs_im <= eta) {
      std::ostringstream msg;
      msg << "detector exceeds " << eta << " at lambda = " << scan[first].lambda << " but falls to "
          << scan[k].mean_abs_im << " at lambda = " << scan[k].lambda;
      throw NonMonotoneDetectorError(msg.str(), std::move(scan));
    }
  }

  if (first == scan.size()) return {kUnbrokenSentinel, ThresholdStatus::UnbrokenAcrossBracket, std::move(scan)};
  if (first == 0) return {scan.front().lambda, ThresholdStatus::BrokenAtOrigin, std::move(scan)};

  double lo = scan[first - 1].lambda;
  double hi = scan[first].lambda;
  while (hi - lo > options.bisection_tolerance) {
    const DetectorSample mid = probe(0.5 * (lo + hi));
    scan.push_back(mid);
    (mid.mean_abs_im > eta ? hi : lo) = mid.lambda;
  }
  std::sort(scan.begin(), scan.end(), [](const DetectorSample& a, const DetectorSample& b) { return a.lambda < b.lambda; });
  return {hi, ThresholdStatus::Bracketed, std::move(scan)};
}

ThresholdEstimate estimate_threshold_small_lambda(const RotorParams& params) {
  const double k = params.kick_strength();
  return {4.0 / (k * k), k * k / 4.0};
}

Eigen::MatrixXcd bloch_matrix(const RotorParams& params, const KickCoefficients& coefficients, double q) {
  const auto& rational = params.rational_beta();
  if (!rational) throw Error(ErrorCode::InvalidParameter, "bloch_matrix needs a rational beta");
  const long m = rational->den;
  const long n_max = coefficients.n_max();
  Eigen::MatrixXcd s = Eigen::MatrixXcd::Zero(m, m);
  for (long n = 0; n < m; ++n) {
    const cplx phase = params.free_phase(n);
    for (long l = 0; l < m; ++l) {
      // d = l - alpha M - n over the resolved band |d| <= n_max
      cplx acc{};
      const long base = l - n;
      const long alpha_lo = static_cast<long>(std::ceil(static_cast<double>(base - n_max) / static_cast<double>(m)));
      const long alpha_hi = static_cast<long>(std::floor(static_cast<double>(base + n_max) / static_cast<double>(m)));
      for (long alpha = alpha_lo; alpha <= alpha_hi; ++alpha) {
        const long d = base - alpha * m;
        acc += coefficients[d] * std::polar(1.0, -q * static_cast<double>(d));
      }
      s(l, n) = acc * phase;
    }
  }
  return s;
}

BandStructure resonance_bands(const RotorParams& params, int q_count) {
  const auto& raw = params.raw_rational_beta();
  if (!raw) throw Error(ErrorCode::InvalidParameter, "resonance bands need beta given as N/M");
  if (raw->num < 1 || gcd(raw->num, raw->den) != 1) {
    std::ostringstream msg;
    msg << "beta = " << raw->num << "/" << raw->den << " is not a reduced fraction with N >= 1";
    throw Error(ErrorCode::NotCoprime, msg.str());
  }
  if (q_count < 1) throw Error(ErrorCode::InvalidParameter, "q_count must be >= 1");

  const long m = params.rational_beta()->den;
  int n_max = default_coefficient_band(params);
  KickCoefficients w = [&] {
    for (;;) {
      try {
        return kick_coefficients_bessel(params, n_max);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::TailNotDecayed || n_max > (1 << 20)) throw;
        n_max *= 2;
      }
    }
  }();

  BandStructure out{m, std::vector<double>(static_cast<std::size_t>(q_count)),
                    std::vector<std::vector<cplx>>(static_cast<std::size_t>(m),
                                                   std::vector<cplx>(static_cast<std::size_t>(q_count)))};
  const double width = 2.0 * kPi / static_cast<double>(m);
  for (int k = 0; k < q_count; ++k) {
    const double q = -kPi / static_cast<double>(m) + width * static_cast<double>(k) / static_cast<double>(q_count);
    out.q[static_cast<std::size_t>(k)] = q;
    EigenDecomposition eig = eigen_decompose(bloch_matrix(params, w, q), EigenvectorSides::None);
    std::vector<cplx> eps(static_cast<std::size_t>(m));
    for (long b = 0; b < m; ++b) eps[static_cast<std::size_t>(b)] = quasi_energy_from_eigenvalue(eig.values(b));
    std::sort(eps.begin(), eps.end(), [](cplx a, cplx b) { return a.real() < b.real(); });
    for (long b = 0; b < m; ++b) out.bands[static_cast<std::size_t>(b)][static_cast<std::size_t>(k)] = eps[static_cast<std::size_t>(b)];
  }
  return out;
}

}  // namespace ptrotor
