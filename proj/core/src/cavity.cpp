#include "ptrotor/cavity.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "ptrotor/error.hpp"

namespace ptrotor {
namespace {

bool positive_finite(double v) { return std::isfinite(v) && v > 0.0; }

bool is_power_of_two(std::size_t n) { return n >= 2 && (n & (n - 1)) == 0; }

double spatial_frequency(std::size_t index, std::size_t points, double extent) {
  const long n = static_cast<long>(points);
  long m = static_cast<long>(index);
  if (m >= n / 2) m -= n;
  return 2.0 * kPi * static_cast<double>(m) / extent;
}

void check_window(const TransverseField& field, const char* stage) {
  const double spill = window_spill(field);
  if (!(spill < kWindowGuardTolerance)) {
    std::ostringstream msg;
    msg << stage << " round trip " << field.round_trip << ": fraction " << spill
        << " of the power lies in the outer " << kWindowGuardBand * 100.0 << "% of the grid; enlarge the extent";
    throw Error(ErrorCode::WindowOverflow, msg.str());
  }
}

bool close(double a, double b, double rel) { return std::abs(a - b) <= rel * std::max({1.0, std::abs(a), std::abs(b)}); }

}  // namespace

void CavityConfig::validate() const {
  auto fail = [](const std::string& what) { throw Error(ErrorCode::InvalidParameter, what); };
  if (!std::isfinite(grating_amplitude) || grating_amplitude < 0.0) fail("grating amplitude A must be finite and >= 0");
  if (!(nonhermiticity >= 0.0 && nonhermiticity < 1.0)) fail("lambda must lie in [0, 1)");
  if (!positive_finite(grating_period)) fail("grating period must be positive");
  if (!positive_finite(wavelength)) fail("wavelength must be positive");
  if (!positive_finite(mirror_spacing)) fail("mirror spacing must be positive");
  if (!positive_finite(focal_length)) fail("focal length must be positive");
  if (!positive_finite(beam_waist)) fail("beam waist must be positive");
  if (!positive_finite(grid.extent)) fail("grid extent must be positive");
  if (!is_power_of_two(grid.points)) fail("grid points must be a power of two");
  if (grid.extent < 6.0 * beam_waist) fail("grid extent must be at least 6 w0");
  if (static_cast<double>(grid.points) * grating_period / grid.extent < 16.0) {
    fail("grid must resolve a grating period with at least 16 points");
  }
  if (round_trips < 0) fail("round_trips must be >= 0");
}

CavityGrid default_grid(double grating_period, double beam_waist, int points_per_period) {
  if (!positive_finite(grating_period) || !positive_finite(beam_waist)) {
    throw Error(ErrorCode::InvalidParameter, "grid needs positive period and waist");
  }
  if (points_per_period < 16 || !is_power_of_two(static_cast<std::size_t>(points_per_period))) {
    throw Error(ErrorCode::InvalidParameter, "points per period must be a power of two >= 16");
  }
  const auto periods = next_power_of_two(static_cast<std::size_t>(std::ceil(12.0 * beam_waist / grating_period)));
  return {static_cast<double>(periods) * grating_period, periods * static_cast<std::size_t>(points_per_period)};
}

double mirror_spacing_for_beta(double beta, double grating_period, double wavelength) noexcept {
  return beta * grating_period * grating_period / wavelength;
}

CavityConfig cavity_preset(std::string_view name) {
  double beta = 0.0;
  if (name == "fig6") {
    beta = 1.0 / (4.0 * kPi);
  } else if (name == "fig7") {
    beta = 1.0 / 12.0;
  } else {
    throw Error(ErrorCode::InvalidParameter, "unknown cavity preset '" + std::string(name) + "'");
  }
  const double a = 300e-6;
  const double lambda0 = 780e-9;
  const double w0 = 100.0 / kPi * a;
  return {3.0, 1.0 / 30.0, a, lambda0, mirror_spacing_for_beta(beta, a, lambda0), 0.05, w0, default_grid(a, w0), 20};
}

double TransverseField::power() const noexcept {
  double s = 0.0;
  for (const cplx& c : samples) s += std::norm(c);
  return s * dx();
}

TransverseField initial_gaussian(const CavityConfig& config) {
  config.validate();
  TransverseField f{std::vector<cplx>(config.grid.points), config.grid.extent, 0};
  const double w2 = config.beam_waist * config.beam_waist;
  for (std::size_t j = 0; j < f.samples.size(); ++j) {
    const double x = f.x(j);
    f.samples[j] = std::exp(-x * x / w2);
  }
  return f;
}

double window_spill(const TransverseField& field) {
  const std::size_t n = field.samples.size();
  const auto edge = static_cast<std::size_t>(std::ceil(0.5 * kWindowGuardBand * static_cast<double>(n)));
  double total = 0.0, outer = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double p = std::norm(field.samples[j]);
    total += p;
    if (j < edge || j >= n - edge) outer += p;
  }
  return total > 0.0 ? outer / total : 0.0;
}

CavityPropagator::CavityPropagator(const CavityConfig& config) : config_(config), fft_(config.grid.points) {
  config_.validate();
  const std::size_t n = config_.grid.points;
  const double d = config_.diffraction_coefficient();
  const double inv = 1.0 / static_cast<double>(n);
  free_factor_.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double k = spatial_frequency(j, n, config_.grid.extent);
    free_factor_[j] = std::polar(inv, -d * k * k);
  }
  // theta1 = A cos(2 pi x/a), theta2 = A lambda [1 - sin(2 pi x/a)]
  const double A = config_.grating_amplitude;
  const double lam = config_.nonhermiticity;
  const double dx = config_.dx();
  transmission_.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double phase = 2.0 * kPi * (-0.5 * config_.grid.extent + static_cast<double>(j) * dx) / config_.grating_period;
    const double theta1 = A * std::cos(phase);
    const double theta2 = A * lam * (1.0 - std::sin(phase));
    transmission_[j] = std::polar(std::exp(-theta2), -theta1);
  }
}

void CavityPropagator::propagate_free(TransverseField& field) {
  if (field.samples.size() != config_.grid.points) {
    throw Error(ErrorCode::InvalidParameter, "field grid does not match the cavity grid");
  }
  auto buf = fft_.data();
  std::copy(field.samples.begin(), field.samples.end(), buf.begin());
  fft_.forward();
  for (std::size_t j = 0; j < buf.size(); ++j) buf[j] *= free_factor_[j];
  fft_.backward();
  std::copy(buf.begin(), buf.end(), field.samples.begin());
}

void CavityPropagator::roundtrip(TransverseField& field, WindowGuard guard) {
  const bool enforce = guard == WindowGuard::Enforce;
  if (enforce) check_window(field, "before");
  propagate_free(field);
  for (std::size_t j = 0; j < field.samples.size(); ++j) field.samples[j] *= transmission_[j];
  ++field.round_trip;
  if (enforce) check_window(field, "after");
}

TransverseField roundtrip(const TransverseField& field, const CavityConfig& config, WindowGuard guard) {
  CavityPropagator prop(config);
  TransverseField next = field;
  prop.roundtrip(next, guard);
  return next;
}

const FarFieldPeak* FarField::peak(long order) const noexcept {
  if (peaks.empty()) return nullptr;
  const long i = order - peaks.front().order;
  if (i < 0 || i >= static_cast<long>(peaks.size())) return nullptr;
  return &peaks[static_cast<std::size_t>(i)];
}

FarField far_field(const TransverseField& field, const CavityConfig& config) {
  const std::size_t n = field.samples.size();
  if (n < 2) throw Error(ErrorCode::InvalidParameter, "field has no samples");
  Fft fft(n);
  auto buf = fft.data();
  std::copy(field.samples.begin(), field.samples.end(), buf.begin());
  fft.forward();

  FarField ff;
  ff.spacing = config.peak_spacing();
  ff.X.resize(n);
  ff.intensity.resize(n);
  // Scaled so that sum_m I_m = sum_j |psi_j|^2 dx.
  const double scale = field.dx() / static_cast<double>(n);
  const double dX = config.wavelength * config.focal_length / field.extent;
  const long half = static_cast<long>(n / 2);
  for (long m = -half; m < half; ++m) {
    const auto i = static_cast<std::size_t>(m + half);
    ff.X[i] = dX * static_cast<double>(m);
    ff.intensity[i] = std::norm(buf[wrap_index(m, n)]) * scale;
  }

  // Bins per order; each bin belongs to the nearest multiple of the spacing.
  const double per_order = field.extent / config.grating_period;
  const long lo = std::lround(static_cast<double>(-half) / per_order);
  const long hi = std::lround(static_cast<double>(half - 1) / per_order);
  ff.peaks.resize(static_cast<std::size_t>(hi - lo + 1));
  std::vector<double> brightest(ff.peaks.size(), -1.0);
  for (long l = lo; l <= hi; ++l) ff.peaks[static_cast<std::size_t>(l - lo)] = {l, static_cast<double>(l) * ff.spacing, 0.0};

  double total = 0.0, m1 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double I = ff.intensity[i];
    total += I;
    m1 += ff.X[i] * I;
    const long l = std::lround(ff.X[i] / ff.spacing);
    const auto k = static_cast<std::size_t>(l - lo);
    ff.peaks[k].power += I;
    if (I > brightest[k]) {
      brightest[k] = I;
      ff.peaks[k].position = ff.X[i];
    }
  }
  ff.total_power = total;
  const double mean = total > 0.0 ? m1 / total : 0.0;
  double var = 0.0;
  for (std::size_t i = 0; i < n; ++i) var += (ff.X[i] - mean) * (ff.X[i] - mean) * ff.intensity[i];
  if (total > 0.0) var /= total;
  ff.mean_over_spacing = mean / ff.spacing;
  ff.std_over_spacing = std::sqrt(var) / ff.spacing;
  return ff;
}

UnitReport physical_units(const CavityConfig& config) {
  if (!positive_finite(config.grating_period) || !positive_finite(config.wavelength) ||
      !positive_finite(config.mirror_spacing) || !positive_finite(config.focal_length) ||
      !positive_finite(config.beam_waist)) {
    throw Error(ErrorCode::InvalidParameter, "physical units need positive lengths");
  }
  return {config.talbot_length(), config.beta(),       config.mirror_spacing, config.peak_spacing(),
          config.beam_waist / config.grating_period, config.beam_waist};
}

DecayRun run_decay(const CavityConfig& config, const DecayOptions& options) {
  config.validate();
  std::vector<long> wanted = options.snapshot_trips;
  std::sort(wanted.begin(), wanted.end());
  wanted.erase(std::unique(wanted.begin(), wanted.end()), wanted.end());

  DecayRun run{config, {}, {}, {}};
  run.trips.reserve(static_cast<std::size_t>(config.round_trips + 1));
  TransverseField field = initial_gaussian(config);
  check_window(field, "initial");

  auto record = [&] {
    FarField ff = far_field(field, config);
    run.trips.push_back({field.round_trip, field.power(), ff.mean_over_spacing, ff.std_over_spacing, ff.peaks});
    if (std::binary_search(wanted.begin(), wanted.end(), field.round_trip)) {
      run.near_field_snapshots.push_back(field);
      run.far_field_snapshots.emplace_back(field.round_trip, std::move(ff));
    }
  };

  record();
  CavityPropagator prop(config);
  for (int n = 0; n < config.round_trips; ++n) {
    prop.roundtrip(field);
    record();
  }
  return run;
}

RotorPowerTable rotor_power_table(const ObservableSeries& series, long trips) {
  if (trips < 0 || static_cast<long>(series.samples.size()) <= trips) {
    throw Error(ErrorCode::MismatchedParams, "rotor series is shorter than the cavity run");
  }
  RotorPowerTable table{series.params.truncation(), {}, {}};
  for (long n = 0; n <= trips; ++n) {
    const Snapshot* snap = series.snapshot_at(n);
    if (snap == nullptr) {
      std::ostringstream msg;
      msg << "rotor series has no snapshot at kick " << n;
      throw Error(ErrorCode::MismatchedParams, msg.str());
    }
    table.abs2.push_back(snap->abs2);
    table.centroid.push_back(series.samples[static_cast<std::size_t>(n)].mean_l);
  }
  return table;
}

void gauss_hermite_normal(int count, std::vector<double>& nodes, std::vector<double>& weights) {
  if (count < 1) throw Error(ErrorCode::InvalidParameter, "quadrature needs at least one node");
  // Golub-Welsch on the Jacobi matrix of the probabilists' Hermite polynomials.
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(count, count);
  for (int k = 1; k < count; ++k) jacobi(k, k - 1) = jacobi(k - 1, k) = std::sqrt(static_cast<double>(k));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jacobi);
  if (solver.info() != Eigen::Success) throw Error(ErrorCode::EigenFailure, "Jacobi matrix eigensolve failed");
  nodes.resize(static_cast<std::size_t>(count));
  weights.resize(static_cast<std::size_t>(count));
  double sum = 0.0;
  for (int i = 0; i < count; ++i) {
    nodes[static_cast<std::size_t>(i)] = solver.eigenvalues()(i);
    const double v = solver.eigenvectors()(0, i);
    weights[static_cast<std::size_t>(i)] = v * v;
    sum += v * v;
  }
  for (double& w : weights) w /= sum;
}

RotorPowerTable bloch_averaged_rotor(const CavityConfig& config, int truncation, int nodes) {
  config.validate();
  std::vector<double> z, w;
  gauss_hermite_normal(nodes, z, w);
  const double sigma = config.grating_period / (2.0 * kPi * config.beam_waist);
  const RotorParams params(config.grating_amplitude, config.nonhermiticity, config.beta(), truncation);
  const long trips = config.round_trips;

  EvolveOptions opts;
  opts.snapshot_kicks.clear();
  for (long n = 0; n <= trips; ++n) opts.snapshot_kicks.push_back(n);

  const auto dim = static_cast<std::size_t>(params.dimension());
  RotorPowerTable table{truncation, std::vector<std::vector<double>>(static_cast<std::size_t>(trips + 1), std::vector<double>(dim)), {}};
  for (std::size_t k = 0; k < z.size(); ++k) {
    opts.quasi_momentum = sigma * z[k];
    const ObservableSeries series = evolve(params, trips, opts);
    for (const Snapshot& snap : series.snapshots) {
      auto& row = table.abs2[static_cast<std::size_t>(snap.n)];
      for (std::size_t i = 0; i < dim; ++i) row[i] += w[k] * snap.abs2[i];
    }
  }
  for (const auto& row : table.abs2) {
    double p = 0.0, m1 = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
      p += row[i];
      m1 += (static_cast<double>(i) - truncation) * row[i];
    }
    table.centroid.push_back(p > 0.0 ? m1 / p : 0.0);
  }
  return table;
}

EquivalenceReport compare_peak_powers(const DecayRun& run, const RotorPowerTable& expected,
                                      const EquivalenceOptions& options) {
  if (run.trips.empty()) throw Error(ErrorCode::MismatchedParams, "cavity run has no trips");
  if (expected.abs2.size() < run.trips.size() || expected.centroid.size() < run.trips.size()) {
    throw Error(ErrorCode::MismatchedParams, "rotor table covers fewer kicks than the cavity run has trips");
  }
  const double total0 = run.trips.front().power;
  const double gamma = run.config.gamma();
  const long s = expected.truncation;

  EquivalenceReport report;
  for (const CavityTrip& trip : run.trips) {
    const auto n = static_cast<std::size_t>(trip.n);
    const double envelope = std::exp(-2.0 * gamma * static_cast<double>(trip.n));
    TripComparison cmp{trip.n, 0, 0.0, 0, trip.mean_over_spacing, expected.centroid[n]};
    for (const FarFieldPeak& peak : trip.peaks) {
      if (!(peak.power > options.min_peak_fraction * trip.power)) continue;
      const double rotor = (peak.order < -s || peak.order > s)
                               ? 0.0
                               : expected.abs2[n][static_cast<std::size_t>(peak.order + s)] * envelope;
      const double cavity = peak.power / total0;
      const double err = rotor > 0.0 ? std::abs(cavity - rotor) / rotor : INFINITY;
      ++cmp.compared_peaks;
      if (err > cmp.worst_relative_error) {
        cmp.worst_relative_error = err;
        cmp.worst_order = peak.order;
      }
    }
    report.worst_relative_error = std::max(report.worst_relative_error, cmp.worst_relative_error);
    report.worst_centroid_gap = std::max(report.worst_centroid_gap, std::abs(cmp.cavity_centroid - cmp.rotor_centroid));
    report.trips.push_back(cmp);
  }
  report.passed =
      report.worst_relative_error <= options.tolerance && report.worst_centroid_gap <= options.centroid_tolerance;
  return report;
}

EquivalenceReport rotor_equivalence(const DecayRun& run, const ObservableSeries& rotor,
                                    const EquivalenceOptions& options) {
  const CavityConfig& c = run.config;
  const RotorParams& p = rotor.params;
  std::ostringstream msg;
  if (!close(p.kick_strength(), c.grating_amplitude, 1e-12)) msg << "K = " << p.kick_strength() << " vs A = " << c.grating_amplitude << "; ";
  if (!close(p.nonhermiticity(), c.nonhermiticity, 1e-12)) msg << "lambda " << p.nonhermiticity() << " vs " << c.nonhermiticity << "; ";
  if (!close(p.raw_beta(), c.beta(), 1e-9)) msg << "beta " << p.raw_beta() << " vs lambda0 L / a^2 = " << c.beta() << "; ";
  if (rotor.quasi_momentum != 0.0) msg << "rotor run is not in the periodic sector; ";
  if (static_cast<long>(rotor.samples.size()) != c.round_trips + 1) {
    msg << "kicks " << static_cast<long>(rotor.samples.size()) - 1 << " vs trips " << c.round_trips << "; ";
  }
  if (!msg.str().empty()) throw Error(ErrorCode::MismatchedParams, msg.str());
  return compare_peak_powers(run, rotor_power_table(rotor, c.round_trips), options);
}

}  // namespace ptrotor
