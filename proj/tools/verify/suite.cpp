#include "suite.hpp"

#include <algorithm>
#include <boost/math/special_functions/bessel.hpp>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <optional>
#include <sstream>

#include "ptrotor/cavity.hpp"
#include "ptrotor/dynamics.hpp"
#include "ptrotor/error.hpp"
#include "ptrotor/fit.hpp"
#include "ptrotor/floquet.hpp"
#include "ptrotor/resonance.hpp"

namespace ptrotor::verify {
namespace {

std::string fmt(double v, int digits = 4) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

// J_n(x) from the ascending series, in long double. Adequate for x <= 10.
long double bessel_series(long n, long double x) {
  const bool odd_negative = n < 0 && (-n) % 2 == 1;
  n = std::labs(n);
  if (x == 0.0L) return n == 0 ? 1.0L : 0.0L;
  const long double half = x / 2.0L;
  const long double q = half * half;
  long double term = 1.0L, sum = 1.0L;
  for (long k = 1; k < 400; ++k) {
    term *= -q / (static_cast<long double>(k) * static_cast<long double>(n + k));
    sum += term;
    if (std::fabs(term) < 1e-21L * std::fabs(sum)) break;
  }
  const long double value = std::exp(static_cast<long double>(n) * std::log(half) - std::lgamma(static_cast<long double>(n) + 1.0L)) * sum;
  return odd_negative ? -value : value;
}

// (-i)^n
cplx minus_i_power(long n) {
  switch (((n % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, -1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, 1.0};
  }
}

double distance_to_antiresonance(cplx eps) {
  return std::min({std::abs(eps), std::abs(eps - kPi), std::abs(eps + kPi)});
}

std::vector<long> every_kick(long n) {
  std::vector<long> v(static_cast<std::size_t>(n + 1));
  for (long k = 0; k <= n; ++k) v[static_cast<std::size_t>(k)] = k;
  return v;
}

double fit_slope(const ObservableSeries& s, long lo, long hi, double (*f)(const ObservableSample&)) {
  std::vector<double> x, y;
  for (long n = lo; n <= hi; ++n) {
    x.push_back(static_cast<double>(n));
    y.push_back(f(s.samples[static_cast<std::size_t>(n)]));
  }
  return fit_line(x, y).slope;
}

double log_norm(const ObservableSample& o) { return std::log(o.norm); }
double mean_l(const ObservableSample& o) { return o.mean_l; }

// Shared heavy runs, computed once per process.

struct ThresholdPair {
  ThresholdResult coarse;  // N_s = 500
  ThresholdResult fine;    // N_s = 1000
};

const ThresholdPair& fig1a_thresholds() {
  static const ThresholdPair pair = [] {
    const RotorParams base(3.0, 0.0, 0.7 / (2.0 * kPi), 500);
    return ThresholdPair{pt_threshold(base), pt_threshold(base.with_truncation(1000))};
  }();
  return pair;
}

constexpr int kRatchetTruncation = 9000;  // 3 v_g n at n = 1000

const ObservableSeries& main_resonance_series(double lambda) {
  static std::optional<ObservableSeries> hermitian, pt;
  auto& slot = lambda == 0.0 ? hermitian : pt;
  if (!slot) {
    EvolveOptions opts;
    opts.snapshot_kicks = {};
    slot = evolve(RotorParams(3.0, lambda, Rational{1, 1}, kRatchetTruncation), 1000, opts);
  }
  return *slot;
}

// C01 / C11

Outcome threshold_reproduction() {
  const auto& t = fig1a_thresholds();
  auto near = [](const ThresholdResult& r) {
    return r.status == ThresholdStatus::Bracketed && std::abs(r.lambda_pt - 0.27) <= 0.05;
  };
  const bool in_range = near(t.coarse) && near(t.fine);
  return {in_range, "lambda_PT(N_s=500) = " + fmt(t.coarse.lambda_pt) + ", lambda_PT(N_s=1000) = " +
                        fmt(t.fine.lambda_pt) + ", target 0.27 +- 0.05"};
}

Outcome truncation_convergence() {
  const auto& t = fig1a_thresholds();
  const double gap = std::abs(t.coarse.lambda_pt - t.fine.lambda_pt);
  return {gap < 0.02, "|lambda_PT(500) - lambda_PT(1000)| = " + fmt(gap, 3) + " (limit 0.02)"};
}

// C02

Outcome broken_at_resonance() {
  const RotorParams p(3.0, 0.05, Rational{1, 12}, 800);
  const double d = pt_detector(p);
  return {d > 1e-3, "beta = 1/12, lambda = 0.05, N_s = 800: mean |Im epsT| = " + fmt(d, 3) + " (needs > 1e-3)"};
}

// C03

Outcome antiresonance() {
  double worst_eps = 0.0, worst_revival = 0.0;
  std::size_t kept_min = SIZE_MAX;
  for (double lambda : {0.0, 0.3, 0.9}) {
    const RotorParams p(3.0, lambda, Rational{1, 2}, 100);
    const auto spectrum = filter_edge_states(quasi_energy_spectrum(build_floquet_matrix(p), {false, false}));
    std::size_t kept = 0;
    for (const FloquetMode& m : spectrum.modes) {
      if (m.edge_flagged) continue;
      ++kept;
      worst_eps = std::max(worst_eps, distance_to_antiresonance(m.eps_t));
    }
    kept_min = std::min(kept_min, kept);

    // Smooth, asymmetric initial packet.
    MomentumState psi = MomentumState::localized(p.truncation());
    for (long l = -10; l <= 10; ++l) {
      psi.amplitudes[static_cast<std::size_t>(l + p.truncation())] =
          std::polar(std::exp(-0.05 * static_cast<double>(l * l)), 0.3 * static_cast<double>(l));
    }
    const MomentumState start = psi;
    KickPropagator prop(p);
    prop.step(psi);
    prop.step(psi);
    double peak = 0.0, diff = 0.0;
    for (std::size_t i = 0; i < psi.amplitudes.size(); ++i) {
      peak = std::max(peak, std::abs(start.amplitudes[i]));
      diff = std::max(diff, std::abs(psi.amplitudes[i] - start.amplitudes[i]));
    }
    worst_revival = std::max(worst_revival, diff / peak);
  }
  const bool ok = worst_eps <= 1e-8 && worst_revival <= 1e-10 && kept_min > 0;
  return {ok, "max dist(epsT, {0, pi}) = " + fmt(worst_eps, 3) + " over >= " + std::to_string(kept_min) +
                  " retained modes; two-kick revival error " + fmt(worst_revival, 3)};
}

// C04

Outcome hermitian_unitarity() {
  double worst = 0.0;
  for (double beta : {1.0 / (4.0 * kPi), 0.7 / (2.0 * kPi)}) {
    EvolveOptions opts;
    opts.snapshot_kicks = {};
    const auto s = evolve(RotorParams(3.0, 0.0, beta, 512), 1000, opts);
    for (const auto& o : s.samples) worst = std::max(worst, std::abs(o.norm - 1.0));
  }
  return {worst <= 1e-10, "max |P(n) - 1| over 1000 kicks = " + fmt(worst, 3)};
}

// C05

Outcome similarity_identity() {
  double worst = 0.0;
  std::string cases;
  for (auto [lambda, ns] : {std::pair{0.1, 200}, std::pair{0.5, 50}, std::pair{1.0 / 30.0, 800}}) {
    const RotorParams p(3.0, lambda, 0.7 / (2.0 * kPi), ns);
    const long double y = std::atanh(static_cast<long double>(lambda));
    const long double k0 = 3.0L * std::sqrt(1.0L - static_cast<long double>(lambda) * lambda);
    const auto u = build_floquet_matrix(p);
    const long s = ns;
    for (long n = -s; n <= s; ++n) {
      const long double turns = static_cast<long double>(p.raw_beta()) * static_cast<long double>(n) * n;
      const long double frac = turns - std::floor(turns);
      const cplx free = std::polar(1.0, static_cast<double>(-2.0L * 3.141592653589793238462643383279502884L * frac));
      for (long l = -s; l <= s; ++l) {
        const long d = l - n;
        // D U0(K0) D^{-1}: Hermitian entry times e^{y (l - n)}.
        const double mag = static_cast<double>(bessel_series(d, k0) * std::exp(y * static_cast<long double>(d)));
        const cplx ref = minus_i_power(d) * mag * free;
        const double err = std::abs(u.at(l, n) - ref);
        const double bound = 1e-12 * std::abs(ref) + 1e-290;
        worst = std::max(worst, err / (std::abs(ref) + 1e-290));
        if (err > bound) {
          return {false, "entry (" + std::to_string(l) + ", " + std::to_string(n) + ") at lambda = " + fmt(lambda) +
                             " off by relative " + fmt(err / std::abs(ref), 3)};
        }
      }
    }
    cases += " N_s y = " + fmt(static_cast<double>(ns * y), 3) + ";";
  }
  return {true, "max elementwise relative deviation " + fmt(worst, 3) + " for" + cases};
}

// C06

Outcome resonance_oracle() {
  const int ns = 256;
  EvolveOptions opts;
  opts.snapshot_kicks = every_kick(50);
  opts.keep_amplitudes = true;

  const RotorParams pt(3.0, 1.0 / 30.0, Rational{1, 1}, ns);
  const auto series = evolve(pt, 50, opts);
  double worst_pt = 0.0;
  for (long n = 1; n <= 50; ++n) {
    const auto exact = exact_resonance_state(pt, n);
    const auto& amp = *series.snapshot_at(n)->amplitudes;
    double peak = 0.0, diff = 0.0;
    for (long l = -ns; l <= ns; ++l) {
      peak = std::max(peak, std::abs(exact.at(l)));
      diff = std::max(diff, std::abs(amp[static_cast<std::size_t>(l + ns)] - exact.at(l)));
    }
    worst_pt = std::max(worst_pt, diff / peak);
  }

  const RotorParams herm(3.0, 0.0, Rational{1, 1}, ns);
  const auto hs = evolve(herm, 50, opts);
  double worst_j = 0.0;
  for (long n = 1; n <= 50; ++n) {
    const auto& amp = *hs.snapshot_at(n)->amplitudes;
    for (long l = -ns; l <= ns; ++l) {
      const double j = std::abs(boost::math::cyl_bessel_j(static_cast<double>(std::labs(l)), 3.0 * static_cast<double>(n)));
      worst_j = std::max(worst_j, std::abs(std::abs(amp[static_cast<std::size_t>(l + ns)]) - j));
    }
  }
  return {worst_pt <= 1e-8 && worst_j <= 1e-10, "split-step vs quadrature (lambda = 1/30): " + fmt(worst_pt, 3) +
                                                    " of peak; lambda = 0 vs |J_l(3n)|: " + fmt(worst_j, 3)};
}

// C07

Outcome ratchet_laws() {
  const auto& pt = main_resonance_series(1.0 / 30.0);
  const auto& herm = main_resonance_series(0.0);
  const double drift = fit_slope(pt, 100, 1000, mean_l);
  const double growth = fit_slope(pt, 100, 1000, log_norm);
  const double expo = spreading_exponent(pt, 100, 1000);
  const double herm_expo = spreading_exponent(herm, 100, 1000);
  const bool ok = std::abs(drift / 3.0 - 1.0) <= 0.02 && std::abs(growth / 0.2 - 1.0) <= 0.02 &&
                  std::abs(expo - 0.5) <= 0.05 && std::abs(herm_expo - 1.0) <= 0.05;
  return {ok, "drift " + fmt(drift) + " (3.000 +- 2%), growth " + fmt(growth) + " (0.200 +- 2%), exponent " +
                  fmt(expo, 3) + " (0.50 +- 0.05), Hermitian exponent " + fmt(herm_expo, 3) + " (1.00 +- 0.05)"};
}

// C08

Outcome phenomenology() {
  EvolveOptions opts;
  opts.snapshot_kicks = {};
  const auto dl = evolve(RotorParams(3.0, 1.0 / 30.0, 1.0 / (4.0 * kPi), 512), 1000, opts);
  double pmax = 0.0, pmin = INFINITY;
  for (const auto& o : dl.samples) {
    pmax = std::max(pmax, o.norm);
    pmin = std::min(pmin, o.norm);
  }
  const double spread_ratio = dl.samples[1000].spread / dl.samples[100].spread;

  const auto res = evolve(RotorParams(3.0, 1.0 / 30.0, Rational{1, 12}, 4096), 1000, opts);
  const double slope_a = fit_slope(res, 500, 750, log_norm);
  const double slope_b = fit_slope(res, 750, 1000, log_norm);
  const double v500 = res.samples[500].mean_l / 500.0;
  const double v1000 = res.samples[1000].mean_l / 1000.0;

  const bool dl_ok = pmax / pmin < 10.0 && spread_ratio < 2.0;
  const bool res_ok = slope_a > 0.0 && slope_b > 0.0 && std::abs(slope_b / slope_a - 1.0) <= 0.1 && v500 > 0.0 &&
                      v1000 > 0.0 && std::abs(v1000 / v500 - 1.0) <= 0.1;
  return {dl_ok && res_ok, "beta = 1/(4 pi): Pmax/Pmin = " + fmt(pmax / pmin, 3) + ", spread(1000)/spread(100) = " +
                               fmt(spread_ratio, 3) + "; beta = 1/12: dlogP/dn = " + fmt(slope_a, 3) + " / " +
                               fmt(slope_b, 3) + ", <l>/n = " + fmt(v500, 4) + " -> " + fmt(v1000, 4)};
}

// C09

bool four_figures(double value, double printed, int digits) {
  const double scale = std::pow(10.0, digits - 1 - static_cast<int>(std::floor(std::log10(std::abs(printed)))));
  return std::round(value * scale) == std::round(printed * scale);
}

Outcome cavity_equivalence() {
  std::string detail;
  bool ok = true;
  for (auto [name, beta] : {std::pair<const char*, double>{"fig6", 1.0 / (4.0 * kPi)}, {"fig7", 1.0 / 12.0}}) {
    const CavityConfig cfg = cavity_preset(name);
    const DecayRun run = run_decay(cfg);
    EvolveOptions opts;
    opts.snapshot_kicks = every_kick(cfg.round_trips);
    const RotorParams p = std::string(name) == "fig7" ? RotorParams(3.0, 1.0 / 30.0, Rational{1, 12}, 256)
                                                     : RotorParams(3.0, 1.0 / 30.0, beta, 256);
    const auto report = rotor_equivalence(run, evolve(p, cfg.round_trips, opts));
    ok = ok && report.passed;
    detail += std::string(name) + ": worst peak error " + fmt(100.0 * report.worst_relative_error, 3) +
              "%, centroid gap " + fmt(report.worst_centroid_gap, 3) + "; ";
  }
  const UnitReport u6 = physical_units(cavity_preset("fig6"));
  const UnitReport u7 = physical_units(cavity_preset("fig7"));
  const bool units = four_figures(u6.talbot_length * 100.0, 11.54, 4) && four_figures(u6.mirror_spacing * 1e3, 9.182, 4) &&
                     four_figures(u7.mirror_spacing * 1e3, 9.615, 4) && four_figures(u6.peak_spacing * 1e6, 130.0, 3) &&
                     four_figures(u6.beam_waist * 1e3, 9.55, 3);
  detail += "units L_T = " + fmt(u6.talbot_length * 100.0, 6) + " cm, L = " + fmt(u6.mirror_spacing * 1e3, 6) + " / " +
            fmt(u7.mirror_spacing * 1e3, 6) + " mm, spacing " + fmt(u6.peak_spacing * 1e6, 6) + " um, w0 " +
            fmt(u6.beam_waist * 1e3, 6) + " mm " + (units ? "(match)" : "(MISMATCH)");
  return {ok && units, detail};
}

// C10

Outcome dual_route() {
  double worst = 0.0;
  for (double k : {1.0, 3.0, 6.0}) {
    for (double lambda : {0.0, 1.0 / 30.0, 0.5}) {
      const RotorParams p(k, lambda, 0.7 / (2.0 * kPi), 64);
      const int band = default_coefficient_band(p);
      const auto fft = kick_coefficients(p, band);
      const auto bes = kick_coefficients_bessel(p, band);
      for (long n = -band; n <= band; ++n) worst = std::max(worst, std::abs(fft[n] - bes[n]));
    }
  }
  return {worst <= 1e-10, "max |W_fft - W_bessel| = " + fmt(worst, 3) + " over 9 (K, lambda) pairs"};
}

// Supporting checks.

Outcome dispersion_and_spread() {
  const RotorParams p(3.0, 1.0 / 30.0, Rational{1, 1}, 64);
  const Dispersion d = dispersion(p, 256);
  const double vg_err = std::abs(d.group_velocity - 3.0);
  const double growth_err = std::abs(d.max_growth - 0.1);
  const double half_curv = 0.5 * std::abs(d.curvature);

  // The Gaussian regime sets in only once the tilt e^{2yl} outweighs the Airy
  // structure at the turning point, n >> 1e4 here; checked on [3e4, 3e5].
  std::vector<double> logn, logs;
  double last_ratio = 0.0;
  for (long n : {30000L, 56000L, 100000L, 170000L, 300000L}) {
    const ResonanceState st = exact_resonance_state(p, n);
    double w = 0.0, m1 = 0.0, m2 = 0.0;
    for (long l = st.l_min; l <= st.l_max(); ++l) {
      const double a = std::norm(st.scaled(l));
      w += a;
      m1 += a * static_cast<double>(l);
    }
    const double mean = m1 / w;
    for (long l = st.l_min; l <= st.l_max(); ++l) {
      const double dl = static_cast<double>(l) - mean;
      m2 += std::norm(st.scaled(l)) * dl * dl;
    }
    const double var = m2 / w;
    logn.push_back(std::log(static_cast<double>(n)));
    logs.push_back(0.5 * std::log(var));
    last_ratio = var / (half_curv * static_cast<double>(n));
  }
  const double expo = fit_line(logn, logs).slope;
  const auto& s = main_resonance_series(1.0 / 30.0);
  const double in_window = s.samples[1000].spread * s.samples[1000].spread / (1000.0 * half_curv);
  return {vg_err <= 1e-12 && growth_err <= 1e-12 && std::abs(last_ratio - 1.0) <= 0.05 && std::abs(expo - 0.5) <= 0.05,
          "|v_g - K| = " + fmt(vg_err, 2) + ", |growth - lambda K| = " + fmt(growth_err, 2) +
              "; <dl>^2 / (n |eps''| / 2) = " + fmt(last_ratio, 4) + " at n = 3e5 (" + fmt(in_window, 3) +
              " at n = 1000), exponent on [3e4, 3e5] = " + fmt(expo, 3)};
}

Outcome resonance_closed_form() {
  const double lambda = 0.2;
  const RotorParams p(3.0, lambda, Rational{1, 1}, 64);
  const double y = std::atanh(lambda);
  const double k0 = 3.0 * std::sqrt(1.0 - lambda * lambda);
  double worst = 0.0;
  for (long n : {1L, 5L, 20L, 60L}) {
    const auto st = exact_resonance_state(p, n);
    double peak = 0.0, diff = 0.0;
    for (long l = st.l_min; l <= st.l_max(); ++l) {
      const double ref = std::exp(y * static_cast<double>(l)) *
                         std::abs(boost::math::cyl_bessel_j(static_cast<double>(std::labs(l)), k0 * static_cast<double>(n)));
      peak = std::max(peak, ref);
      diff = std::max(diff, std::abs(std::abs(st.at(l)) - ref));
    }
    worst = std::max(worst, diff / peak);
  }
  return {worst <= 1e-10, "|psi_l(n)| vs e^{y l} |J_l(K0 n)|: " + fmt(worst, 3) + " of peak"};
}

Outcome resonance_band_count() {
  const auto herm = resonance_bands(RotorParams(3.0, 0.0, Rational{1, 12}, 64), 201);
  double max_im = 0.0;
  for (const auto& band : herm.bands) {
    for (const cplx& e : band) max_im = std::max(max_im, std::abs(e.imag()));
  }
  const auto pt = resonance_bands(RotorParams(3.0, 0.3, Rational{1, 12}, 64), 201);
  double pt_im = 0.0;
  for (const auto& band : pt.bands) {
    for (const cplx& e : band) pt_im = std::max(pt_im, std::abs(e.imag()));
  }
  const bool ok = herm.bands.size() == 12 && pt.bands.size() == 12 && pt.q.size() == 201 && max_im <= 1e-10 &&
                  pt_im > 1e-3;
  return {ok, std::to_string(pt.bands.size()) + " bands x " + std::to_string(pt.q.size()) +
                  " q-points; max |Im| = " + fmt(max_im, 2) + " at lambda = 0, " + fmt(pt_im, 3) + " at lambda = 0.3"};
}

Outcome cavity_bloch_average() {
  std::string detail;
  bool ok = true;
  for (const char* name : {"fig6", "fig7"}) {
    const CavityConfig cfg = cavity_preset(name);
    const auto report = compare_peak_powers(run_decay(cfg), bloch_averaged_rotor(cfg, 256));
    ok = ok && report.passed;
    detail += std::string(name) + " " + fmt(report.worst_relative_error, 3) + " (centroid gap " +
              fmt(report.worst_centroid_gap, 2) + ") ";
  }
  return {ok, "quasi-momentum-averaged rotor vs far-field peaks: " + detail};
}

Outcome gaussian_diffraction() {
  CavityConfig cfg = cavity_preset("fig6");
  cfg.grating_amplitude = 0.0;
  cfg.beam_waist = 2.0 * cfg.grating_period;
  cfg.grid = default_grid(cfg.grating_period, cfg.beam_waist);
  CavityPropagator prop(cfg);
  TransverseField f = initial_gaussian(cfg);
  const int trips = 20;
  for (int n = 0; n < trips; ++n) prop.roundtrip(f);
  // exp(i D n d^2/dx^2) exp(-x^2/w0^2) = exp(-x^2 / (w0^2 + 4 i D n)) / sqrt(1 + 4 i D n / w0^2)
  const double w2 = cfg.beam_waist * cfg.beam_waist;
  const cplx q{w2, 4.0 * cfg.diffraction_coefficient() * trips};
  double worst = 0.0;
  for (std::size_t j = 0; j < f.samples.size(); ++j) {
    const double x = f.x(j);
    const cplx ref = std::exp(-x * x / q) / std::sqrt(q / w2);
    worst = std::max(worst, std::abs(f.samples[j] - ref));
  }
  return {worst <= 1e-6, "A = 0, w0 = 2a, 20 trips: max |psi - psi_gauss| = " + fmt(worst, 3)};
}

Outcome operator_order() {
  CavityConfig cfg = cavity_preset("fig7");
  cfg.beam_waist = cfg.grating_period;
  cfg.grid = {16.0 * cfg.grating_period, 16 * 128};
  const int ns = 64;
  const RotorParams p(cfg.grating_amplitude, cfg.nonhermiticity, cfg.beta(), ns);
  MomentumState psi = MomentumState::localized(ns);
  for (long l = -5; l <= 5; ++l) {
    psi.amplitudes[static_cast<std::size_t>(l + ns)] = std::polar(1.0 / (1.0 + static_cast<double>(l * l)), static_cast<double>(l));
  }
  auto synthesize = [&](const MomentumState& m) {
    TransverseField f{std::vector<cplx>(cfg.grid.points), cfg.grid.extent, 0};
    for (std::size_t j = 0; j < f.samples.size(); ++j) {
      const double phase = 2.0 * kPi * f.x(j) / cfg.grating_period;
      cplx acc{};
      for (long l = -ns; l <= ns; ++l) acc += m.amplitudes[static_cast<std::size_t>(l + ns)] * std::polar(1.0, phase * static_cast<double>(l));
      f.samples[j] = acc;
    }
    return f;
  };
  TransverseField field = synthesize(psi);
  CavityPropagator prop(cfg);
  prop.roundtrip(field, WindowGuard::Skip);
  KickPropagator kick(p);
  kick.step(psi);
  const TransverseField expect = synthesize(psi);
  const double damp = std::exp(-cfg.gamma());
  double worst = 0.0, peak = 0.0;
  for (std::size_t j = 0; j < field.samples.size(); ++j) {
    peak = std::max(peak, std::abs(expect.samples[j]));
    worst = std::max(worst, std::abs(field.samples[j] - damp * expect.samples[j]));
  }
  return {worst <= 1e-8 * peak, "roundtrip vs e^{-gamma} kick: " + fmt(worst / peak, 3) + " of peak"};
}

Outcome lossless_cavity() {
  CavityConfig cfg = cavity_preset("fig7");
  cfg.nonhermiticity = 0.0;
  const DecayRun run = run_decay(cfg, {{}});
  double worst = 0.0;
  for (const auto& t : run.trips) worst = std::max(worst, std::abs(t.power / run.trips.front().power - 1.0));
  return {worst <= 1e-10, "lambda = 0, 20 trips: max relative power change " + fmt(worst, 3)};
}

Outcome threshold_trend() {
  std::vector<double> values;
  std::string detail;
  for (double tpb : {0.5, 0.7, 0.9, 1.1, 1.3}) {
    const auto r = pt_threshold(RotorParams(3.0, 0.0, tpb / (2.0 * kPi), 400));
    values.push_back(r.lambda_pt);
    detail += fmt(tpb, 2) + " -> " + fmt(r.lambda_pt, 3) + "; ";
  }
  bool ok = true;
  for (std::size_t i = 1; i < values.size(); ++i) ok = ok && values[i] <= values[i - 1] + 1e-3;
  return {ok, "lambda_PT vs 2 pi beta (N_s = 400): " + detail};
}

Outcome resonance_threshold() {
  const auto r = pt_threshold(RotorParams(3.0, 0.0, Rational{1, 12}, 400));
  const bool ok = r.status == ThresholdStatus::BrokenAtOrigin ||
                  (r.status == ThresholdStatus::Bracketed && r.lambda_pt <= 0.1);
  return {ok, "beta = 1/12: lambda_PT = " + fmt(r.lambda_pt, 3) + " (detector at lambda = 0: " +
                  fmt(r.scan.front().mean_abs_im, 3) + ", at 0.1: " + fmt(r.scan[1].mean_abs_im, 3) + ")"};
}

}  // namespace

const std::vector<Check>& all_checks() {
  static const std::vector<Check> checks{
      {"C01", "threshold reproduction, K = 3, 2 pi beta = 0.7", Level::Full, threshold_reproduction},
      {"C02", "broken phase at beta = 1/12, lambda = 0.05", Level::Fast, broken_at_resonance},
      {"C03", "antiresonance beta = 1/2", Level::Fast, antiresonance},
      {"C04", "Hermitian unitarity over 1000 kicks", Level::Fast, hermitian_unitarity},
      {"C05", "similarity identity U = D U0 D^-1", Level::Fast, similarity_identity},
      {"C06", "split-step vs resonance quadrature and Bessel", Level::Fast, resonance_oracle},
      {"C07", "ratchet drift, growth and spreading at beta = 1", Level::Fast, ratchet_laws},
      {"C08", "localization vs resonance phenomenology", Level::Fast, phenomenology},
      {"C09", "cavity vs rotor peak powers and unit report", Level::Fast, cavity_equivalence},
      {"C10", "kick coefficients, FFT vs Bessel", Level::Fast, dual_route},
      {"C11", "threshold truncation convergence", Level::Full, truncation_convergence},
      {"S01", "beta = 1 dispersion identities and spread law", Level::Fast, dispersion_and_spread},
      {"S02", "beta = 1 quadrature vs closed form", Level::Fast, resonance_closed_form},
      {"S03", "resonance band count and Hermitian reality", Level::Fast, resonance_band_count},
      {"S04", "cavity vs quasi-momentum-averaged rotor", Level::Fast, cavity_bloch_average},
      {"S05", "free diffraction vs Gaussian beam", Level::Fast, gaussian_diffraction},
      {"S06", "round trip equals damped kick on periodic input", Level::Fast, operator_order},
      {"S07", "lossless cavity conserves power", Level::Fast, lossless_cavity},
      {"S08", "threshold decreases with beta", Level::Full, threshold_trend},
      {"S09", "threshold vanishes at beta = 1/12", Level::Full, resonance_threshold},
  };
  return checks;
}

std::string format_line(const Result& r) {
  char secs[32];
  std::snprintf(secs, sizeof secs, "%.1f s", r.seconds);
  return std::string(r.passed ? "[PASS] " : "[FAIL] ") + r.id + " " + r.title + ": " + r.detail + " (" + secs + ")";
}

std::vector<Result> run(Level level, const std::vector<std::string>& only, std::ostream& out) {
  std::vector<Result> results;
  for (const Check& c : all_checks()) {
    if (!only.empty()) {
      if (std::find(only.begin(), only.end(), c.id) == only.end()) continue;
    } else if (level == Level::Fast && c.level == Level::Full) {
      continue;
    }
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o{false, ""};
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    results.push_back({c.id, c.title, o.passed, o.detail, secs});
    out << format_line(results.back()) << std::endl;
  }
  return results;
}

}  // namespace ptrotor::verify
