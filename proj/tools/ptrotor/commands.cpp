#include "commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <iostream>
#include <map>
#include <sstream>
#include <thread>

#include "manifest.hpp"
#include "ptrotor/cavity.hpp"
#include "ptrotor/dynamics.hpp"
#include "ptrotor/error.hpp"
#include "ptrotor/floquet.hpp"
#include "ptrotor/resonance.hpp"
#include "ptrotor/tables.hpp"
#include "suite.hpp"

namespace ptrotor::cli {
namespace {

KeySpec opt(std::string key, std::string help) { return {std::move(key), std::nullopt, false, std::move(help)}; }
KeySpec req(std::string key, std::string help) { return {std::move(key), std::nullopt, true, std::move(help)}; }
KeySpec def(std::string key, std::string fallback, std::string help) {
  return {std::move(key), std::move(fallback), false, std::move(help)};
}

std::vector<KeySpec> with_beta(std::vector<KeySpec> keys) {
  keys.push_back(opt("beta", "kicking parameter: N/M (exact), decimal, or e.g. 1/(4pi)"));
  keys.push_back(opt("two_pi_beta", "2 pi beta; alternative to beta"));
  keys.push_back(opt("beta_rational", "exact rational beta N/M"));
  return keys;
}

std::string csv(const std::function<void(std::ostream&)>& write) {
  std::ostringstream out;
  write(out);
  return out.str();
}

std::string status_name(ThresholdStatus s) {
  switch (s) {
    case ThresholdStatus::Bracketed: return "bracketed";
    case ThresholdStatus::BrokenAtOrigin: return "broken_at_origin";
    case ThresholdStatus::UnbrokenAcrossBracket: return "unbroken_across_bracket";
  }
  return "unknown";
}

std::vector<long> kicks_up_to(const std::vector<long>& wanted, long limit) {
  std::vector<long> out;
  for (long k : wanted) {
    if (k >= 0 && k <= limit) out.push_back(k);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

int truncation_of(const Settings& s) {
  const long ns = s.integer("Ns");
  if (ns < 1 || ns > 1'000'000) throw ConfigError("Ns must lie in [1, 1000000]");
  return static_cast<int>(ns);
}

// Runs task(i) for i in [0, count) on up to `workers` threads. Results are
// stored by index, so the merge order never depends on completion order.
template <class Result, class Task>
std::vector<Result> parallel_map(std::size_t count, unsigned workers, Task task) {
  std::vector<Result> results(count);
  std::atomic<std::size_t> next{0};
  auto drain = [&] {
    for (std::size_t i = next++; i < count; i = next++) results[i] = task(i);
  };
  const unsigned n = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(count)));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < n; ++t) pool.emplace_back(drain);
  drain();
  for (auto& th : pool) th.join();
  return results;
}

}  // namespace

const std::vector<KeySpec>& command_keys(const std::string& command) {
  static const std::map<std::string, std::vector<KeySpec>> table{
      {"spectrum",
       with_beta({req("K", "kick strength V0/hbar"), req("lambda", "non-Hermiticity in [0, 1)"),
                  def("Ns", "500", "momentum truncation N_s"),
                  def("edge_fraction", "0.1", "edge band for flagging boundary modes"),
                  def("residuals", "false", "also report |U v - mu v| per mode"), def("out", ".", "output directory")})},
      {"threshold",
       with_beta({req("K", "kick strength V0/hbar"), def("Ns", "500", "momentum truncation N_s"),
                  def("scan_step", "0.1", "coarse lambda step"), def("scan_max", "0.9", "last coarse lambda"),
                  def("detector_tolerance", "1e-4", "mean |Im epsT| counted as broken"),
                  def("bisection_tolerance", "1e-3", "final bracket width"),
                  def("edge_fraction", "0.1", "edge band for flagging boundary modes"),
                  def("workers", "auto", "parallel beta points (auto = hardware threads)"),
                  def("out", ".", "output directory")})},
      {"bands",
       with_beta({req("K", "kick strength V0/hbar"), req("lambda", "non-Hermiticity in [0, 1)"),
                  def("q_points", "201", "quasi-momentum samples"), def("out", ".", "output directory")})},
      {"evolve",
       with_beta({req("K", "kick strength V0/hbar"), req("lambda", "non-Hermiticity in [0, 1)"),
                  def("kicks", "1000", "number of kicks"),
                  def("Ns", "auto", "momentum truncation (auto = max(256, 3 K e^y kicks))"),
                  def("snapshots", "0,5,10,20,50,100,500,1000", "kicks at which |psi_l|^2 is written"),
                  def("quasi_momentum", "0", "Bloch quasi-momentum shift of the kinetic term"),
                  def("out", ".", "output directory")})},
      {"resonance",
       {req("K", "kick strength V0/hbar"), req("lambda", "non-Hermiticity in [0, 1)"),
        def("kicks", "100", "kick number n of the exact state"), def("q_points", "256", "dispersion samples"),
        def("out", ".", "output directory")}},
      {"cavity",
       with_beta({req("A", "phase grating depth, radians"), req("lambda", "loss-to-phase ratio in [0, 1)"),
                  req("grating_period", "grating period a (length)"), req("wavelength", "lambda_0 (length)"),
                  req("focal_length", "lens focal length f (length)"),
                  opt("mirror_spacing", "L (length); alternative to beta"),
                  opt("beam_waist", "w0 (length)"), opt("waist_periods", "w0 / a; alternative to beam_waist"),
                  def("extent", "auto", "transverse window (length)"), def("points", "auto", "grid points"),
                  def("points_per_period", "128", "samples per grating period for the auto grid"),
                  def("round_trips", "20", "number of round trips"),
                  def("snapshots", "0,5,10,20", "trips at which far field and near field are written"),
                  def("compare_rotor", "0", "N_s of a rotor comparison run (0 = none)"),
                  def("bloch_nodes", "40", "quadrature nodes of the quasi-momentum average"),
                  def("out", ".", "output directory")})},
  };
  const auto it = table.find(command);
  if (it == table.end()) throw ConfigError("unknown command " + command);
  return it->second;
}

int cmd_spectrum(const Settings& s) {
  RunRecorder rec("spectrum", s, s.text("out"));
  const RotorParams p = rotor_params(s, s.number("lambda"), beta_from(s), truncation_of(s));
  const auto matrix = rec.stage("assemble", [&] { return build_floquet_matrix(p); });
  SpectrumOptions so;
  so.keep_eigenvectors = false;
  so.compute_residuals = s.flag("residuals");
  auto spectrum = rec.stage("eigensolve", [&] { return quasi_energy_spectrum(matrix, so); });
  spectrum = filter_edge_states(std::move(spectrum), s.number("edge_fraction"));
  const double mean_im = mean_im_quasienergy(spectrum);
  rec.write_file("spectrum.csv", csv([&](std::ostream& o) { tables::write_spectrum(o, spectrum); }));
  rec.derived()["modes"] = spectrum.modes.size();
  rec.derived()["retained_modes"] = spectrum.unflagged_count();
  rec.derived()["mean_abs_im_epsT"] = mean_im;
  rec.finish();
  std::cout << "modes " << spectrum.modes.size() << ", retained " << spectrum.unflagged_count()
            << ", mean |Im epsT| " << tables::format_double(mean_im) << "\n";
  return 0;
}

int cmd_threshold(const Settings& s) {
  RunRecorder rec("threshold", s, s.text("out"));
  const auto betas = betas_from(s);
  const int ns = truncation_of(s);
  ThresholdOptions to;
  to.scan_step = s.number("scan_step");
  to.scan_max = s.number("scan_max");
  to.detector_tolerance = s.number("detector_tolerance");
  to.bisection_tolerance = s.number("bisection_tolerance");
  to.edge_fraction = s.number("edge_fraction");
  unsigned workers = std::max(1u, std::thread::hardware_concurrency());
  if (s.text("workers") != "auto") {
    const long w = s.integer("workers");
    if (w < 1) throw ConfigError("workers must be >= 1");
    workers = static_cast<unsigned>(w);
  }
  // Construct every parameter set up front so bad input fails before any work.
  std::vector<RotorParams> params;
  for (const auto& b : betas) params.push_back(rotor_params(s, 0.0, b, ns));

  struct Point {
    std::optional<ThresholdResult> result;
    std::vector<DetectorSample> scan;
    std::string status;
    std::string error;
  };
  auto points = rec.stage("sweep", [&] {
    return parallel_map<Point>(params.size(), workers, [&](std::size_t i) {
      Point pt;
      try {
        ThresholdResult r = pt_threshold(params[i], to);
        pt.status = status_name(r.status);
        pt.scan = r.scan;
        pt.result = std::move(r);
      } catch (const NonMonotoneDetectorError& e) {
        pt.status = "non_monotone";
        pt.scan = e.scan();
        pt.error = e.what();
      } catch (const std::exception& e) {
        pt.status = "error";
        pt.error = e.what();
      }
      return pt;
    });
  });

  std::vector<std::size_t> order(betas.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return betas[a].value < betas[b].value; });

  std::ostringstream table, scans;
  table << "beta,two_pi_beta,lambda_pt,status\n";
  scans << "beta,lambda,mean_abs_im\n";
  bool failed = false;
  for (std::size_t i : order) {
    const Point& pt = points[i];
    const double b = betas[i].value;
    const double lpt = pt.result ? pt.result->lambda_pt : NAN;
    table << tables::format_double(b) << ',' << tables::format_double(2.0 * kPi * b) << ','
          << tables::format_double(lpt) << ',' << pt.status << '\n';
    for (const auto& d : pt.scan) {
      scans << tables::format_double(b) << ',' << tables::format_double(d.lambda) << ','
            << tables::format_double(d.mean_abs_im) << '\n';
    }
    std::cout << "beta " << betas[i].text << ": lambda_PT " << tables::format_double(lpt) << " (" << pt.status << ")\n";
    if (!pt.error.empty()) {
      std::cerr << "error at beta " << betas[i].text << ": " << pt.error << "\n";
      failed = true;
    }
  }
  rec.write_file("threshold.csv", table.str());
  rec.write_file("threshold_scan.csv", scans.str());
  rec.derived()["workers"] = workers;
  if (failed) rec.set_status("error");
  rec.finish();
  return failed ? 1 : 0;
}

int cmd_bands(const Settings& s) {
  RunRecorder rec("bands", s, s.text("out"));
  const BetaValue b = beta_from(s);
  if (!b.rational) throw ConfigError("bands need an exact rational beta, e.g. --beta-rational 1/12");
  const RotorParams p = rotor_params(s, s.number("lambda"), b, 64);
  const long q = s.integer("q_points");
  if (q < 1 || q > 1'000'000) throw ConfigError("q_points must lie in [1, 1000000]");
  const auto bands = rec.stage("bands", [&] { return resonance_bands(p, static_cast<int>(q)); });
  rec.write_file("bands.csv", csv([&](std::ostream& o) { tables::write_bands(o, bands); }));
  double max_im = 0.0;
  for (const auto& band : bands.bands) {
    for (const cplx& e : band) max_im = std::max(max_im, std::abs(e.imag()));
  }
  rec.derived()["bands"] = bands.bands.size();
  rec.derived()["max_abs_im_epsT"] = max_im;
  rec.finish();
  std::cout << bands.bands.size() << " bands x " << bands.q.size() << " q-points, max |Im epsT| "
            << tables::format_double(max_im) << "\n";
  return 0;
}

int cmd_evolve(const Settings& s) {
  RunRecorder rec("evolve", s, s.text("out"));
  const long kicks = s.integer("kicks");
  if (kicks < 0) throw ConfigError("kicks must be >= 0");
  const double lambda = s.number("lambda");
  int ns = 0;
  if (s.text("Ns") == "auto") {
    const double k = s.number("K");
    const double reach = 3.0 * k * std::exp(std::atanh(std::clamp(lambda, 0.0, 0.999))) * static_cast<double>(kicks);
    ns = static_cast<int>(std::max(256.0, std::ceil(reach)));
    rec.derived()["Ns_resolved"] = ns;
  } else {
    ns = truncation_of(s);
  }
  const RotorParams p = rotor_params(s, lambda, beta_from(s), ns);
  EvolveOptions eo;
  eo.snapshot_kicks = kicks_up_to(s.integers("snapshots"), kicks);
  eo.quasi_momentum = s.number("quasi_momentum");
  const auto series = rec.stage("evolve", [&] { return evolve(p, kicks, eo); });
  rec.write_file("series.csv", csv([&](std::ostream& o) { tables::write_series(o, series); }));
  for (const Snapshot& snap : series.snapshots) {
    rec.write_file("snapshot_n" + std::to_string(snap.n) + ".csv",
                   csv([&](std::ostream& o) { tables::write_snapshot(o, snap); }));
  }
  const auto& last = series.samples.back();
  rec.derived()["final"] = {{"n", last.n}, {"P", last.norm}, {"mean_l", last.mean_l}, {"spread", last.spread}};
  rec.finish();
  std::cout << "n " << last.n << ": P " << tables::format_double(last.norm) << ", <l> "
            << tables::format_double(last.mean_l) << ", spread " << tables::format_double(last.spread) << "\n";
  return 0;
}

int cmd_resonance(const Settings& s) {
  RunRecorder rec("resonance", s, s.text("out"));
  const long n = s.integer("kicks");
  const long q = s.integer("q_points");
  if (q < 4 || q > 1'000'000) throw ConfigError("q_points must lie in [4, 1000000]");
  const RotorParams p(s.number("K"), s.number("lambda"), Rational{1, 1}, 64);
  const Dispersion d = dispersion(p, static_cast<int>(q));
  const auto state = rec.stage("quadrature", [&] { return exact_resonance_state(p, n); });
  rec.write_file("dispersion.csv", csv([&](std::ostream& o) { tables::write_dispersion(o, d); }));
  rec.write_file("resonance_n" + std::to_string(n) + ".csv",
                 csv([&](std::ostream& o) { tables::write_resonance(o, p, state, n); }));
  rec.derived()["group_velocity"] = d.group_velocity;
  rec.derived()["curvature_im"] = d.curvature.imag();
  rec.derived()["max_growth"] = d.max_growth;
  rec.derived()["quadrature_nodes"] = state.nodes;
  rec.derived()["log_scale"] = state.log_scale;
  rec.finish();
  std::cout << "v_g " << tables::format_double(d.group_velocity) << ", eps'' " << tables::format_double(d.curvature.imag())
            << "i, growth " << tables::format_double(d.max_growth) << " per kick\n";
  return 0;
}

int cmd_cavity(const Settings& s) {
  RunRecorder rec("cavity", s, s.text("out"));
  CavityConfig c{};
  c.grating_amplitude = s.number("A");
  c.nonhermiticity = s.number("lambda");
  c.grating_period = s.length("grating_period");
  c.wavelength = s.length("wavelength");
  c.focal_length = s.length("focal_length");

  const bool has_beta = s.has("beta") || s.has("two_pi_beta") || s.has("beta_rational");
  if (has_beta == s.has("mirror_spacing")) throw ConfigError("give exactly one of mirror_spacing or a beta setting");
  std::optional<BetaValue> beta;
  if (has_beta) {
    beta = beta_from(s);
    c.mirror_spacing = mirror_spacing_for_beta(beta->value, c.grating_period, c.wavelength);
  } else {
    c.mirror_spacing = s.length("mirror_spacing");
  }
  if (s.has("beam_waist") == s.has("waist_periods")) throw ConfigError("give exactly one of beam_waist or waist_periods");
  c.beam_waist = s.has("beam_waist") ? s.length("beam_waist") : s.number("waist_periods") * c.grating_period;

  const bool auto_extent = s.text("extent") == "auto";
  if (auto_extent != (s.text("points") == "auto")) throw ConfigError("set both extent and points, or neither");
  if (auto_extent) {
    c.grid = default_grid(c.grating_period, c.beam_waist, static_cast<int>(s.integer("points_per_period")));
  } else {
    c.grid = {s.length("extent"), static_cast<std::size_t>(std::max(0L, s.integer("points")))};
  }
  c.round_trips = static_cast<int>(s.integer("round_trips"));
  c.validate();

  DecayOptions dop;
  dop.snapshot_trips = kicks_up_to(s.integers("snapshots"), c.round_trips);
  const DecayRun run = rec.stage("round_trips", [&] { return run_decay(c, dop); });
  rec.write_file("cavity_trips.csv", csv([&](std::ostream& o) { tables::write_cavity_trips(o, run); }));
  for (const auto& [n, ff] : run.far_field_snapshots) {
    rec.write_file("far_field_n" + std::to_string(n) + ".csv", csv([&](std::ostream& o) { tables::write_far_field(o, ff); }));
  }

  const UnitReport u = physical_units(c);
  nlohmann::ordered_json units{{"talbot_length_m", u.talbot_length},     {"beta", u.beta},
                               {"mirror_spacing_m", u.mirror_spacing},   {"peak_spacing_m", u.peak_spacing},
                               {"waist_over_period", u.waist_over_period}, {"beam_waist_m", u.beam_waist},
                               {"gamma", c.gamma()},                     {"grid_extent_m", c.grid.extent},
                               {"grid_points", c.grid.points}};
  rec.write_file("units.json", units.dump(2) + "\n");

  const long ns = s.integer("compare_rotor");
  if (ns > 0) {
    EvolveOptions eo;
    for (long n = 0; n <= c.round_trips; ++n) eo.snapshot_kicks.push_back(n);
    const RotorParams p = beta && beta->rational
                              ? RotorParams(c.grating_amplitude, c.nonhermiticity, *beta->rational, static_cast<int>(ns))
                              : RotorParams(c.grating_amplitude, c.nonhermiticity, c.beta(), static_cast<int>(ns));
    const auto delta = rec.stage("rotor", [&] { return rotor_equivalence(run, evolve(p, c.round_trips, eo)); });
    const auto bloch = rec.stage("bloch_rotor", [&] {
      return compare_peak_powers(run, bloch_averaged_rotor(c, static_cast<int>(ns), static_cast<int>(s.integer("bloch_nodes"))));
    });
    std::ostringstream o;
    o << "n,compared_peaks,worst_rel_error_delta_rotor,worst_rel_error_averaged_rotor,cavity_centroid,rotor_centroid\n";
    for (std::size_t i = 0; i < delta.trips.size(); ++i) {
      const auto& a = delta.trips[i];
      o << a.n << ',' << a.compared_peaks << ',' << tables::format_double(a.worst_relative_error) << ','
        << tables::format_double(bloch.trips[i].worst_relative_error) << ',' << tables::format_double(a.cavity_centroid)
        << ',' << tables::format_double(a.rotor_centroid) << '\n';
    }
    rec.write_file("equivalence.csv", o.str());
    rec.derived()["equivalence"] = {{"delta_rotor_worst", delta.worst_relative_error},
                                    {"delta_rotor_passed", delta.passed},
                                    {"averaged_rotor_worst", bloch.worst_relative_error},
                                    {"averaged_rotor_passed", bloch.passed}};
    std::cout << "peak powers vs delta-initial rotor: worst " << tables::format_double(delta.worst_relative_error)
              << (delta.passed ? " (within 2%)" : " (outside 2%)") << "; vs quasi-momentum-averaged rotor: worst "
              << tables::format_double(bloch.worst_relative_error) << "\n";
    if (!delta.passed) rec.set_status("equivalence_outside_tolerance");
  }
  const auto& last = run.trips.back();
  rec.derived()["final"] = {{"n", last.n}, {"power", last.power}, {"meanX_over_spacing", last.mean_over_spacing},
                            {"stdX_over_spacing", last.std_over_spacing}};
  rec.finish();
  std::cout << "L_T " << tables::format_double(u.talbot_length) << " m, L " << tables::format_double(u.mirror_spacing)
            << " m, beta " << tables::format_double(u.beta) << ", peak spacing " << tables::format_double(u.peak_spacing)
            << " m; trip " << last.n << ": power " << tables::format_double(last.power) << ", <X> "
            << tables::format_double(last.mean_over_spacing) << ", <dX> " << tables::format_double(last.std_over_spacing)
            << " spacings\n";
  return 0;
}

int cmd_verify(const std::string& level, const std::vector<std::string>& only) {
  verify::Level lv;
  if (level == "fast") lv = verify::Level::Fast;
  else if (level == "full") lv = verify::Level::Full;
  else throw ConfigError("--level must be fast or full");
  const auto results = verify::run(lv, only, std::cout);
  std::size_t failed = 0;
  for (const auto& r : results) failed += r.passed ? 0 : 1;
  std::cout << results.size() - failed << "/" << results.size() << " checks passed\n";
  return failed == 0 ? 0 : 1;
}

}  // namespace ptrotor::cli
