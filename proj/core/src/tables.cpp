#include "ptrotor/tables.hpp"

#include <cstdio>

namespace ptrotor::tables {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

// snprintf is used instead of stream formatting so the imbued locale never
// touches the decimal separator.
struct Row {
  std::ostream& out;
  bool first = true;
  Row& operator<<(double v) { return put(format_double(v)); }
  Row& operator<<(long v) { return put(std::to_string(v)); }
  Row& operator<<(const std::string& s) { return put(s); }
  Row& put(const std::string& s) {
    if (!first) out << ',';
    out << s;
    first = false;
    return *this;
  }
  ~Row() { out << '\n'; }
};

}  // namespace

void write_spectrum(std::ostream& out, const QuasiEnergySpectrum& spectrum) {
  out << "re_epsT,im_epsT,R,center,edge_flagged\n";
  for (const FloquetMode& m : spectrum.modes) {
    Row{out} << m.eps_t.real() << m.eps_t.imag() << m.participation_ratio << m.center
             << static_cast<long>(m.edge_flagged ? 1 : 0);
  }
}

void write_threshold_scan(std::ostream& out, const std::vector<DetectorSample>& scan) {
  out << "lambda,mean_abs_im\n";
  for (const DetectorSample& s : scan) Row{out} << s.lambda << s.mean_abs_im;
}

void write_bands(std::ostream& out, const BandStructure& bands) {
  out << "q,band,re,im\n";
  for (std::size_t k = 0; k < bands.q.size(); ++k) {
    for (std::size_t b = 0; b < bands.bands.size(); ++b) {
      const cplx e = bands.bands[b][k];
      Row{out} << bands.q[k] << static_cast<long>(b) << e.real() << e.imag();
    }
  }
}

void write_series(std::ostream& out, const ObservableSeries& series) {
  out << "n,P,mean_l,spread,raw_spread\n";
  for (const ObservableSample& s : series.samples) Row{out} << s.n << s.norm << s.mean_l << s.spread << s.raw_spread;
}

void write_snapshot(std::ostream& out, const Snapshot& snapshot) {
  out << "l,abs2\n";
  const long s = static_cast<long>(snapshot.abs2.size() / 2);
  for (long l = -s; l <= s; ++l) Row{out} << l << snapshot.abs2[static_cast<std::size_t>(l + s)];
}

void write_dispersion(std::ostream& out, const Dispersion& dispersion) {
  out << "q,re_eps,im_eps\n";
  for (std::size_t k = 0; k < dispersion.q.size(); ++k) {
    Row{out} << dispersion.q[k] << dispersion.eps[k].real() << dispersion.eps[k].imag();
  }
}

void write_resonance(std::ostream& out, const RotorParams& params, const ResonanceState& state, long n) {
  out << "l,abs2_exact,abs2_asymptotic\n";
  const bool saddle = n >= 1 && params.nonhermiticity() > 0.0;
  for (long l = state.l_min; l <= state.l_max(); ++l) {
    Row row{out};
    row << l << std::norm(state.at(l));
    row << (saddle ? format_double(asymptotic_profile(params, l, n)) : std::string{});
  }
}

void write_cavity_trips(std::ostream& out, const DecayRun& run) {
  out << "n,power,meanX_over_spacing,stdX_over_spacing\n";
  for (const CavityTrip& t : run.trips) Row{out} << t.n << t.power << t.mean_over_spacing << t.std_over_spacing;
}

void write_far_field(std::ostream& out, const FarField& far) {
  out << "X,intensity\n";
  for (std::size_t i = 0; i < far.X.size(); ++i) Row{out} << far.X[i] << far.intensity[i];
}

}  // namespace ptrotor::tables
