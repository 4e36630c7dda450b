#pragma once

#include <ostream>
#include <string>

#include "ptrotor/cavity.hpp"
#include "ptrotor/dynamics.hpp"
#include "ptrotor/floquet.hpp"
#include "ptrotor/resonance.hpp"

// CSV writers: header row, '.' decimal separator, 17 significant digits.
namespace ptrotor::tables {

/// re_epsT, im_epsT, R, center, edge_flagged
void write_spectrum(std::ostream& out, const QuasiEnergySpectrum& spectrum);
/// lambda, mean_abs_im
void write_threshold_scan(std::ostream& out, const std::vector<DetectorSample>& scan);
/// q, band, re, im
void write_bands(std::ostream& out, const BandStructure& bands);
/// n, P, mean_l, spread, raw_spread
void write_series(std::ostream& out, const ObservableSeries& series);
/// l, abs2
void write_snapshot(std::ostream& out, const Snapshot& snapshot);
/// q, re_eps, im_eps
void write_dispersion(std::ostream& out, const Dispersion& dispersion);
/// l, abs2_exact, abs2_asymptotic (the last column is empty when undefined)
void write_resonance(std::ostream& out, const RotorParams& params, const ResonanceState& state, long n);
/// n, power, meanX_over_spacing, stdX_over_spacing
void write_cavity_trips(std::ostream& out, const DecayRun& run);
/// X, intensity
void write_far_field(std::ostream& out, const FarField& far);

/// "%.17g"
std::string format_double(double v);

}  // namespace ptrotor::tables
