#include <gtest/gtest.h>

#include <numeric>

#include "oracles.hpp"
#include "ptrotor/error.hpp"
#include "ptrotor/cavity.hpp"
#include "ptrotor/dynamics.hpp"

using namespace ptrotor;

namespace {

CavityConfig free_space(double waist_periods) {
  CavityConfig cfg = cavity_preset("fig6");
  cfg.grating_amplitude = 0.0;
  cfg.beam_waist = waist_periods * cfg.grating_period;
  cfg.grid = default_grid(cfg.grating_period, cfg.beam_waist);
  return cfg;
}

}  // namespace

TEST(Cavity, PresetUnits) {
  const auto u6 = physical_units(cavity_preset("fig6"));
  EXPECT_NEAR(u6.talbot_length, 0.115384615, 1e-9);
  EXPECT_NEAR(u6.beta, 1.0 / (4 * kPi), 1e-12);
  EXPECT_NEAR(u6.mirror_spacing, 9.18202e-3, 1e-8);
  EXPECT_NEAR(u6.peak_spacing, 130e-6, 1e-12);
  EXPECT_NEAR(u6.beam_waist, 9.5493e-3, 1e-7);
  const auto u7 = physical_units(cavity_preset("fig7"));
  EXPECT_NEAR(u7.mirror_spacing, 9.61538e-3, 1e-8);
  EXPECT_THROW(cavity_preset("fig8"), Error);
}

TEST(Cavity, MirrorSpacingInvertsBeta) {
  const double L = mirror_spacing_for_beta(0.1, 300e-6, 780e-9);
  CavityConfig cfg = cavity_preset("fig6");
  cfg.mirror_spacing = L;
  EXPECT_NEAR(cfg.beta(), 0.1, 1e-14);
}

TEST(Cavity, ValidateRejectsBadGrids) {
  CavityConfig cfg = cavity_preset("fig6");
  EXPECT_NO_THROW(cfg.validate());
  CavityConfig narrow = cfg;
  narrow.grid.extent = 2.0 * cfg.beam_waist;
  EXPECT_THROW(narrow.validate(), Error);
  CavityConfig odd = cfg;
  odd.grid.points += 1;
  EXPECT_THROW(odd.validate(), Error);
  CavityConfig lossy = cfg;
  lossy.nonhermiticity = 1.0;
  EXPECT_THROW(lossy.validate(), Error);
}

TEST(Cavity, FreeDiffractionMatchesGaussianBeam) {
  const CavityConfig cfg = free_space(3.0);
  CavityPropagator prop(cfg);
  TransverseField f = initial_gaussian(cfg);
  const int trips = 12;
  for (int n = 0; n < trips; ++n) prop.roundtrip(f);
  EXPECT_EQ(f.round_trip, trips);
  double worst = 0.0;
  for (std::size_t j = 0; j < f.samples.size(); ++j) {
    const cplx ref = oracle::gaussian_beam(f.x(j), cfg.beam_waist, cfg.wavelength, 2.0 * cfg.mirror_spacing * trips);
    worst = std::max(worst, std::abs(f.samples[j] - ref));
  }
  EXPECT_LT(worst, 1e-8);
}

TEST(Cavity, LosslessGratingConservesPower) {
  CavityConfig cfg = cavity_preset("fig7");
  cfg.nonhermiticity = 0.0;
  CavityPropagator prop(cfg);
  TransverseField f = initial_gaussian(cfg);
  const double p0 = f.power();
  for (int n = 0; n < 5; ++n) prop.roundtrip(f);
  EXPECT_NEAR(f.power(), p0, 1e-10 * p0);
}

TEST(Cavity, LossyGratingDecays) {
  const CavityConfig cfg = cavity_preset("fig6");
  const auto run = run_decay(cfg, {{0, 3}});
  ASSERT_EQ(run.trips.size(), static_cast<std::size_t>(cfg.round_trips + 1));
  for (std::size_t n = 1; n < run.trips.size(); ++n) EXPECT_LT(run.trips[n].power, run.trips[n - 1].power);
  ASSERT_EQ(run.far_field_snapshots.size(), 2u);
  EXPECT_EQ(run.far_field_snapshots[1].first, 3);
}

TEST(Cavity, FarFieldNormalizationAndPeaks) {
  const CavityConfig cfg = cavity_preset("fig6");
  TransverseField f = initial_gaussian(cfg);
  CavityPropagator prop(cfg);
  prop.roundtrip(f);
  const FarField ff = far_field(f, cfg);
  const double sum = std::accumulate(ff.intensity.begin(), ff.intensity.end(), 0.0);
  EXPECT_NEAR(sum, f.power(), 1e-10 * f.power());
  EXPECT_NEAR(ff.spacing, cfg.peak_spacing(), 1e-15);
  double peak_sum = 0.0;
  for (const auto& p : ff.peaks) peak_sum += p.power;
  EXPECT_NEAR(peak_sum, ff.total_power, 1e-6 * ff.total_power);
  ASSERT_NE(ff.peak(0), nullptr);
  EXPECT_NEAR(ff.peak(0)->position, 0.0, 0.05 * ff.spacing);
  EXPECT_EQ(ff.peak(100000), nullptr);
}

TEST(Cavity, WindowGuardTripsOnWideField) {
  CavityConfig cfg = free_space(3.0);
  TransverseField f = initial_gaussian(cfg);
  std::fill(f.samples.begin(), f.samples.end(), cplx(1.0, 0.0));
  CavityPropagator prop(cfg);
  try {
    prop.roundtrip(f);
    FAIL() << "expected WindowOverflow";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::WindowOverflow);
  }
  TransverseField g = initial_gaussian(cfg);
  std::fill(g.samples.begin(), g.samples.end(), cplx(1.0, 0.0));
  EXPECT_NO_THROW(prop.roundtrip(g, WindowGuard::Skip));
}

TEST(Cavity, GaussHermiteIntegratesMoments) {
  std::vector<double> x, w;
  gauss_hermite_normal(20, x, w);
  double m0 = 0, m2 = 0, m4 = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    m0 += w[i];
    m2 += w[i] * x[i] * x[i];
    m4 += w[i] * std::pow(x[i], 4);
  }
  EXPECT_NEAR(m0, 1.0, 1e-14);
  EXPECT_NEAR(m2, 1.0, 1e-13);
  EXPECT_NEAR(m4, 3.0, 1e-12);
}

TEST(Cavity, RotorEquivalenceChecksParameters) {
  const CavityConfig cfg = cavity_preset("fig6");
  DecayRun run;
  run.config = cfg;
  run.trips.resize(static_cast<std::size_t>(cfg.round_trips) + 1);
  EvolveOptions o;
  o.snapshot_kicks.clear();
  const auto wrong_k = evolve(RotorParams(2.0, cfg.nonhermiticity, cfg.beta(), 64), 2, o);
  try {
    rotor_equivalence(run, wrong_k);
    FAIL() << "expected MismatchedParams";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::MismatchedParams);
  }
}

TEST(Cavity, BlochAverageAtNarrowSpreadIsTheRotor) {
  // A very wide beam has sigma -> 0, so the average collapses to q = 0.
  CavityConfig cfg = cavity_preset("fig7");
  cfg.round_trips = 4;
  cfg.beam_waist = 1e6 * cfg.grating_period;
  cfg.grid = default_grid(cfg.grating_period, cfg.beam_waist);
  const auto avg = bloch_averaged_rotor(cfg, 64, 10);
  EvolveOptions o;
  o.snapshot_kicks = {0, 1, 2, 3, 4};
  const auto series = evolve(RotorParams(cfg.grating_amplitude, cfg.nonhermiticity, cfg.beta(), 64), 4, o);
  const auto direct = rotor_power_table(series, 4);
  for (std::size_t n = 0; n < 5; ++n) {
    for (std::size_t j = 0; j < direct.abs2[n].size(); ++j) EXPECT_NEAR(avg.abs2[n][j], direct.abs2[n][j], 1e-8);
  }
}
