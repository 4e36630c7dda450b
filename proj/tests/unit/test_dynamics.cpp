#include <gtest/gtest.h>

#include "ptrotor/error.hpp"
#include "ptrotor/dynamics.hpp"
#include "ptrotor/floquet.hpp"

using namespace ptrotor;

TEST(Dynamics, LocalizedInitialState) {
  const auto s = MomentumState::localized(5);
  EXPECT_EQ(s.amplitudes.size(), 11u);
  EXPECT_EQ(s.at(0), cplx(1.0, 0.0));
  EXPECT_EQ(s.kick_count, 0);
  const auto o = observe(s);
  EXPECT_DOUBLE_EQ(o.norm, 1.0);
  EXPECT_DOUBLE_EQ(o.mean_l, 0.0);
  EXPECT_DOUBLE_EQ(o.spread, 0.0);
}

TEST(Dynamics, KickStepMatchesMatrixProduct) {
  const RotorParams p(3.0, 0.2, 0.7 / (2 * kPi), 48);
  const auto m = build_floquet_matrix(p);
  MomentumState s = MomentumState::localized(48);
  s.amplitudes[47] = cplx(0.3, -0.2);
  KickPropagator prop(p);
  Eigen::VectorXcd v = Eigen::Map<Eigen::VectorXcd>(s.amplitudes.data(), 97);
  for (int n = 0; n < 5; ++n) {
    prop.step(s);
    v = m.entries * v;
  }
  EXPECT_EQ(s.kick_count, 5);
  double worst = 0.0;
  for (int j = 0; j < 97; ++j) worst = std::max(worst, std::abs(s.amplitudes[static_cast<std::size_t>(j)] - v(j)));
  EXPECT_LT(worst, 1e-12);
}

TEST(Dynamics, HermitianEvolutionConservesNorm) {
  const auto series = evolve(RotorParams(3.0, 0.0, 0.7 / (2 * kPi), 128), 60);
  ASSERT_EQ(series.samples.size(), 61u);
  for (const auto& o : series.samples) EXPECT_NEAR(o.norm, 1.0, 1e-12);
}

TEST(Dynamics, QuasiMomentumZeroIsTheRotor) {
  const RotorParams p(3.0, 0.1, 1.0 / (4 * kPi), 64);
  EvolveOptions a;
  a.snapshot_kicks = {10};
  a.keep_amplitudes = true;
  EvolveOptions b = a;
  b.quasi_momentum = 0.0;
  const auto sa = evolve(p, 10, a);
  const auto sb = evolve(p, 10, b);
  ASSERT_NE(sa.snapshot_at(10), nullptr);
  EXPECT_EQ(*sa.snapshot_at(10)->amplitudes, *sb.snapshot_at(10)->amplitudes);
  EXPECT_EQ(sa.snapshot_at(3), nullptr);
}

TEST(Dynamics, SpillGuardThrows) {
  // Linear growth at beta = 1 runs past a tiny basis quickly.
  const RotorParams p(3.0, 0.0, 1.0, 20);
  try {
    evolve(p, 50);
    FAIL() << "expected SpillExceeded";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SpillExceeded);
  }
}

TEST(Dynamics, SpillFraction) {
  MomentumState s = MomentumState::localized(10);
  s.amplitudes[0] = cplx(1.0, 0.0);
  EXPECT_NEAR(spill_fraction(s), 0.5, 1e-15);
}

TEST(Dynamics, SpreadingExponentFit) {
  ObservableSeries s{RotorParams(3.0, 0.0, 0.1, 4), 0.0, {}, {}};
  for (long n = 0; n <= 100; ++n) {
    const double spread = 2.0 * std::pow(static_cast<double>(std::max(n, 1L)), 0.5);
    s.samples.push_back({n, 1.0, 0.0, spread, spread});
  }
  EXPECT_NEAR(spreading_exponent(s, 10, 100), 0.5, 1e-12);
}

TEST(Dynamics, AntiresonanceRevivesAfterTwoKicks) {
  // beta = 1/2: U^2 is the identity up to a global phase.
  const RotorParams p(3.0, 0.3, Rational{1, 2}, 80);
  EvolveOptions o;
  o.snapshot_kicks = {2};
  o.keep_amplitudes = true;
  const auto s = evolve(p, 2, o);
  const auto& a = *s.snapshot_at(2)->amplitudes;
  EXPECT_NEAR(std::abs(a[80]), 1.0, 1e-12);
  EXPECT_NEAR(s.samples[2].spread, 0.0, 1e-6);
}
