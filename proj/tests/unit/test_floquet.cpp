#include <gtest/gtest.h>

#include <algorithm>

#include "ptrotor/error.hpp"
#include "ptrotor/eigensolve.hpp"
#include "ptrotor/floquet.hpp"

using namespace ptrotor;

namespace {

double distance_to_zero_or_pi(double phase) {
  const double a = std::abs(phase);
  return std::min(a, std::abs(kPi - a));
}

}  // namespace

TEST(Eigensolve, DiagonalizesKnownMatrix) {
  Eigen::MatrixXcd m(2, 2);
  m << cplx(2, 0), cplx(1, 0), cplx(0, 0), cplx(3, 0);
  const auto d = eigen_decompose(m, EigenvectorSides::Both);
  for (int k = 0; k < 2; ++k) {
    const Eigen::VectorXcd v = d.right.col(k);
    EXPECT_NEAR((m * v - d.values(k) * v).norm(), 0.0, 1e-14);
    const Eigen::VectorXcd u = d.left.col(k);
    EXPECT_NEAR((u.adjoint() * m - d.values(k) * u.adjoint()).norm(), 0.0, 1e-14);
  }
}

TEST(Floquet, QuasiEnergyBranch) {
  EXPECT_NEAR(std::abs(quasi_energy_from_eigenvalue(std::polar(1.0, -0.4)) - cplx(0.4, 0)), 0.0, 1e-15);
  // |mu| > 1 means growth: Im eps T > 0.
  EXPECT_GT(quasi_energy_from_eigenvalue(cplx(2.0, 0.0)).imag(), 0.0);
  EXPECT_NEAR(wrap_phase(3 * kPi), kPi, 1e-15);
  EXPECT_NEAR(wrap_phase(-kPi), kPi, 1e-15);
}

TEST(Floquet, MatrixEntriesFollowDefinition) {
  const RotorParams p(3.0, 0.1, 0.7 / (2 * kPi), 12);
  const auto m = build_floquet_matrix(p);
  const auto w = kick_coefficients_bessel(p, 64);
  for (long l : {-12L, -3L, 0L, 5L, 12L}) {
    for (long n : {-12L, -1L, 0L, 7L, 12L}) {
      EXPECT_NEAR(std::abs(m.at(l, n) - w[l - n] * p.free_phase(n)), 0.0, 1e-13);
    }
  }
  EXPECT_THROW(build_floquet_matrix(p, kick_coefficients_bessel(p, 20)), Error);
}

TEST(Floquet, HermitianCaseIsUnitaryAndReal) {
  const RotorParams p(3.0, 0.0, 0.7 / (2 * kPi), 200);
  auto s = filter_edge_states(quasi_energy_spectrum(build_floquet_matrix(p)));
  // Truncation leaves modes near the cut slightly non-unitary; the bulk stays
  // far below the detector tolerance.
  EXPECT_LT(mean_im_quasienergy(s), ThresholdOptions{}.detector_tolerance);
  EXPECT_GT(s.unflagged_count(), 0u);
  for (Eigen::Index k = 0; k < s.density.cols(); ++k) EXPECT_NEAR(s.density.col(k).sum(), 1.0, 1e-12);
}

TEST(Floquet, AntiresonanceGivesZeroOrPi) {
  for (double lambda : {0.0, 0.3}) {
    const RotorParams p(3.0, lambda, Rational{1, 2}, 60);
    const auto s = filter_edge_states(quasi_energy_spectrum(build_floquet_matrix(p)));
    for (const auto& m : s.modes) {
      if (m.edge_flagged) continue;
      EXPECT_LT(distance_to_zero_or_pi(m.eps_t.real()), 1e-10);
      EXPECT_LT(std::abs(m.eps_t.imag()), 1e-10);
    }
  }
}

TEST(Floquet, ResidualsAreSmall) {
  const RotorParams p(3.0, 0.2, 0.7 / (2 * kPi), 60);
  const auto s = quasi_energy_spectrum(build_floquet_matrix(p), {true, true});
  for (const auto& m : s.modes) EXPECT_LT(m.residual, 1e-10);
}

TEST(Floquet, ParticipationRatio) {
  const std::vector<cplx> one{0, 1, 0};
  EXPECT_DOUBLE_EQ(participation_ratio(one), 1.0);
  const std::vector<cplx> flat{1, 1, 1, 1};
  EXPECT_DOUBLE_EQ(participation_ratio(flat), 4.0);
  const std::vector<cplx> zero{0, 0};
  EXPECT_THROW(participation_ratio(zero), Error);
}

TEST(Floquet, EdgeFilterFlagsWithoutRemoving) {
  const RotorParams p(3.0, 0.1, 0.7 / (2 * kPi), 80);
  const auto raw = quasi_energy_spectrum(build_floquet_matrix(p));
  const auto f = filter_edge_states(raw, 0.1);
  EXPECT_EQ(f.modes.size(), raw.modes.size());
  EXPECT_DOUBLE_EQ(f.edge_fraction, 0.1);
  for (const auto& m : f.modes) {
    if (std::abs(m.center) > 0.9 * 80) {
      EXPECT_TRUE(m.edge_flagged);
    }
  }
}

TEST(Floquet, DetectorBrokenAtLargeLambda) {
  const RotorParams p(3.0, 0.6, 0.7 / (2 * kPi), 150);
  EXPECT_GT(pt_detector(p), 1e-4);
}

TEST(Floquet, ThresholdStatusForResonantBeta) {
  // At beta = 1/2 the detector stays at zero for every lambda.
  const auto r = pt_threshold(RotorParams(3.0, 0.0, Rational{1, 2}, 40));
  EXPECT_EQ(r.status, ThresholdStatus::UnbrokenAcrossBracket);
  EXPECT_EQ(r.lambda_pt, kUnbrokenSentinel);
  EXPECT_TRUE(std::is_sorted(r.scan.begin(), r.scan.end(),
                             [](const DetectorSample& a, const DetectorSample& b) { return a.lambda < b.lambda; }));
}

TEST(Floquet, ThresholdEstimateScales) {
  const auto e = estimate_threshold_small_lambda(RotorParams(4.0, 0.0, 0.1, 10));
  EXPECT_DOUBLE_EQ(e.lambda_scale, 0.25);
  EXPECT_DOUBLE_EQ(e.localization_length, 4.0);
}

TEST(Bands, HermitianBandsAreReal) {
  const auto b = resonance_bands(RotorParams(3.0, 0.0, Rational{1, 12}, 16), 41);
  ASSERT_EQ(b.period, 12);
  ASSERT_EQ(b.bands.size(), 12u);
  ASSERT_EQ(b.q.size(), 41u);
  EXPECT_NEAR(b.q.front(), -kPi / 12, 1e-15);
  for (const auto& band : b.bands) {
    for (const cplx& e : band) EXPECT_LT(std::abs(e.imag()), 1e-10);
  }
}

TEST(Bands, BlochMatrixIsUnitaryWhenHermitian) {
  const RotorParams p(3.0, 0.0, Rational{1, 3}, 16);
  const auto w = kick_coefficients_bessel(p, 64);
  const Eigen::MatrixXcd s = bloch_matrix(p, w, 0.37);
  EXPECT_NEAR((s.adjoint() * s - Eigen::MatrixXcd::Identity(3, 3)).norm(), 0.0, 1e-12);
}

TEST(Bands, RejectsNonCoprimeAndDecimalBeta) {
  try {
    resonance_bands(RotorParams(3.0, 0.1, Rational{2, 12}, 16), 11);
    FAIL() << "expected NotCoprime";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotCoprime);
  }
  EXPECT_THROW(resonance_bands(RotorParams(3.0, 0.1, 0.25, 16), 11), Error);
}
