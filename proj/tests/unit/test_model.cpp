#include <gtest/gtest.h>

#include "oracles.hpp"
#include "ptrotor/error.hpp"
#include "ptrotor/fft.hpp"
#include "ptrotor/fit.hpp"
#include "ptrotor/model.hpp"

using namespace ptrotor;

TEST(RotorParams, ReducesBetaModuloOne) {
  const RotorParams p(3.0, 0.1, 1.25, 10);
  EXPECT_DOUBLE_EQ(p.beta(), 0.25);
  EXPECT_DOUBLE_EQ(p.raw_beta(), 1.25);
  EXPECT_EQ(p.dimension(), 21);

  const RotorParams r(3.0, 0.1, Rational{13, 12}, 10);
  ASSERT_TRUE(r.rational_beta());
  EXPECT_EQ(*r.rational_beta(), (Rational{1, 12}));
  EXPECT_EQ(*r.raw_rational_beta(), (Rational{13, 12}));
}

TEST(RotorParams, MainResonanceReducesToZero) {
  EXPECT_EQ(RotorParams(3.0, 0.1, 1.0, 8).beta(), 0.0);
  EXPECT_EQ(RotorParams(3.0, 0.1, Rational{2, 2}, 8).beta(), 0.0);
}

TEST(RotorParams, RejectsInvalidInput) {
  EXPECT_THROW(RotorParams(3.0, 1.0, 0.1, 10), Error);
  EXPECT_THROW(RotorParams(3.0, -0.1, 0.1, 10), Error);
  EXPECT_THROW(RotorParams(-1.0, 0.1, 0.1, 10), Error);
  EXPECT_THROW(RotorParams(3.0, 0.1, 0.1, 0), Error);
  EXPECT_THROW(RotorParams(3.0, 0.1, Rational{1, 0}, 10), Error);
  try {
    RotorParams(3.0, 1.5, 0.1, 10);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidParameter);
  }
}

TEST(RotorParams, KineticTurnsExactForRationalBeta) {
  // beta = 1/12: l = 1e6 gives l^2/12 with a fractional part of exactly 1/3.
  const RotorParams p(3.0, 0.0, Rational{1, 12}, 4);
  EXPECT_NEAR(p.kinetic_turns(1000000), 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(p.kinetic_turns(-6), 0.0, 0.0);
  EXPECT_NEAR(std::abs(p.free_phase(6) - cplx(1.0, 0.0)), 0.0, 1e-15);
}

TEST(GaugeForm, MatchesDefinition) {
  const RotorParams p(3.0, 0.3, 0.1, 4);
  const GaugeForm g = gauge_form(p);
  EXPECT_NEAR(g.k0_scaled, 3.0 * std::sqrt(1 - 0.09), 1e-15);
  EXPECT_NEAR(g.y, 0.5 * std::log(1.3 / 0.7), 1e-15);
  // K0 cos(theta - i y) = K (cos theta + i lambda sin theta)
  for (double x : {0.0, 0.13, 0.5, 0.77}) {
    const cplx displaced = g.k0_scaled * std::cos(cplx(2 * kPi * x, -g.y));
    EXPECT_NEAR(std::abs(potential_value(x, p) - displaced), 0.0, 1e-13);
  }
}

class KickCoefficientCases : public ::testing::TestWithParam<std::pair<double, double>> {};

TEST_P(KickCoefficientCases, ClosedFormMatchesSeriesOracle) {
  const auto [K, lambda] = GetParam();
  const RotorParams p(K, lambda, 0.1, 8);
  const int n_max = default_coefficient_band(p);
  const auto w = kick_coefficients_bessel(p, n_max);
  for (int n = -20; n <= 20; ++n) {
    const cplx ref = oracle::kick_coefficient(n, K, lambda);
    EXPECT_NEAR(std::abs(w[n] - ref), 0.0, 1e-12 * std::max(1.0, std::abs(ref))) << "n = " << n;
  }
}

TEST_P(KickCoefficientCases, SampledRouteAgreesWithClosedForm) {
  const auto [K, lambda] = GetParam();
  const RotorParams p(K, lambda, 0.1, 8);
  const int n_max = default_coefficient_band(p);
  const auto a = kick_coefficients(p, n_max);
  const auto b = kick_coefficients_bessel(p, n_max);
  for (long n = -n_max; n <= n_max; ++n) EXPECT_NEAR(std::abs(a[n] - b[n]), 0.0, 1e-10) << "n = " << n;
}

INSTANTIATE_TEST_SUITE_P(Model, KickCoefficientCases,
                         ::testing::Values(std::pair{3.0, 0.0}, std::pair{3.0, 0.1}, std::pair{3.0, 1.0 / 30},
                                           std::pair{5.0, 0.5}, std::pair{1.0, 0.9}));

TEST(KickCoefficients, PotentialFourierComponents) {
  const RotorParams p(3.0, 0.2, 0.1, 8);
  const auto w = kick_coefficients_bessel(p, 32);
  EXPECT_NEAR(std::abs(w.potential_fourier(1) - cplx(1.5 * 1.2, 0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(w.potential_fourier(-1) - cplx(1.5 * 0.8, 0)), 0.0, 1e-15);
  EXPECT_EQ(w.potential_fourier(0), cplx{});
  EXPECT_EQ(w.potential_fourier(2), cplx{});
  EXPECT_EQ(w[40], cplx{});
}

TEST(KickCoefficients, TooNarrowBandThrows) {
  const RotorParams p(3.0, 0.1, 0.1, 8);
  try {
    kick_coefficients_bessel(p, 4);
    FAIL() << "expected TailNotDecayed";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::TailNotDecayed);
  }
  EXPECT_THROW(kick_coefficients(p, 4), Error);
}

TEST(Fft, RoundTripAndDirection) {
  Fft fft(16);
  auto d = fft.data();
  for (std::size_t j = 0; j < 16; ++j) d[j] = std::polar(1.0, 2 * kPi * 3.0 * static_cast<double>(j) / 16.0);
  fft.forward();
  EXPECT_NEAR(std::abs(d[3] - cplx(16.0, 0.0)), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(d[5]), 0.0, 1e-12);
  fft.backward();
  for (std::size_t j = 0; j < 16; ++j) {
    EXPECT_NEAR(std::abs(d[j] / 16.0 - std::polar(1.0, 2 * kPi * 3.0 * static_cast<double>(j) / 16.0)), 0.0, 1e-13);
  }
  EXPECT_EQ(next_power_of_two(17), 32u);
  EXPECT_EQ(next_power_of_two(32), 32u);
  EXPECT_EQ(wrap_index(-1, 8), 7u);
  EXPECT_EQ(wrap_index(9, 8), 1u);
}

TEST(Fit, LineAndDegenerateInput) {
  const std::vector<double> x{1, 2, 3, 4};
  const std::vector<double> y{3, 5, 7, 9};
  const LineFit f = fit_line(x, y);
  EXPECT_NEAR(f.slope, 2.0, 1e-14);
  EXPECT_NEAR(f.intercept, 1.0, 1e-14);
  const std::vector<double> flat{2, 2, 2, 2};
  EXPECT_THROW(fit_line(flat, y), Error);
}

TEST(Gcd, Basics) {
  EXPECT_EQ(gcd(12, 18), 6);
  EXPECT_EQ(gcd(1, 12), 1);
  EXPECT_EQ(gcd(-4, 6), 2);
}
