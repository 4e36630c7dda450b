#include <gtest/gtest.h>

#include <random>

#include "ptrotor/dynamics.hpp"
#include "ptrotor/floquet.hpp"
#include "ptrotor/model.hpp"

using namespace ptrotor;

// Randomized invariants over many parameter draws. Seeds are fixed so the
// draws are reproducible.
namespace {

struct Draw {
  double K;
  double lambda;
  double beta;
};

std::vector<Draw> draws(unsigned seed, int count) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> k(0.5, 5.0), lam(0.0, 0.8), beta(0.0, 1.0);
  std::vector<Draw> out;
  for (int i = 0; i < count; ++i) out.push_back({k(rng), lam(rng), beta(rng)});
  return out;
}

}  // namespace

TEST(Properties, ImaginaryGaugeRelatesCoefficients) {
  // W_n(K, lambda) = e^{n y} W_n(K0, 0)
  for (const Draw& d : draws(11, 25)) {
    const RotorParams p(d.K, d.lambda, d.beta, 8);
    const GaugeForm g = gauge_form(p);
    const RotorParams h(g.k0_scaled, 0.0, d.beta, 8);
    const int band = default_coefficient_band(p);
    const auto w = kick_coefficients_bessel(p, band);
    const auto w0 = kick_coefficients_bessel(h, band);
    for (long n = -10; n <= 10; ++n) {
      const cplx ref = std::exp(g.y * static_cast<double>(n)) * w0[n];
      EXPECT_NEAR(std::abs(w[n] - ref), 0.0, 1e-13 * std::max(1.0, std::abs(ref)));
    }
  }
}

TEST(Properties, HermitianKickIsUnitary) {
  for (const Draw& d : draws(23, 15)) {
    const RotorParams p(d.K, 0.0, d.beta, 40);
    MomentumState s = MomentumState::localized(40);
    KickPropagator prop(p);
    for (int n = 0; n < 4; ++n) prop.step(s);
    EXPECT_NEAR(observe(s).norm, 1.0, 1e-12) << "K " << d.K << " beta " << d.beta;
  }
}

TEST(Properties, BandsClosedUnderPtConjugation) {
  // The M x M Bloch matrix has no truncation, so PT symmetry pairs every
  // quasi-energy with its conjugate: the imaginary parts cancel at each q.
  std::mt19937_64 rng(37);
  std::uniform_int_distribution<long> den(2, 9);
  for (const Draw& d : draws(37, 8)) {
    const long m = den(rng);
    std::uniform_int_distribution<long> num(1, m - 1);
    long n = num(rng);
    while (gcd(n, m) != 1) n = num(rng);
    const auto b = resonance_bands(RotorParams(d.K, d.lambda, Rational{n, m}, 16), 9);
    for (std::size_t k = 0; k < b.q.size(); ++k) {
      double sum_im = 0.0;
      double scale = 0.0;
      for (const auto& band : b.bands) {
        sum_im += band[k].imag();
        scale += std::abs(band[k].imag());
      }
      EXPECT_LE(std::abs(sum_im), 1e-10 * std::max(1.0, scale)) << "beta " << n << "/" << m << " lambda " << d.lambda;
    }
  }
}

TEST(Properties, QuasiEnergyLiesOnPrincipalBranch) {
  for (const Draw& d : draws(41, 6)) {
    const RotorParams p(d.K, d.lambda, d.beta, 25);
    const auto s = quasi_energy_spectrum(build_floquet_matrix(p), {false, false});
    for (const auto& m : s.modes) {
      EXPECT_GT(m.eps_t.real(), -kPi - 1e-15);
      EXPECT_LE(m.eps_t.real(), kPi + 1e-15);
      EXPECT_NEAR(std::abs(m.multiplier() - std::exp(cplx(0, -1) * m.eps_t)), 0.0, 1e-12);
    }
  }
}

TEST(Properties, BetaShiftByIntegerLeavesDynamicsUnchanged) {
  for (const Draw& d : draws(59, 5)) {
    EvolveOptions o;
    o.snapshot_kicks = {6};
    o.keep_amplitudes = true;
    const auto a = evolve(RotorParams(d.K, d.lambda, d.beta, 64), 6, o);
    const auto b = evolve(RotorParams(d.K, d.lambda, d.beta + 3.0, 64), 6, o);
    const auto& x = *a.snapshot_at(6)->amplitudes;
    const auto& y = *b.snapshot_at(6)->amplitudes;
    for (std::size_t j = 0; j < x.size(); ++j) EXPECT_NEAR(std::abs(x[j] - y[j]), 0.0, 1e-9 * std::max(1.0, std::abs(x[j])));
  }
}
