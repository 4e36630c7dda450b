#pragma once

#include <complex>
#include <optional>
#include <span>
#include <vector>

namespace ptrotor {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.141592653589793238462643383279502884;

/// Exact rational kicking parameter N/M, kept as written (not auto-reduced) so
/// that band computations can reject non-coprime input.
struct Rational {
  long num = 0;
  long den = 1;

  double value() const noexcept { return static_cast<double>(num) / static_cast<double>(den); }
  friend bool operator==(const Rational&, const Rational&) = default;
};

/// Dimensionless kicked-rotor model: kick strength K = V0/hbar, non-Hermiticity
/// lambda in [0, 1), kicking parameter beta and momentum truncation N_s
/// (indices l in [-N_s, N_s]). Time is measured in kick periods.
///
/// beta is reduced modulo 1 at construction; the reduced value lies in [0, 1),
/// where 0 stands for the main resonance beta = 1. The raw input is retained.
class RotorParams {
 public:
  RotorParams(double kick_strength, double nonhermiticity, double beta, int truncation);
  RotorParams(double kick_strength, double nonhermiticity, Rational beta, int truncation);

  double kick_strength() const noexcept { return kick_strength_; }
  double nonhermiticity() const noexcept { return nonhermiticity_; }
  double beta() const noexcept { return beta_; }
  double raw_beta() const noexcept { return raw_beta_; }
  /// Reduced exact fraction (num in [0, den)) when beta was given as N/M.
  const std::optional<Rational>& rational_beta() const noexcept { return reduced_rational_; }
  /// The fraction as it was supplied.
  const std::optional<Rational>& raw_rational_beta() const noexcept { return raw_rational_; }
  int truncation() const noexcept { return truncation_; }
  int dimension() const noexcept { return 2 * truncation_ + 1; }

  RotorParams with_nonhermiticity(double lambda) const;
  RotorParams with_kick_strength(double kick_strength) const;
  RotorParams with_truncation(int truncation) const;

  /// Fractional part of beta * l^2, in [0, 1). Exact for rational beta.
  double kinetic_turns(long l) const noexcept;
  /// Fractional part of raw_beta * (l + quasi_momentum)^2.
  double kinetic_turns(long l, double quasi_momentum) const noexcept;
  /// Free-propagation factor exp(-2 pi i beta l^2).
  cplx free_phase(long l) const noexcept;
  cplx free_phase(long l, double quasi_momentum) const noexcept;

  friend bool operator==(const RotorParams&, const RotorParams&) = default;

 private:
  void validate() const;

  double kick_strength_;
  double nonhermiticity_;
  double raw_beta_;
  double beta_;
  std::optional<Rational> raw_rational_;
  std::optional<Rational> reduced_rational_;
  int truncation_;
};

/// Hermitian-equivalent (displaced cosine) form of the potential:
/// V(x)/hbar = k0_scaled * cos(2 pi x/a - i y).
struct GaugeForm {
  double k0_scaled;  ///< K sqrt(1 - lambda^2)
  double y;          ///< atanh(lambda)
};

GaugeForm gauge_form(const RotorParams& params);

/// V(x)/hbar = K [cos(2 pi x/a) + i lambda sin(2 pi x/a)], periodic in x/a.
cplx potential_value(double x_over_a, const RotorParams& params);

inline constexpr double kCoefficientDropTolerance = 1e-12;
inline constexpr int kCoefficientOversampling = 8;

/// Fourier coefficients W_n of the one-kick factor exp[-i V(x)/hbar] for
/// n in [-n_max, n_max], plus the two nonzero coefficients of V(x)/hbar.
class KickCoefficients {
 public:
  KickCoefficients(int n_max, std::vector<cplx> w, double kick_strength, double nonhermiticity);

  int n_max() const noexcept { return n_max_; }
  /// W_n; zero outside [-n_max, n_max].
  cplx operator[](long n) const noexcept {
    return (n < -n_max_ || n > n_max_) ? cplx{} : w_[static_cast<std::size_t>(n + n_max_)];
  }
  /// Values indexed by n + n_max.
  std::span<const cplx> values() const noexcept { return w_; }
  /// V_n/hbar: (K/2)(1 +- lambda) at n = +-1, zero elsewhere.
  cplx potential_fourier(long n) const noexcept;
  /// V_n/hbar for n in [-n_max, n_max], indexed by n + n_max.
  std::vector<cplx> potential_fourier_table() const;

 private:
  int n_max_;
  std::vector<cplx> w_;
  double kick_strength_;
  double nonhermiticity_;
};

/// max(32, ceil(4 K e^y)).
int default_coefficient_band(const RotorParams& params);

/// Sampled route: exp[-iV/hbar] on a uniform grid of at least
/// 8 (2 n_max + 1) points, then a DFT. Throws TailNotDecayed when
/// |W_{+-n_max}| >= 1e-12.
KickCoefficients kick_coefficients(const RotorParams& params, int n_max);

/// Closed form W_n = (-i)^n J_n(K sqrt(1 - lambda^2)) e^{n y}. Same tail check.
KickCoefficients kick_coefficients_bessel(const RotorParams& params, int n_max);

/// Largest common divisor, used for N/M validation.
long gcd(long a, long b) noexcept;

}  // namespace ptrotor
