#pragma once

#include <cmath>
#include <complex>

// Reference values computed independently of the library.
namespace oracle {

// J_n(x) from the ascending series in long double; fine for |x| < ~20.
inline double bessel_j(int n, double x) {
  const bool negate = n < 0 && (n % 2 != 0);
  n = std::abs(n);
  long double term = 1.0L;
  for (int k = 1; k <= n; ++k) term *= static_cast<long double>(x) / (2.0L * k);
  long double sum = term;
  const long double q = -static_cast<long double>(x) * x / 4.0L;
  for (int k = 1; k < 400; ++k) {
    term *= q / (static_cast<long double>(k) * (k + n));
    sum += term;
    if (std::fabs(term) < 1e-30L * std::fabs(sum) && k > 10) break;
  }
  return static_cast<double>(negate ? -sum : sum);
}

// (-i)^n J_n(K sqrt(1 - lambda^2)) e^{n atanh(lambda)}
inline std::complex<double> kick_coefficient(int n, double K, double lambda) {
  static const std::complex<double> minus_i{0.0, -1.0};
  std::complex<double> phase = 1.0;
  for (int k = 0; k < ((n % 4) + 4) % 4; ++k) phase *= minus_i;
  return phase * bessel_j(n, K * std::sqrt(1.0 - lambda * lambda)) * std::exp(n * std::atanh(lambda));
}

// Paraxial Gaussian beam exp(-x^2/w0^2) after diffracting over a distance z,
// for fields evolving as exp(+i z/(2k) d^2/dx^2).
inline std::complex<double> gaussian_beam(double x, double w0, double wavelength, double z) {
  const double pi = 3.141592653589793238462643383279502884;
  const double rayleigh = pi * w0 * w0 / wavelength;
  const std::complex<double> g{1.0, z / rayleigh};
  return std::exp(-x * x / (w0 * w0 * g)) / std::sqrt(g);
}

}  // namespace oracle
