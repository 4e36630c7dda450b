#include "ptrotor/model.hpp"

#include <boost/math/special_functions/bessel.hpp>

#include <cmath>
#include <sstream>

#include "ptrotor/error.hpp"
#include "ptrotor/fft.hpp"

namespace ptrotor {
namespace {

double reduce_unit(double beta) {
  double r = beta - std::floor(beta);
  if (r >= 1.0) r = 0.0;  // beta slightly below an integer can round up
  return r;
}

Rational reduce_rational(Rational r) {
  long num = r.num % r.den;
  if (num < 0) num += r.den;
  if (num == 0) return {0, 1};
  return {num, r.den};
}

double fractional(double x) {
  double f = x - std::floor(x);
  return f >= 1.0 ? 0.0 : f;
}

// |x|^2 turns of beta * x^2 with the rounding error of the product recovered.
double turns_of(double beta, double x) {
  const double x2 = x * x;
  const double p = beta * x2;
  const double e = std::fma(beta, x2, -p);
  const double whole = std::floor(p);
  return fractional((p - whole) + e);
}

void check_tail(const std::vector<cplx>& w, int n_max, const char* route) {
  const double lo = std::abs(w.front());
  const double hi = std::abs(w.back());
  if (lo >= kCoefficientDropTolerance || hi >= kCoefficientDropTolerance) {
    std::ostringstream msg;
    msg << route << " route: |W_-" << n_max << "| = " << lo << ", |W_" << n_max << "| = " << hi
        << " exceed " << kCoefficientDropTolerance << "; n_max too small for this K";
    throw Error(ErrorCode::TailNotDecayed, msg.str());
  }
}

}  // namespace

long gcd(long a, long b) noexcept {
  a = a < 0 ? -a : a;
  b = b < 0 ? -b : b;
  while (b != 0) {
    const long t = a % b;
    a = b;
    b = t;
  }
  return a;
}

RotorParams::RotorParams(double kick_strength, double nonhermiticity, double beta, int truncation)
    : kick_strength_(kick_strength),
      nonhermiticity_(nonhermiticity),
      raw_beta_(beta),
      beta_(std::isfinite(beta) ? reduce_unit(beta) : beta),
      truncation_(truncation) {
  validate();
}

RotorParams::RotorParams(double kick_strength, double nonhermiticity, Rational beta, int truncation)
    : kick_strength_(kick_strength),
      nonhermiticity_(nonhermiticity),
      raw_beta_(beta.den != 0 ? beta.value() : 0.0),
      beta_(0.0),
      raw_rational_(beta),
      truncation_(truncation) {
  if (beta.den <= 0 || beta.num < 0) {
    throw Error(ErrorCode::InvalidParameter, "rational beta needs num >= 0 and den > 0");
  }
  reduced_rational_ = reduce_rational(beta);
  beta_ = reduced_rational_->value();
  validate();
}

void RotorParams::validate() const {
  std::ostringstream msg;
  if (!(std::isfinite(kick_strength_) && kick_strength_ > 0.0)) {
    msg << "kick strength K must be positive, got " << kick_strength_;
  } else if (!(nonhermiticity_ >= 0.0 && nonhermiticity_ < 1.0)) {
    msg << "non-Hermiticity lambda must lie in [0, 1), got " << nonhermiticity_;
  } else if (!std::isfinite(raw_beta_) || raw_beta_ < 0.0) {
    msg << "beta must be finite and nonnegative, got " << raw_beta_;
  } else if (truncation_ < 1) {
    msg << "truncation N_s must be >= 1, got " << truncation_;
  } else {
    return;
  }
  throw Error(ErrorCode::InvalidParameter, msg.str());
}

RotorParams RotorParams::with_nonhermiticity(double lambda) const {
  RotorParams p = *this;
  p.nonhermiticity_ = lambda;
  p.validate();
  return p;
}

RotorParams RotorParams::with_kick_strength(double kick_strength) const {
  RotorParams p = *this;
  p.kick_strength_ = kick_strength;
  p.validate();
  return p;
}

RotorParams RotorParams::with_truncation(int truncation) const {
  RotorParams p = *this;
  p.truncation_ = truncation;
  p.validate();
  return p;
}

double RotorParams::kinetic_turns(long l) const noexcept {
  if (reduced_rational_) {
    const long m = reduced_rational_->den;
    const long l_mod = ((l % m) + m) % m;
    const long sq = (l_mod * l_mod) % m;
    const long t = (reduced_rational_->num * sq) % m;
    return static_cast<double>(t) / static_cast<double>(m);
  }
  return turns_of(beta_, static_cast<double>(l));
}

double RotorParams::kinetic_turns(long l, double quasi_momentum) const noexcept {
  if (quasi_momentum == 0.0) return kinetic_turns(l);
  return turns_of(raw_beta_, static_cast<double>(l) + quasi_momentum);
}

cplx RotorParams::free_phase(long l) const noexcept {
  return std::polar(1.0, -2.0 * kPi * kinetic_turns(l));
}

cplx RotorParams::free_phase(long l, double quasi_momentum) const noexcept {
  return std::polar(1.0, -2.0 * kPi * kinetic_turns(l, quasi_momentum));
}

GaugeForm gauge_form(const RotorParams& params) {
  const double lambda = params.nonhermiticity();
  return {params.kick_strength() * std::sqrt((1.0 - lambda) * (1.0 + lambda)), std::atanh(lambda)};
}

cplx potential_value(double x_over_a, const RotorParams& params) {
  const double phase = 2.0 * kPi * fractional(x_over_a);
  const double k = params.kick_strength();
  return {k * std::cos(phase), params.nonhermiticity() * k * std::sin(phase)};
}

KickCoefficients::KickCoefficients(int n_max, std::vector<cplx> w, double kick_strength,
                                   double nonhermiticity)
    : n_max_(n_max), w_(std::move(w)), kick_strength_(kick_strength), nonhermiticity_(nonhermiticity) {
  if (n_max < 0 || w_.size() != static_cast<std::size_t>(2 * n_max + 1)) {
    throw Error(ErrorCode::InvalidParameter, "coefficient table must hold 2 n_max + 1 values");
  }
}

cplx KickCoefficients::potential_fourier(long n) const noexcept {
  if (n == 1) return {0.5 * kick_strength_ * (1.0 + nonhermiticity_), 0.0};
  if (n == -1) return {0.5 * kick_strength_ * (1.0 - nonhermiticity_), 0.0};
  return {};
}

std::vector<cplx> KickCoefficients::potential_fourier_table() const {
  std::vector<cplx> v(w_.size());
  for (long n = -n_max_; n <= n_max_; ++n) v[static_cast<std::size_t>(n + n_max_)] = potential_fourier(n);
  return v;
}

int default_coefficient_band(const RotorParams& params) {
  const GaugeForm g = gauge_form(params);
  const double width = std::ceil(4.0 * params.kick_strength() * std::exp(g.y));
  return std::max(32, static_cast<int>(width));
}

KickCoefficients kick_coefficients(const RotorParams& params, int n_max) {
  if (n_max < 1) throw Error(ErrorCode::InvalidParameter, "n_max must be >= 1");
  const std::size_t grid =
      next_power_of_two(static_cast<std::size_t>(kCoefficientOversampling) * (2 * n_max + 1));
  Fft fft(grid);
  auto f = fft.data();
  const cplx minus_i{0.0, -1.0};
  for (std::size_t j = 0; j < grid; ++j) {
    const double x = static_cast<double>(j) / static_cast<double>(grid);
    f[j] = std::exp(minus_i * potential_value(x, params));
  }
  fft.forward();
  std::vector<cplx> w(static_cast<std::size_t>(2 * n_max + 1));
  const double inv = 1.0 / static_cast<double>(grid);
  for (long n = -n_max; n <= n_max; ++n) {
    w[static_cast<std::size_t>(n + n_max)] = f[wrap_index(n, grid)] * inv;
  }
  check_tail(w, n_max, "sampled");
  return KickCoefficients(n_max, std::move(w), params.kick_strength(), params.nonhermiticity());
}

KickCoefficients kick_coefficients_bessel(const RotorParams& params, int n_max) {
  if (n_max < 1) throw Error(ErrorCode::InvalidParameter, "n_max must be >= 1");
  const GaugeForm g = gauge_form(params);
  std::vector<cplx> w(static_cast<std::size_t>(2 * n_max + 1));
  // (-i)^n cycles through 1, -i, -1, i.
  static constexpr cplx kPowMinusI[4] = {{1, 0}, {0, -1}, {-1, 0}, {0, 1}};
  bool underflowed = false;
  for (int n = 0; n <= n_max; ++n) {
    double jn = 0.0;
    if (!underflowed) {
      jn = boost::math::cyl_bessel_j(n, g.k0_scaled);
      // Past the turning point |J_n| only decreases; stop once it underflows.
      if (jn == 0.0 && n > g.k0_scaled) underflowed = true;
    }
    for (int sign : {1, -1}) {
      if (n == 0 && sign < 0) break;
      const int m = sign * n;
      // J_{-n} = (-1)^n J_n
      const double j_m = (sign < 0 && (n % 2 == 1)) ? -jn : jn;
      double mag = 0.0;
      if (j_m != 0.0) {
        mag = std::copysign(std::exp(std::log(std::abs(j_m)) + m * g.y), j_m);
      }
      w[static_cast<std::size_t>(m + n_max)] = kPowMinusI[((m % 4) + 4) % 4] * mag;
    }
  }
  check_tail(w, n_max, "closed-form");
  return KickCoefficients(n_max, std::move(w), params.kick_strength(), params.nonhermiticity());
}

}  // namespace ptrotor
