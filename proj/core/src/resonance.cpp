#include "ptrotor/resonance.hpp"

#include <cmath>
#include <sstream>

#include "ptrotor/error.hpp"
#include "ptrotor/fft.hpp"

namespace ptrotor {
namespace {

void require_main_resonance(const RotorParams& params) {
  if (params.beta() != 0.0) {
    std::ostringstream msg;
    msg << "main-resonance analytics need beta = 1, got reduced beta " << params.beta();
    throw Error(ErrorCode::InvalidParameter, msg.str());
  }
}

// Past this exponent the integrand is rescaled by exp(-log_scale).
constexpr double kMaxUnscaledGrowth = 300.0;

ResonanceState quadrature(const RotorParams& params, long n, std::size_t nodes) {
  Fft fft(nodes);
  auto f = fft.data();
  const cplx minus_i_n{0.0, -static_cast<double>(n)};
  const double growth = static_cast<double>(n) * params.kick_strength() * params.nonhermiticity();
  const double log_scale = growth > kMaxUnscaledGrowth ? growth : 0.0;
  for (std::size_t j = 0; j < nodes; ++j) {
    const double q = -kPi + 2.0 * kPi * static_cast<double>(j) / static_cast<double>(nodes);
    f[j] = std::exp(minus_i_n * dispersion_value(params, q) - log_scale);
  }
  fft.backward();
  const long half = static_cast<long>(nodes / 2);
  ResonanceState out{-half, std::vector<cplx>(nodes), nodes, log_scale};
  const double inv = 1.0 / static_cast<double>(nodes);
  for (long l = -half; l < half; ++l) {
    // q_j = -pi + 2 pi j / Q contributes e^{-i pi l} = (-1)^l
    const double sign = (l % 2 == 0) ? inv : -inv;
    out.amplitudes[static_cast<std::size_t>(l + half)] = f[wrap_index(l, nodes)] * sign;
  }
  return out;
}

}  // namespace

cplx dispersion_value(const RotorParams& params, double q) {
  const GaugeForm g = gauge_form(params);
  return g.k0_scaled * std::cos(cplx{q, g.y});
}

Dispersion dispersion(const RotorParams& params, int q_count) {
  require_main_resonance(params);
  if (q_count < 4 || q_count % 4 != 0) throw Error(ErrorCode::InvalidParameter, "q_count must be a positive multiple of 4");
  const GaugeForm g = gauge_form(params);
  Dispersion d;
  d.q.resize(static_cast<std::size_t>(q_count));
  d.eps.resize(static_cast<std::size_t>(q_count));
  for (int k = 0; k < q_count; ++k) {
    const double q = -kPi + 2.0 * kPi * static_cast<double>(k) / static_cast<double>(q_count);
    d.q[static_cast<std::size_t>(k)] = q;
    d.eps[static_cast<std::size_t>(k)] = dispersion_value(params, q);
  }
  d.q0 = -0.5 * kPi;
  // eps'(q) = -K0 sin(q + iy), eps''(q) = -K0 cos(q + iy), evaluated at -pi/2.
  d.group_velocity = g.k0_scaled * std::cosh(g.y);
  d.curvature = cplx{0.0, -g.k0_scaled * std::sinh(g.y)};
  d.max_growth = g.k0_scaled * std::sinh(g.y);
  return d;
}

ResonanceState exact_resonance_state(const RotorParams& params, long n) {
  require_main_resonance(params);
  if (n < 0) throw Error(ErrorCode::InvalidParameter, "kick count must be >= 0");
  const GaugeForm g = gauge_form(params);
  const double reach = static_cast<double>(n) * params.kick_strength() * std::exp(g.y);
  std::size_t nodes = next_power_of_two(16 * static_cast<std::size_t>(std::ceil(reach / kPi)) + 64);

  ResonanceState coarse = quadrature(params, n, nodes);
  for (int doubling = 0; doubling < 6; ++doubling) {
    ResonanceState fine = quadrature(params, n, 2 * nodes);
    double peak = 0.0;
    for (const cplx& c : fine.amplitudes) peak = std::max(peak, std::abs(c));
    double change = 0.0;
    for (long l = coarse.l_min; l <= coarse.l_max(); ++l) {
      change = std::max(change, std::abs(std::abs(fine.scaled(l)) - std::abs(coarse.scaled(l))));
    }
    if (change <= kQuadratureTolerance * peak) return fine;
    coarse = std::move(fine);
    nodes *= 2;
  }
  std::ostringstream msg;
  msg << "quadrature for n = " << n << " did not settle by " << nodes << " nodes";
  throw Error(ErrorCode::QuadratureUnresolved, msg.str());
}

double asymptotic_profile(const RotorParams& params, long l, long n) {
  require_main_resonance(params);
  if (n < 1) throw Error(ErrorCode::InvalidParameter, "asymptotic profile needs n >= 1");
  const Dispersion d = dispersion(params, 4);
  const double c = std::abs(d.curvature);
  if (c == 0.0) throw Error(ErrorCode::InvalidParameter, "saddle is degenerate at lambda = 0");
  const double t = static_cast<double>(n);
  const double drift = static_cast<double>(l) - d.group_velocity * t;
  return std::exp(2.0 * d.max_growth * t - drift * drift / (c * t)) / (2.0 * kPi * c * t);
}

}  // namespace ptrotor
