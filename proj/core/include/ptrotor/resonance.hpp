#pragma once

#include <cmath>
#include <vector>

#include "ptrotor/model.hpp"

namespace ptrotor {

/// Single band of the main resonance beta = 1, per kick:
/// eps(q) = K0 cos(q + i y).
struct Dispersion {
  std::vector<double> q;  ///< uniform over [-pi, pi)
  std::vector<cplx> eps;
  double q0;              ///< saddle, -pi/2
  double group_velocity;  ///< d eps/dq at q0 = K0 cosh y = K
  cplx curvature;         ///< d^2 eps/dq^2 at q0 = -i K0 sinh y
  double max_growth;      ///< Im eps(q0) = K0 sinh y = lambda K
};

cplx dispersion_value(const RotorParams& params, double q);

/// Requires beta == 1 (reduced beta 0). q_count must be a multiple of 4 so
/// that q0 lies on the grid.
Dispersion dispersion(const RotorParams& params, int q_count = 256);

/// psi_l(n) for the initial condition delta_{l,0} at beta = 1, stored as
/// psi_l = amplitudes[l - l_min] * exp(log_scale). log_scale is nonzero only
/// when the growth e^{lambda K n} would overflow a double.
struct ResonanceState {
  long l_min;
  std::vector<cplx> amplitudes;
  std::size_t nodes;  ///< quadrature nodes of the accepted result
  double log_scale = 0.0;

  long l_max() const noexcept { return l_min + static_cast<long>(amplitudes.size()) - 1; }
  cplx scaled(long l) const noexcept {
    return (l < l_min || l > l_max()) ? cplx{} : amplitudes[static_cast<std::size_t>(l - l_min)];
  }
  /// Unscaled psi_l(n); may overflow when log_scale != 0.
  cplx at(long l) const noexcept { return log_scale == 0.0 ? scaled(l) : scaled(l) * std::exp(log_scale); }
};

inline constexpr double kQuadratureTolerance = 1e-10;

/// psi_l(n) = (1/2 pi) int dq exp[i q l - i eps(q) n] by the periodic
/// trapezoidal rule. Starts at nextpow2(16 ceil(n K e^y / pi) + 64) nodes and doubles
/// until |psi_l| moves by less than 1e-10 of its maximum; throws
/// QuadratureUnresolved if that never happens.
ResonanceState exact_resonance_state(const RotorParams& params, long n);

/// Saddle-point (Gaussian) approximation of |psi_l(n)|^2, valid for n >> 1:
/// exp(2 Im eps(q0) n) exp(-(l - v_g n)^2 / (|eps''| n)) / (2 pi |eps''| n).
/// Needs lambda > 0 (the saddle degenerates at lambda = 0).
double asymptotic_profile(const RotorParams& params, long l, long n);

}  // namespace ptrotor
