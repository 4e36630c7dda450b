#pragma once

#include <span>

namespace ptrotor {

struct LineFit {
  double slope;
  double intercept;
};

/// Ordinary least squares y = slope x + intercept. Needs >= 2 distinct x.
LineFit fit_line(std::span<const double> x, std::span<const double> y);

}  // namespace ptrotor
