#pragma once

#include <cmath>
#include <limits>

namespace photon_mux::detail {

// exp() underflows to zero below roughly -745; treat anything smaller as an
// exact zero so that astronomically suppressed terms drop out cleanly.
inline constexpr double kLogUnderflow = -745.0;

inline double exp_or_zero(double x) {
  if (std::isnan(x)) return std::numeric_limits<double>::quiet_NaN();
  return x < kLogUnderflow ? 0.0 : std::exp(x);
}

// log of the Poisson pmf lambda^n e^-lambda / n!. The lambda = 0 point is an
// explicit Kronecker-delta branch, never a numeric limit.
inline double log_poisson_pmf(double lambda, int n) {
  if (lambda <= 0.0) {
    return n == 0 ? 0.0 : -std::numeric_limits<double>::infinity();
  }
  if (!(lambda < std::numeric_limits<double>::infinity())) {
    return -std::numeric_limits<double>::infinity();
  }
  return n * std::log(lambda) - lambda - std::lgamma(n + 1.0);
}

// 1 - (1-eta)^n * e^extra with extra <= 0, evaluated through expm1 so that
// near-zero results keep full relative precision.
inline double detection_bracket(double eta, int n, double extra) {
  if (eta >= 1.0) {
    return n > 0 ? 1.0 : -std::expm1(extra);
  }
  const double arg = extra + (n > 0 ? n * std::log1p(-eta) : 0.0);
  return -std::expm1(arg);
}

}  // namespace photon_mux::detail
