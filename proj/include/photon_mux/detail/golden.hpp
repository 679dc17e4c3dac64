#pragma once

#include <cmath>
#include <utility>

namespace photon_mux::detail {

// Golden-section maximization of a unimodal function on [lo, hi].
// Stops when the bracket is narrower than rel_tol * max(|mid|, floor).
template <typename F>
double golden_max(F&& f, double lo, double hi, double rel_tol, double abs_floor = 1e-300) {
  constexpr double kInvPhi = 0.6180339887498949;
  double a = lo, b = hi;
  double x1 = b - kInvPhi * (b - a);
  double x2 = a + kInvPhi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < 200; ++it) {
    if (b - a <= rel_tol * std::max(std::abs(0.5 * (a + b)), abs_floor)) break;
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kInvPhi * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kInvPhi * (b - a);
      f1 = f(x1);
    }
  }
  return f1 > f2 ? x1 : x2;
}

}  // namespace photon_mux::detail
