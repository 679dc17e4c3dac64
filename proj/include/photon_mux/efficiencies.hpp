#pragma once

#include <stdexcept>

namespace photon_mux {

// Detector efficiency and per-router transmissivity of a scenario.
//
// eta is the probability that an idler photon produces a herald trigger,
// gamma the probability that a signal photon survives one binary router.
// gamma = 0 is rejected as degenerate: channel pump compensation scales as
// gamma^-k and would produce NaNs throughout.
struct Efficiencies {
  double eta = 1.0;
  double gamma = 1.0;

  Efficiencies() = default;
  Efficiencies(double eta_, double gamma_) : eta(eta_), gamma(gamma_) {
    if (!(eta >= 0.0 && eta <= 1.0)) {
      throw std::invalid_argument("detection efficiency eta must be in [0, 1]");
    }
    if (!(gamma > 0.0 && gamma <= 1.0)) {
      throw std::invalid_argument("router transmissivity gamma must be in (0, 1]");
    }
  }

  friend bool operator==(const Efficiencies&, const Efficiencies&) = default;
};

}  // namespace photon_mux
