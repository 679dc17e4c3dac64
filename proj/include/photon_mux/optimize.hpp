#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "photon_mux/analytic.hpp"
#include "photon_mux/detail/golden.hpp"

// SNR-constrained performance index: the largest one-photon probability a
// scheme can reach while guaranteeing SNR >= theta, optimized over the pump.

namespace photon_mux {

struct OptResult {
  double mu_star = 0.0;      // optimizing pump
  double p1_bar = 0.0;       // P(N = 1) at mu_star
  double snr_at_opt = 0.0;   // achieved SNR, >= theta up to solver tolerance
  double theta = 0.0;
  long long chosen_m = 1;    // crystal count actually used
  bool snr_monotone = true;  // false if the sampled SNR curve was not decreasing
};

struct SnrRoot {
  double mu_theta = 0.0;  // pump with SNR(mu_theta) ~= theta, biased to the feasible side
  double bracket_hi = 0.0;
  bool monotone = true;
};

namespace detail {

inline void require_theta(double theta) {
  if (!(theta > 0.0) || !std::isfinite(theta)) {
    throw std::invalid_argument("SNR threshold theta must be finite and > 0");
  }
}

inline bool snr_nonincreasing(const SchemeModel& model, double lo, double hi) {
  constexpr int kSamples = 48;
  const double ratio = std::pow(hi / lo, 1.0 / (kSamples - 1));
  double mu = lo;
  double prev = model.snr(mu);
  for (int i = 1; i < kSamples; ++i) {
    mu *= ratio;
    const double cur = model.snr(std::min(mu, hi));
    if (std::isfinite(prev) && cur > prev * (1.0 + 1e-9)) return false;
    prev = cur;
  }
  return true;
}

}  // namespace detail

// Finds the pump where the scheme's SNR crosses theta. SNR is unbounded for
// vanishing pump and drops to zero for strong pump, so the root is bracketed
// by doubling and then bisected; the returned endpoint keeps SNR >= theta.
inline SnrRoot solve_snr_threshold(const SchemeModel& model, double theta) {
  detail::require_theta(theta);
  double lo = 1e-12;
  while (model.snr(lo) < theta) {
    lo *= 1e-3;
    if (lo < 1e-250) throw std::runtime_error("solve_snr_threshold: SNR below theta even at vanishing pump");
  }
  double hi = std::max(1.0, 2.0 * lo);
  int doublings = 0;
  while (model.snr(hi) >= theta) {
    hi *= 2.0;
    if (++doublings > 250) throw std::runtime_error("solve_snr_threshold: SNR stays above theta");
  }

  const bool monotone = detail::snr_nonincreasing(model, lo, hi);
  for (int it = 0; it < 120 && (hi - lo) > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (model.snr(mid) >= theta ? lo : hi) = mid;
  }
  return {lo, hi, monotone};
}

// Maximizes P(N = 1) over the pump subject to SNR >= theta: a 200-point
// log-spaced scan of the feasible interval followed by golden-section
// refinement around the best coarse point. P1 is not proven unimodal, hence
// the scan. A non-monotone SNR curve demotes the search to a feasibility-
// checked global grid.
inline OptResult p1_max(const SchemeModel& model, double theta) {
  const SnrRoot root = solve_snr_threshold(model, theta);

  std::vector<double> grid;
  std::vector<char> feasible;
  if (root.monotone) {
    constexpr int kScan = 200;
    grid.resize(kScan);
    const double lo = root.mu_theta * 1e-8;
    const double ratio = std::pow(root.mu_theta / lo, 1.0 / (kScan - 1));
    double mu = lo;
    for (int i = 0; i < kScan; ++i, mu *= ratio) grid[i] = mu;
    grid.back() = root.mu_theta;  // exact feasibility boundary
    feasible.assign(kScan, 1);
  } else {
    constexpr int kScan = 2001;
    grid.resize(kScan);
    feasible.resize(kScan);
    const double lo = 1e-12;
    const double ratio = std::pow(root.bracket_hi / lo, 1.0 / (kScan - 1));
    double mu = lo;
    for (int i = 0; i < kScan; ++i, mu *= ratio) {
      grid[i] = mu;
      feasible[i] = model.snr(mu) >= theta ? 1 : 0;
    }
  }

  int best = -1;
  double best_p1 = -1.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!feasible[i]) continue;
    const double p1 = model.prob(grid[i], 1);
    if (p1 > best_p1) {
      best_p1 = p1;
      best = static_cast<int>(i);
    }
  }
  if (best < 0) throw std::runtime_error("p1_max: no feasible pump found");

  double lo = best > 0 && feasible[best - 1] ? grid[best - 1] : grid[best] * 0.5;
  double hi = best + 1 < static_cast<int>(grid.size()) && feasible[best + 1] ? grid[best + 1] : grid[best];
  if (root.monotone) hi = std::min(hi, root.mu_theta);
  double mu_star = detail::golden_max([&](double mu) { return model.prob(mu, 1); }, lo, hi, 1e-10);
  if (model.snr(mu_star) < theta) mu_star = grid[best];  // grid fallback keeps the constraint

  OptResult r;
  r.mu_star = mu_star;
  r.p1_bar = model.prob(mu_star, 1);
  r.snr_at_opt = model.snr(mu_star);
  r.theta = theta;
  r.chosen_m = model.crystal_count();
  r.snr_monotone = root.monotone;
  return r;
}

// Best symmetric tree with at most m_max crystals: tries every 2^k <= m_max
// including k = 0 (the faint-laser anchor) and keeps the best, ties going to
// fewer crystals.
inline OptResult best_symmetric(int m_max, const Efficiencies& eff, double theta) {
  if (m_max < 1) throw std::invalid_argument("best_symmetric: m_max must be >= 1");
  OptResult best;
  bool have = false;
  for (int k = 0; (1LL << k) <= m_max; ++k) {
    SchemeModel model(Architecture(SymmetricTree{k, 0.0}), eff);
    OptResult r = p1_max(model, theta);
    r.chosen_m = 1LL << k;
    if (!have || r.p1_bar > best.p1_bar) {
      best = r;
      have = true;
    }
  }
  return best;
}

// Percentage difference of the optimized one-photon probabilities,
// asymmetric chain of m crystals against the best symmetric tree with at
// most m crystals.
inline double delta_percent(const Efficiencies& eff, double theta, int m) {
  if (m < 1) throw std::invalid_argument("delta_percent: m must be >= 1");
  const OptResult asym = p1_max(SchemeModel(Architecture(AsymmetricChain{m, 0.0}), eff), theta);
  const OptResult sym = best_symmetric(m, eff, theta);
  return 100.0 * (asym.p1_bar - sym.p1_bar) / sym.p1_bar;
}

struct TwoCrystalOptimum {
  double mu1 = 0.0;
  double mu2 = 0.0;
  double p1 = 0.0;
};

// Maximizes P(K=1) = mu1 e^-mu1 + mu2 e^-(mu1+mu2) of the ideal two-crystal
// source over both pumps by alternating golden-section passes. Each partial
// map is unimodal, so coordinate ascent converges to the unique optimum.
inline TwoCrystalOptimum two_crystal_ideal_opt() {
  const auto p1 = [](double mu1, double mu2) {
    return mu1 * std::exp(-mu1) + mu2 * std::exp(-(mu1 + mu2));
  };
  double mu1 = 0.5, mu2 = 0.5;
  for (int pass = 0; pass < 100; ++pass) {
    const double next1 = detail::golden_max([&](double x) { return p1(x, mu2); }, 0.0, 4.0, 1e-12, 1.0);
    const double next2 = detail::golden_max([&](double x) { return p1(next1, x); }, 0.0, 4.0, 1e-12, 1.0);
    const bool settled = std::abs(next1 - mu1) < 1e-12 && std::abs(next2 - mu2) < 1e-12;
    mu1 = next1;
    mu2 = next2;
    if (settled) break;
  }
  return {mu1, mu2, p1(mu1, mu2)};
}

}  // namespace photon_mux
