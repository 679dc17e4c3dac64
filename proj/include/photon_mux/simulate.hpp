#pragma once

#include <cmath>
#include <cstdint>
#include <mutex>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "photon_mux/analytic.hpp"
#include "photon_mux/architecture.hpp"
#include "photon_mux/detail/parallel.hpp"
#include "photon_mux/rng.hpp"

// Monte Carlo event simulator of the physical source: Poisson pair
// generation per crystal, threshold heralding, priority switching, and
// binomial router loss. Serves as the independent oracle for every analytic
// formula in this project.

namespace photon_mux {

inline constexpr std::uint64_t kTrialChunk = 65536;

struct McEstimate {
  std::vector<double> p_hat;           // estimated P(N = n), n = 0..n_cap
  std::vector<double> std_err;         // sqrt(p(1-p)/trials) per bin
  std::vector<std::uint64_t> counts;   // raw tallies behind p_hat
  std::uint64_t overflow = 0;          // trials with more than n_cap photons
  std::uint64_t n_trials = 0;
  std::uint64_t seed = 0;
  std::vector<std::uint64_t> chi_hist; // selected-channel index, 0 = no trigger
};

// Runs n_trials events of the given channel list. Trials are partitioned
// into fixed 65536-trial chunks, each with its own counter-derived RNG
// stream, so the estimate depends only on (channels, eff, n_trials, seed,
// n_cap) and never on the worker count.
inline McEstimate simulate(std::span<const ChannelSpec> channels, const Efficiencies& eff,
                           std::uint64_t n_trials, std::uint64_t seed, int n_cap,
                           unsigned threads = 0) {
  if (channels.empty()) throw std::invalid_argument("simulate: channel list is empty");
  if (n_trials < 1) throw std::invalid_argument("simulate: need at least one trial");
  if (n_cap < 2) throw std::invalid_argument("simulate: n_cap must be >= 2");

  const std::size_t m = channels.size();
  const double eta = eff.eta;
  const double log_miss = eta < 1.0 ? std::log1p(-eta) : 0.0;

  std::vector<PoissonSampler> pair_samplers;
  std::vector<double> survival;  // gamma^k per channel
  pair_samplers.reserve(m);
  survival.reserve(m);
  for (const auto& c : channels) {
    if (!(c.mu >= 0.0) || !std::isfinite(c.mu) || c.k < 0) {
      throw std::invalid_argument("simulate: invalid channel");
    }
    pair_samplers.emplace_back(c.mu);
    survival.push_back(std::pow(eff.gamma, c.k));
  }

  const std::size_t bins = static_cast<std::size_t>(n_cap) + 1;
  std::vector<std::uint64_t> counts(bins, 0);
  std::vector<std::uint64_t> chi_hist(m + 1, 0);
  std::uint64_t overflow = 0;
  std::mutex merge_mutex;

  const std::uint64_t chunks = (n_trials + kTrialChunk - 1) / kTrialChunk;
  detail::parallel_for(chunks, threads, [&](std::size_t chunk) {
    Xoshiro256ss rng = chunk_rng(seed, chunk);
    const std::uint64_t begin = chunk * kTrialChunk;
    const std::uint64_t end = std::min(begin + kTrialChunk, n_trials);

    std::vector<std::uint64_t> local_counts(bins, 0);
    std::vector<std::uint64_t> local_chi(m + 1, 0);
    std::uint64_t local_overflow = 0;

    for (std::uint64_t trial = begin; trial < end; ++trial) {
      std::size_t chi = 0;               // first heralded channel, 0 = none
      std::uint64_t pairs_first = 0;     // channel 1 pairs, routed if nothing fires
      std::uint64_t pairs_selected = 0;
      for (std::size_t i = 0; i < m; ++i) {
        const std::uint64_t pairs = pair_samplers[i](rng);
        if (i == 0) pairs_first = pairs;
        bool fired = false;
        if (pairs > 0 && eta > 0.0) {
          // threshold detector: fires unless all idlers are missed
          fired = eta >= 1.0 || rng.uniform01() < -std::expm1(static_cast<double>(pairs) * log_miss);
        }
        if (fired) {
          chi = i + 1;
          pairs_selected = pairs;
          break;  // later channels are blocked by the switch either way
        }
      }
      const std::size_t routed = chi == 0 ? 0 : chi - 1;
      const std::uint64_t source_pairs = chi == 0 ? pairs_first : pairs_selected;
      const std::uint64_t out = sample_binomial(rng, source_pairs, survival[routed]);

      ++local_chi[chi];
      if (out < bins) {
        ++local_counts[out];
      } else {
        ++local_overflow;
      }
    }

    std::lock_guard<std::mutex> lock(merge_mutex);
    for (std::size_t i = 0; i < bins; ++i) counts[i] += local_counts[i];
    for (std::size_t i = 0; i <= m; ++i) chi_hist[i] += local_chi[i];
    overflow += local_overflow;
  });

  McEstimate est;
  est.counts = std::move(counts);
  est.overflow = overflow;
  est.n_trials = n_trials;
  est.seed = seed;
  est.chi_hist = std::move(chi_hist);
  est.p_hat.resize(bins);
  est.std_err.resize(bins);
  const double trials = static_cast<double>(n_trials);
  for (std::size_t i = 0; i < bins; ++i) {
    const double p = static_cast<double>(est.counts[i]) / trials;
    est.p_hat[i] = p;
    est.std_err[i] = std::sqrt(p * (1.0 - p) / trials);
  }
  return est;
}

inline McEstimate simulate(const std::vector<ChannelSpec>& channels, const Efficiencies& eff,
                           std::uint64_t n_trials, std::uint64_t seed, int n_cap,
                           unsigned threads = 0) {
  return simulate(std::span<const ChannelSpec>(channels), eff, n_trials, seed, n_cap, threads);
}

// ---------------------------------------------------------------------------
// Standard validation grid: every named scheme crossed with representative
// detection/transmission values, compared bin by bin against the analytic
// distribution and the trigger-index law.

struct ValidationCase {
  std::string name;
  Architecture arch;
  Efficiencies eff;
};

inline std::vector<ValidationCase> standard_validation_grid() {
  const double etas[] = {0.0, 0.3, 0.6, 1.0};
  const double gammas[] = {0.3, 0.5, 0.8, 1.0};
  std::vector<ValidationCase> cases;
  for (const double eta : etas) {
    for (const double gamma : gammas) {
      const Efficiencies eff(eta, gamma);
      const std::string tag = "_eta" + std::to_string(eta).substr(0, 3) +
                              "_gamma" + std::to_string(gamma).substr(0, 3);
      cases.push_back({"fl" + tag, Architecture(FaintLaser{0.3}), eff});
      cases.push_back({"ideal_m4" + tag, Architecture(IdealMhps{4, 0.2}), eff});
      cases.push_back({"symmetric_k2" + tag, Architecture(SymmetricTree{2, 0.2}), eff});
      cases.push_back({"asymmetric_m4" + tag, Architecture(AsymmetricChain{4, 0.2}), eff});
    }
  }
  return cases;
}

struct ValidationReport {
  std::string name;
  bool dist_pass = false;
  bool chi_pass = false;
  double worst_dist_excess = 0.0;  // max over n of |p_hat - p| - allowance
  double worst_chi_z = 0.0;        // max |p_hat - p| / sigma over chi bins
  McEstimate estimate;

  bool pass() const { return dist_pass && chi_pass; }
};

// Simulates one validation case and applies the acceptance rule
// |p_hat_n - P_n| <= max(4 stderr, 1e-4) for n <= check_n_max, plus a
// 4-sigma check of the chi histogram against the analytic trigger law.
inline ValidationReport validate_case(const ValidationCase& vc, std::uint64_t trials,
                                      std::uint64_t seed, unsigned threads = 0,
                                      int check_n_max = 4) {
  const auto channels = expand(vc.arch, vc.eff);
  ValidationReport report;
  report.name = vc.name;
  report.estimate = simulate(channels, vc.eff, trials, seed, std::max(check_n_max + 2, 8), threads);

  report.dist_pass = true;
  double worst = -1.0;
  for (int n = 0; n <= check_n_max; ++n) {
    const double analytic = general_pn(channels, vc.eff, n);
    const double dev = std::abs(report.estimate.p_hat[n] - analytic);
    const double allowance = std::max(4.0 * report.estimate.std_err[n], 1e-4);
    worst = std::max(worst, dev - allowance);
    if (dev > allowance) report.dist_pass = false;
  }
  report.worst_dist_excess = worst;

  // Trigger law: P(chi=i) = (1 - e^-eta mu_i) e^-eta sum_{l<i} mu_l.
  report.chi_pass = true;
  const double inv_n = 1.0 / static_cast<double>(report.estimate.n_trials);
  double eta_mu_before = 0.0;
  double p_none = 1.0;
  std::vector<double> law(channels.size() + 1, 0.0);
  for (std::size_t i = 0; i < channels.size(); ++i) {
    const double trig = -std::expm1(-vc.eff.eta * channels[i].mu);
    law[i + 1] = trig * detail::exp_or_zero(-eta_mu_before);
    eta_mu_before += vc.eff.eta * channels[i].mu;
  }
  p_none = detail::exp_or_zero(-eta_mu_before);
  law[0] = p_none;
  for (std::size_t i = 0; i < law.size(); ++i) {
    const double observed = static_cast<double>(report.estimate.chi_hist[i]) * inv_n;
    const double sigma = std::sqrt(law[i] * (1.0 - law[i]) * inv_n);
    const double dev = std::abs(observed - law[i]);
    const double z = sigma > 0.0 ? dev / sigma : (dev > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
    report.worst_chi_z = std::max(report.worst_chi_z, z);
    if (dev > 4.0 * sigma) report.chi_pass = false;
  }
  return report;
}

// Per-case seeds are decorrelated with a splitmix64 step over the case index.
inline std::uint64_t case_seed(std::uint64_t run_seed, std::uint64_t index) {
  std::uint64_t s = run_seed + 0x632BE59BD9B4E019ULL * (index + 1);
  return splitmix64_next(s);
}

}  // namespace photon_mux
