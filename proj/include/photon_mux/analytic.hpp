#pragma once

#include <cmath>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "photon_mux/architecture.hpp"
#include "photon_mux/detail/numeric.hpp"

// Exact photon-number statistics of multiplexed heralded single-photon
// sources. The per-channel sum in general_pn is the canonical evaluator;
// the scheme-specific closed forms (mhps_pn, smhps_pn, amhps_pn) are kept
// as independent implementations and must agree with it.

namespace photon_mux {

inline constexpr int kDefaultNMax = 40;
inline constexpr double kSnrDenominatorFloor = 1e-300;

// Poisson pulse statistics: probability of n photons at mean mu.
inline double poisson_pmf(double mu, int n) {
  if (!(mu >= 0.0) || !std::isfinite(mu)) throw std::invalid_argument("poisson_pmf: mean must be finite and >= 0");
  if (n < 0) throw std::invalid_argument("poisson_pmf: n must be >= 0");
  if (mu == 0.0) return n == 0 ? 1.0 : 0.0;
  return detail::exp_or_zero(detail::log_poisson_pmf(mu, n));
}

// SNR of a Poisson source, mu / (e^mu - 1 - mu). Below mu = 1e-4 the direct
// form loses all precision to cancellation; switch to the Laurent expansion
// 2/mu - 2/3 + mu/18 + O(mu^2).
inline double fl_snr(double mu) {
  if (!(mu > 0.0)) throw std::domain_error("fl_snr: mean must be > 0");
  if (mu < 1e-4) return 2.0 / mu - 2.0 / 3.0 + mu / 18.0;
  return mu / (std::expm1(mu) - mu);
}

// One-photon probability over multi-photon probability. p0 and p1 must be
// exact values from the closed forms, never truncated sums.
inline double snr_of(double p0, double p1) {
  const double denom = 1.0 - p0 - p1;
  if (denom <= kSnrDenominatorFloor) return std::numeric_limits<double>::infinity();
  return p1 / denom;
}

// Truncated view of an output distribution plus the exact low-order values
// that the SNR needs.
struct PhotonDistribution {
  std::vector<double> probs;  // P(N = n) for n = 0 .. n_max
  double p0 = 0.0;
  double p1 = 0.0;
  double snr = 0.0;

  int n_max() const { return static_cast<int>(probs.size()) - 1; }
};

inline double snr_of(const PhotonDistribution& d) { return snr_of(d.p0, d.p1); }

// Output distribution of an arbitrary prioritized channel list.
//
// The no-trigger term routes channel 1 with its photons thinned by both the
// detector miss probability and the router chain; each triggered term i is
// the thinned Poisson of channel i weighted by the probability that channels
// before it stayed silent. All exponentials are assembled in log space.
inline double general_pn(std::span<const ChannelSpec> channels, const Efficiencies& eff, int n) {
  if (channels.empty()) throw std::invalid_argument("general_pn: channel list is empty");
  if (n < 0) throw std::invalid_argument("general_pn: n must be >= 0");
  const double eta = eff.eta;

  double eta_mu_total = 0.0;
  for (const auto& c : channels) eta_mu_total += eta * c.mu;

  const double t1 = std::pow(eff.gamma, channels.front().k);
  const double lam1 = channels.front().mu * t1;
  double total = detail::exp_or_zero(detail::log_poisson_pmf(lam1 * (1.0 - eta), n) - eta_mu_total);

  double eta_mu_before = 0.0;
  for (const auto& c : channels) {
    const double t = std::pow(eff.gamma, c.k);
    const double lam = c.mu * t;
    const double weight = detail::exp_or_zero(detail::log_poisson_pmf(lam, n) - eta_mu_before);
    if (weight > 0.0) {
      total += weight * detail::detection_bracket(eta, n, -eta * (1.0 - t) * c.mu);
    }
    eta_mu_before += eta * c.mu;
  }
  return total;
}

inline double general_pn(const std::vector<ChannelSpec>& channels, const Efficiencies& eff, int n) {
  return general_pn(std::span<const ChannelSpec>(channels), eff, n);
}

// Ideal multi-crystal source with post-selection, m crystals at mean mu each:
// (mu^n/n!) e^-mu (1-e^-m mu)/(1-e^-mu) for n >= 1 and e^-m mu at n = 0.
inline double mhps_pn(int m, double mu, int n) {
  if (m < 1) throw std::invalid_argument("mhps_pn: m must be >= 1");
  if (!(mu >= 0.0)) throw std::invalid_argument("mhps_pn: mean must be >= 0");
  if (n < 0) throw std::invalid_argument("mhps_pn: n must be >= 0");
  if (mu == 0.0) return n == 0 ? 1.0 : 0.0;
  if (n == 0) return detail::exp_or_zero(-static_cast<double>(m) * mu);
  const double ratio = std::expm1(-static_cast<double>(m) * mu) / std::expm1(-mu);
  return detail::exp_or_zero(detail::log_poisson_pmf(mu, n)) * ratio;
}

// Symmetric router tree of depth k (2^k crystals), each crystal fed
// mu_tilde / gamma^k to compensate the k routers on every path.
inline double smhps_pn(int k, double mu_tilde, const Efficiencies& eff, int n) {
  if (k < 0) throw std::invalid_argument("smhps_pn: depth must be >= 0");
  if (!(mu_tilde >= 0.0)) throw std::invalid_argument("smhps_pn: mean must be >= 0");
  if (n < 0) throw std::invalid_argument("smhps_pn: n must be >= 0");
  if (mu_tilde == 0.0) return n == 0 ? 1.0 : 0.0;
  const double eta = eff.eta;
  if (eta == 0.0) return poisson_pmf(mu_tilde, n);  // undetected heralds: plain faint laser

  const double crystals = std::ldexp(1.0, k);
  const double trig = eta * mu_tilde / std::pow(eff.gamma, k);  // -log P(one crystal silent)
  const double trig_all = crystals * trig;

  double out = detail::exp_or_zero(detail::log_poisson_pmf((1.0 - eta) * mu_tilde, n) - trig_all);
  const double geometric = std::expm1(-trig_all) / std::expm1(-trig);
  const double bracket = detail::detection_bracket(eta, n, eta * mu_tilde - trig);
  out += detail::exp_or_zero(detail::log_poisson_pmf(mu_tilde, n)) * bracket * geometric;
  return out;
}

// Asymmetric chain of m crystals with pump compensation mu_i = mu_bar /
// gamma^k_i. Closed form valid for gamma < 1; at gamma = 1 the compacted
// geometric prefactors are singular and the general evaluator takes over.
inline double amhps_pn(int m, double mu_bar, const Efficiencies& eff, int n) {
  if (m < 1) throw std::invalid_argument("amhps_pn: m must be >= 1");
  if (!(mu_bar >= 0.0)) throw std::invalid_argument("amhps_pn: mean must be >= 0");
  if (n < 0) throw std::invalid_argument("amhps_pn: n must be >= 0");
  if (mu_bar == 0.0) return n == 0 ? 1.0 : 0.0;
  const double eta = eff.eta;
  const double gamma = eff.gamma;
  if (eta == 0.0) return poisson_pmf(mu_bar, n);
  if (gamma == 1.0) {
    const auto channels = expand(Architecture(AsymmetricChain{m, mu_bar}), eff);
    return general_pn(channels, eff, n);
  }

  const double log_gamma = std::log(gamma);
  // Total mean pair count over mu_bar: ((2-gamma) gamma^(1-m) - 1)/(1-gamma),
  // rearranged through expm1 so it stays exact as gamma -> 1.
  const double pairs_total = 1.0 + (2.0 - gamma) * std::expm1((1.0 - m) * log_gamma) / (1.0 - gamma);
  double out = detail::exp_or_zero(detail::log_poisson_pmf((1.0 - eta) * mu_bar, n) - eta * mu_bar * pairs_total);

  const double log_pois = detail::log_poisson_pmf(mu_bar, n);
  for (int i = 1; i <= m; ++i) {
    const int ki = asymmetric_depth(i, m);
    const double pairs_before = std::expm1((1.0 - i) * log_gamma) / (1.0 - gamma);
    const double weight = detail::exp_or_zero(log_pois - eta * mu_bar * pairs_before);
    if (weight == 0.0) break;  // weights only shrink with i
    const double extra = -eta * mu_bar * std::expm1(-static_cast<double>(ki) * log_gamma);
    out += weight * detail::detection_bracket(eta, n, extra);
  }
  return out;
}

// Closed-form SNR of the symmetric scheme (independent of the distribution
// route; both sides of the quotient carry the common factor e^mu (1 - e^-A)).
inline double smhps_snr_closed(int k, double mu, const Efficiencies& eff) {
  if (k < 0) throw std::invalid_argument("smhps_snr_closed: depth must be >= 0");
  if (!(mu > 0.0)) throw std::domain_error("smhps_snr_closed: mean must be > 0");
  const double eta = eff.eta;
  if (eta == 0.0) return fl_snr(mu);

  const double trig = eta * mu / std::pow(eff.gamma, k);
  const double trig_all = std::ldexp(1.0, k) * trig;
  const double coeff = 1.0 + mu - eta * mu;  // (1 + mu - eta mu), multiplies e^{eta mu}

  const double num = mu * (1.0
      - (1.0 - eta) * detail::exp_or_zero(eta * mu - trig)
      - detail::exp_or_zero(-trig_all)
      + (1.0 - eta) * detail::exp_or_zero(eta * mu - trig_all));
  const double den = (std::expm1(mu) - mu)
      - detail::exp_or_zero(mu - trig)
      + coeff * detail::exp_or_zero(eta * mu - trig)
      + (1.0 + mu) * detail::exp_or_zero(-trig_all)
      - coeff * detail::exp_or_zero(eta * mu - trig_all);
  if (den <= kSnrDenominatorFloor) return std::numeric_limits<double>::infinity();
  return num / den;
}

// Gain of the symmetric scheme over the faint laser at matched SNR, with the
// pump rescaled as mu -> mu / 2^k on both sides to keep total power finite.
inline double smhps_gain(int k, double mu, const Efficiencies& eff) {
  if (k < 0) throw std::invalid_argument("smhps_gain: depth must be >= 0");
  if (!(mu > 0.0)) throw std::domain_error("smhps_gain: mean must be > 0");
  const double eta = eff.eta;
  if (eta == 0.0) return 1.0;

  const double gk = std::pow(eff.gamma, k);
  const double two_gamma_k = std::pow(2.0 * eff.gamma, k);
  const double two_k = std::ldexp(1.0, k);

  const double num = 1.0
      - (1.0 - eta) * detail::exp_or_zero(-eta * mu * (1.0 - gk) / two_gamma_k)
      - detail::exp_or_zero(-eta * mu / gk)
      + (1.0 - eta) * detail::exp_or_zero(eta * mu / two_k - eta * mu / gk);
  const double den = -std::expm1(-eta * mu / two_gamma_k);
  return num / den;
}

// Analytic model of one architecture at fixed efficiencies, evaluated as a
// function of the scheme's single pump parameter. For general architectures
// the stored channel means act as weights and the pump is a global scale.
class SchemeModel {
 public:
  SchemeModel(Architecture arch, Efficiencies eff)
      : arch_(std::move(arch)), eff_(eff) {}

  const Architecture& architecture() const { return arch_; }
  const Efficiencies& efficiencies() const { return eff_; }
  long long crystal_count() const { return arch_.crystal_count(); }

  double prob(double pump, int n) const {
    if (const auto* fl = arch_.get_if<FaintLaser>()) {
      (void)fl;
      return poisson_pmf(pump, n);
    }
    if (const auto* sym = arch_.get_if<SymmetricTree>()) {
      return smhps_pn(sym->depth, pump, eff_, n);
    }
    if (const auto* asym = arch_.get_if<AsymmetricChain>()) {
      return amhps_pn(asym->m, pump, eff_, n);
    }
    return general_pn(scaled_channels(pump), eff_, n);
  }

  struct P01 {
    double p0, p1;
  };

  P01 p01(double pump) const {
    if (arch_.get_if<IdealMhps>() || arch_.get_if<GeneralChannels>()) {
      const auto channels = scaled_channels(pump);
      return {general_pn(channels, eff_, 0), general_pn(channels, eff_, 1)};
    }
    return {prob(pump, 0), prob(pump, 1)};
  }

  // SNR as a function of the pump. Where 1 - p0 - p1 is smaller than 1e-6
  // the subtraction has lost too many digits, so the multi-photon mass is
  // re-accumulated from the n >= 2 terms instead.
  double snr(double pump) const {
    const auto [p0, p1] = p01(pump);
    double multi = 1.0 - p0 - p1;
    if (multi < 1e-6) {
      multi = 0.0;
      for (int n = 2; n < 2 + 256; ++n) {
        const double term = prob(pump, n);
        multi += term;
        if (term < multi * 1e-18 && n > 4) break;
      }
    }
    if (multi <= kSnrDenominatorFloor) return std::numeric_limits<double>::infinity();
    return p1 / multi;
  }

  PhotonDistribution distribution(double pump, int n_max = kDefaultNMax) const {
    if (n_max < 2) throw std::invalid_argument("distribution: n_max must be >= 2");
    PhotonDistribution d;
    d.probs.resize(static_cast<std::size_t>(n_max) + 1);
    if (arch_.get_if<IdealMhps>() || arch_.get_if<GeneralChannels>()) {
      const auto channels = scaled_channels(pump);
      for (int n = 0; n <= n_max; ++n) d.probs[n] = general_pn(channels, eff_, n);
    } else {
      for (int n = 0; n <= n_max; ++n) d.probs[n] = prob(pump, n);
    }
    d.p0 = d.probs[0];
    d.p1 = d.probs[1];
    d.snr = snr_of(d.p0, d.p1);
    return d;
  }

 private:
  std::vector<ChannelSpec> scaled_channels(double pump) const {
    if (const auto* id = arch_.get_if<IdealMhps>()) {
      return std::vector<ChannelSpec>(static_cast<std::size_t>(id->m), ChannelSpec{pump, 0});
    }
    const auto* gen = arch_.get_if<GeneralChannels>();
    std::vector<ChannelSpec> channels = gen->channels;
    for (auto& c : channels) c.mu *= pump;
    return channels;
  }

  Architecture arch_;
  Efficiencies eff_;
};

}  // namespace photon_mux
