#pragma once

#include <cmath>
#include <cstdint>

#include "photon_mux/detail/numeric.hpp"

namespace photon_mux {

inline std::uint64_t splitmix64_next(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// xoshiro256** (Blackman & Vigna), period 2^256 - 1, state filled from a
// splitmix64 run over the seed.
class Xoshiro256ss {
 public:
  explicit Xoshiro256ss(std::uint64_t seed) {
    std::uint64_t sm = seed;
    for (auto& word : state_) word = splitmix64_next(sm);
    if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) state_[0] = 1;
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform in [0, 1) with 53 random bits.
  double uniform01() { return (next() >> 11) * 0x1.0p-53; }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
  std::uint64_t state_[4];
};

// Stream seed for trial chunk c of a run: the documented mix is
// seed XOR (c+1) * 0x9E3779B97F4A7C15, pushed through the splitmix64 state
// fill above. Chunked streams make results independent of worker count.
inline Xoshiro256ss chunk_rng(std::uint64_t seed, std::uint64_t chunk) {
  return Xoshiro256ss(seed ^ ((chunk + 1) * 0x9E3779B97F4A7C15ULL));
}

// Poisson sampler: cdf inversion below mean 10, Hormann's PTRS transformed
// rejection above (pump compensation routinely pushes channel means into the
// hundreds, where inversion would cost O(mean) per draw).
class PoissonSampler {
 public:
  explicit PoissonSampler(double mean) : mu_(mean) {
    if (mu_ < kInversionCutoff) {
      p0_ = std::exp(-mu_);
    } else {
      b_ = 0.931 + 2.53 * std::sqrt(mu_);
      a_ = -0.059 + 0.02483 * b_;
      inv_alpha_ = 1.1239 + 1.1328 / (b_ - 3.4);
      v_r_ = 0.9277 - 3.6224 / (b_ - 2.0);
      log_mu_ = std::log(mu_);
    }
  }

  double mean() const { return mu_; }

  std::uint64_t operator()(Xoshiro256ss& rng) const {
    if (mu_ == 0.0) return 0;
    if (mu_ < kInversionCutoff) return inversion(rng);
    return ptrs(rng);
  }

 private:
  static constexpr double kInversionCutoff = 10.0;

  std::uint64_t inversion(Xoshiro256ss& rng) const {
    const double u = rng.uniform01();
    double pmf = p0_;
    double cdf = pmf;
    std::uint64_t k = 0;
    while (u > cdf && k < 400) {
      ++k;
      pmf *= mu_ / static_cast<double>(k);
      cdf += pmf;
    }
    return k;
  }

  std::uint64_t ptrs(Xoshiro256ss& rng) const {
    for (;;) {
      const double u = rng.uniform01() - 0.5;
      const double v = rng.uniform01();
      const double us = 0.5 - std::abs(u);
      const double kf = std::floor((2.0 * a_ / us + b_) * u + mu_ + 0.43);
      if (us >= 0.07 && v <= v_r_) return static_cast<std::uint64_t>(kf);
      if (kf < 0.0 || (us < 0.013 && v > us)) continue;
      const double accept = kf * log_mu_ - mu_ - std::lgamma(kf + 1.0);
      if (std::log(v * inv_alpha_ / (a_ / (us * us) + b_)) <= accept) {
        return static_cast<std::uint64_t>(kf);
      }
    }
  }

  double mu_;
  double p0_ = 0.0;
  double b_ = 0.0, a_ = 0.0, inv_alpha_ = 0.0, v_r_ = 0.0, log_mu_ = 0.0;
};

// Binomial(n, p) by waiting-time (geometric gap) counting on the smaller of
// p and 1-p. Exact for all n; expected cost O(n min(p, 1-p) + 1), which stays
// tiny here because router survival keeps n * p near the output-side mean.
inline std::uint64_t sample_binomial(Xoshiro256ss& rng, std::uint64_t n, double p) {
  if (n == 0 || p <= 0.0) return 0;
  if (p >= 1.0) return n;
  const bool flipped = p > 0.5;
  const double q = flipped ? 1.0 - p : p;
  const double log_one_minus_q = std::log1p(-q);
  std::uint64_t hits = 0;
  double position = 0.0;
  for (;;) {
    position += std::floor(std::log(rng.uniform01()) / log_one_minus_q) + 1.0;
    if (!(position <= static_cast<double>(n))) break;
    ++hits;
  }
  return flipped ? n - hits : hits;
}

}  // namespace photon_mux
