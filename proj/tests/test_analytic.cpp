#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "photon_mux/analytic.hpp"

using namespace photon_mux;

namespace {

double rel_diff(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  if (scale < 1e-280) return 0.0;  // both underflowed; agreement is exact enough
  return std::abs(a - b) / scale;
}

// Independent Poisson oracle: multiplicative recurrence from p0 = e^-mu.
std::vector<double> poisson_by_recurrence(double mu, int n_max) {
  std::vector<double> p(n_max + 1);
  p[0] = std::exp(-mu);
  for (int n = 1; n <= n_max; ++n) p[n] = p[n - 1] * mu / n;
  return p;
}

}  // namespace

TEST_CASE("poisson_pmf matches the recurrence oracle") {
  // frozen from the oracle: 0.5^2 e^-0.5 / 2
  REQUIRE(poisson_pmf(0.5, 2) == Catch::Approx(0.075816332464079136).epsilon(1e-13));
  REQUIRE(std::abs(poisson_pmf(0.5, 2) - 0.07582) < 1e-5);

  const auto oracle = poisson_by_recurrence(0.5, 12);
  for (int n = 0; n <= 12; ++n) {
    REQUIRE(rel_diff(poisson_pmf(0.5, n), oracle[n]) < 1e-12);
  }
}

TEST_CASE("poisson_pmf anchors") {
  REQUIRE(std::abs(poisson_pmf(1.0, 1) - std::exp(-1.0)) < 1e-15);
  REQUIRE(std::abs(poisson_pmf(1.0, 1) - 0.36788) < 1e-5);
  REQUIRE(poisson_pmf(0.0, 0) == 1.0);
  REQUIRE(poisson_pmf(0.0, 3) == 0.0);
}

TEST_CASE("poisson_pmf stays normalized in the log-space regime") {
  for (const double mu : {50.0, 400.0, 2000.0}) {
    double sum = 0.0;
    const int lo = static_cast<int>(mu - 40.0 * std::sqrt(mu));
    const int hi = static_cast<int>(mu + 40.0 * std::sqrt(mu));
    for (int n = std::max(0, lo); n <= hi; ++n) sum += poisson_pmf(mu, n);
    REQUIRE(sum == Catch::Approx(1.0).epsilon(1e-9));
  }
  REQUIRE(poisson_pmf(1e-3, 300) == 0.0);  // far tail underflows to exact zero
}

TEST_CASE("poisson_pmf rejects invalid arguments") {
  REQUIRE_THROWS_AS(poisson_pmf(-0.1, 0), std::invalid_argument);
  REQUIRE_THROWS_AS(poisson_pmf(1.0, -1), std::invalid_argument);
}

TEST_CASE("fl_snr anchors") {
  REQUIRE(std::abs(fl_snr(1.0) - 1.0 / (std::exp(1.0) - 2.0)) < 1e-12);
  REQUIRE(std::abs(fl_snr(1.0) - 1.39221) < 1e-5);
  REQUIRE(std::abs(fl_snr(2.0) - 2.0 / (std::exp(2.0) - 3.0)) < 1e-12);
  REQUIRE(fl_snr(1e-8) > 1e7);  // unbounded as the pump vanishes
}

TEST_CASE("fl_snr agrees with the distribution route") {
  for (const double mu : {0.05, 0.3, 1.0, 2.0, 5.0}) {
    const double via_dist = snr_of(poisson_pmf(mu, 0), poisson_pmf(mu, 1));
    REQUIRE(rel_diff(fl_snr(mu), via_dist) < 1e-10);
  }
}

TEST_CASE("fl_snr series branch is continuous and accurate") {
  // long-double reference across the 1e-4 switch point
  for (const double mu : {2e-5, 9e-5, 9.9999e-5, 1.0001e-4, 5e-4}) {
    const long double m = mu;
    const long double ref = m / (std::expm1l(m) - m);
    REQUIRE(rel_diff(fl_snr(mu), static_cast<double>(ref)) < 1e-9);
  }
}

TEST_CASE("mhps_pn reduces to Poisson for a single crystal") {
  for (int n = 0; n <= 10; ++n) {
    REQUIRE(rel_diff(mhps_pn(1, 0.37, n), poisson_pmf(0.37, n)) < 1e-14);
  }
}

TEST_CASE("mhps_pn keeps the faint-laser SNR at any crystal count") {
  for (const int m : {2, 4, 16, 64}) {
    for (const double mu : {0.1883, 0.5, 1.0}) {
      const double snr = snr_of(mhps_pn(m, mu, 0), mhps_pn(m, mu, 1));
      REQUIRE(rel_diff(snr, fl_snr(mu)) < 1e-12);
    }
  }
}

TEST_CASE("mhps_pn multiplier exceeds one") {
  const double mu = 0.1883;
  REQUIRE(mhps_pn(16, mu, 1) > mu * std::exp(-mu));
  REQUIRE(mhps_pn(16, 0.0, 0) == 1.0);
}

TEST_CASE("mhps_pn normalization") {
  for (const int m : {1, 3, 16}) {
    double sum = 0.0;
    for (int n = 0; n <= 40; ++n) sum += mhps_pn(m, 0.8, n);
    REQUIRE(std::abs(sum - 1.0) < 1e-12);
  }
}

TEST_CASE("general_pn single ideal channel is Poisson") {
  const Efficiencies ideal(1.0, 1.0);
  const std::vector<ChannelSpec> one{{0.3, 0}};
  REQUIRE(std::abs(general_pn(one, ideal, 1) - 0.3 * std::exp(-0.3)) < 1e-15);
  for (int n = 0; n <= 8; ++n) {
    REQUIRE(rel_diff(general_pn(one, ideal, n), poisson_pmf(0.3, n)) < 1e-13);
  }
}

TEST_CASE("general_pn with ideal efficiencies matches the MHPS closed form") {
  const Efficiencies ideal(1.0, 1.0);
  for (const int m : {1, 2, 5, 16}) {
    const std::vector<ChannelSpec> channels(m, ChannelSpec{0.21, 0});
    for (int n = 0; n <= 10; ++n) {
      REQUIRE(rel_diff(general_pn(channels, ideal, n), mhps_pn(m, 0.21, n)) < 1e-13);
    }
  }
}

TEST_CASE("general_pn distributions are normalized") {
  std::mt19937_64 rng(20260810);
  std::uniform_real_distribution<double> mu_dist(0.0, 5.0);
  std::uniform_real_distribution<double> eta_dist(0.0, 1.0);
  std::uniform_real_distribution<double> gamma_dist(0.1, 1.0);
  std::uniform_int_distribution<int> m_dist(1, 6);
  std::uniform_int_distribution<int> k_dist(0, 4);

  for (int rep = 0; rep < 50; ++rep) {
    std::vector<ChannelSpec> channels(m_dist(rng));
    for (auto& c : channels) c = {mu_dist(rng), k_dist(rng)};
    const Efficiencies eff(eta_dist(rng), gamma_dist(rng));
    double sum = 0.0;
    for (int n = 0; n <= 40; ++n) sum += general_pn(channels, eff, n);
    REQUIRE(std::abs(sum - 1.0) < 1e-12);
    for (int n = 0; n <= 4; ++n) {
      const double p = general_pn(channels, eff, n);
      REQUIRE(p >= 0.0);
      REQUIRE(p <= 1.0);
    }
  }
}

TEST_CASE("smhps_pn limits") {
  const Efficiencies ideal(1.0, 1.0);
  for (int k = 0; k <= 4; ++k) {
    for (int n = 0; n <= 8; ++n) {
      REQUIRE(rel_diff(smhps_pn(k, 0.3, ideal, n), mhps_pn(1 << k, 0.3, n)) < 1e-13);
    }
  }
  const Efficiencies blind(0.0, 0.7);
  for (int n = 0; n <= 8; ++n) {
    REQUIRE(rel_diff(smhps_pn(3, 0.4, blind, n), poisson_pmf(0.4, n)) < 1e-14);
  }
}

TEST_CASE("smhps_pn agrees with the general evaluator") {
  const Efficiencies eff(0.6, 0.5);
  const auto channels = expand(Architecture(SymmetricTree{2, 0.2}), eff);
  for (int n = 0; n <= 6; ++n) {
    REQUIRE(rel_diff(smhps_pn(2, 0.2, eff, n), general_pn(channels, eff, n)) < 1e-12);
  }
}

TEST_CASE("smhps_pn equals general_pn across a randomized grid") {
  std::mt19937_64 rng(987654321);
  std::uniform_real_distribution<double> mu_dist(1e-3, 2.0);
  std::uniform_real_distribution<double> eta_dist(0.0, 1.0);
  std::uniform_real_distribution<double> gamma_dist(0.1, 0.99);
  std::uniform_int_distribution<int> k_dist(0, 6);
  for (int rep = 0; rep < 100; ++rep) {
    const int k = k_dist(rng);
    const double mu = mu_dist(rng);
    const Efficiencies eff(eta_dist(rng), gamma_dist(rng));
    const auto channels = expand(Architecture(SymmetricTree{k, mu}), eff, 1e12);
    for (int n = 0; n <= 6; ++n) {
      REQUIRE(rel_diff(smhps_pn(k, mu, eff, n), general_pn(channels, eff, n)) < 1e-12);
    }
  }
}

TEST_CASE("amhps_pn limits") {
  // gamma = 1 falls back to the general evaluator and coincides with the
  // symmetric scheme at m = 2^k
  const Efficiencies eff(0.6, 1.0);
  for (const int k : {0, 1, 2, 3}) {
    for (int n = 0; n <= 6; ++n) {
      REQUIRE(rel_diff(amhps_pn(1 << k, 0.25, eff, n), smhps_pn(k, 0.25, eff, n)) < 1e-12);
    }
  }
  const Efficiencies blind(0.0, 0.5);
  for (int n = 0; n <= 8; ++n) {
    REQUIRE(rel_diff(amhps_pn(5, 0.4, blind, n), poisson_pmf(0.4, n)) < 1e-14);
  }
}

TEST_CASE("amhps_pn agrees with the general evaluator") {
  const Efficiencies eff(0.6, 0.5);
  const auto channels = expand(Architecture(AsymmetricChain{4, 0.2}), eff);
  for (int n = 0; n <= 6; ++n) {
    REQUIRE(rel_diff(amhps_pn(4, 0.2, eff, n), general_pn(channels, eff, n)) < 1e-12);
  }
}

TEST_CASE("amhps_pn equals general_pn across a randomized grid") {
  std::mt19937_64 rng(13572468);
  std::uniform_real_distribution<double> mu_dist(1e-3, 2.0);
  std::uniform_real_distribution<double> eta_dist(0.0, 1.0);
  std::uniform_real_distribution<double> gamma_dist(0.1, 0.99);
  std::uniform_int_distribution<int> m_dist(1, 6);
  for (int rep = 0; rep < 100; ++rep) {
    const int m = m_dist(rng);
    const double mu = mu_dist(rng);
    const Efficiencies eff(eta_dist(rng), gamma_dist(rng));
    const auto channels = expand(Architecture(AsymmetricChain{m, mu}), eff, 1e12);
    for (int n = 0; n <= 6; ++n) {
      REQUIRE(rel_diff(amhps_pn(m, mu, eff, n), general_pn(channels, eff, n)) < 1e-12);
    }
  }
}

TEST_CASE("amhps_pn normalization") {
  const Efficiencies eff(0.7, 0.4);
  for (const int m : {1, 3, 8}) {
    double sum = 0.0;
    for (int n = 0; n <= 40; ++n) sum += amhps_pn(m, 0.5, eff, n);
    REQUIRE(std::abs(sum - 1.0) < 1e-12);
  }
}

TEST_CASE("snr_of anchors and sentinel") {
  REQUIRE(std::abs(snr_of(poisson_pmf(1.0, 0), poisson_pmf(1.0, 1)) - 1.39221) < 1e-5);
  REQUIRE(std::isinf(snr_of(0.75, 0.25)));        // p0 + p1 = 1 exactly
  REQUIRE(std::isinf(snr_of(0.5, 0.5 + 1e-12)));  // tiny negative mass -> sentinel
}

TEST_CASE("snr_of matches the closed-form symmetric SNR") {
  const Efficiencies eff(0.7, 0.6);
  const double via_dist = snr_of(smhps_pn(3, 0.1, eff, 0), smhps_pn(3, 0.1, eff, 1));
  REQUIRE(rel_diff(via_dist, smhps_snr_closed(3, 0.1, eff)) < 1e-9);
}

TEST_CASE("smhps_snr_closed limits") {
  // deep trees approach the faint laser
  const Efficiencies eff(0.8, 0.7);
  for (const double mu : {0.2, 1.0}) {
    REQUIRE(rel_diff(smhps_snr_closed(50, mu, eff), fl_snr(mu)) < 1e-9);
  }
  REQUIRE(rel_diff(smhps_snr_closed(0, 0.8, Efficiencies(1.0, 1.0)), fl_snr(0.8)) < 1e-12);
}

TEST_CASE("smhps_snr_closed agrees with the distribution route") {
  for (const double eta : {0.3, 0.6, 1.0}) {
    for (const double gamma : {0.5, 0.8, 1.0}) {
      const Efficiencies eff(eta, gamma);
      for (const int k : {0, 1, 2, 4}) {
        for (const double mu : {0.1, 0.3, 1.0}) {
          const double closed = smhps_snr_closed(k, mu, eff);
          const double via_dist = snr_of(smhps_pn(k, mu, eff, 0), smhps_pn(k, mu, eff, 1));
          REQUIRE(rel_diff(closed, via_dist) < 1e-9);
        }
      }
    }
  }
}

TEST_CASE("smhps_gain limit values") {
  REQUIRE(std::abs(smhps_gain(60, 1.0, Efficiencies(0.8, 0.4)) - 1.0) < 1e-3);
  REQUIRE(smhps_gain(60, 1.0, Efficiencies(0.8, 0.5)) > 1.0);
  REQUIRE(smhps_gain(40, 1.0, Efficiencies(0.8, 0.6)) > 10.0);
  REQUIRE(std::abs(smhps_gain(0, 1.0, Efficiencies(1.0, 1.0)) - 1.0) < 1e-15);
}

TEST_CASE("smhps_gain matches its defining probability ratio") {
  // gain = P1_S(mu/2^k) / P1_FL(mu/2^k) with the rescaled pump
  for (const int k : {1, 3, 5}) {
    for (const double gamma : {0.6, 0.9, 1.0}) {
      const Efficiencies eff(0.75, gamma);
      const double mu = 1.3;
      const double mu_scaled = mu / std::ldexp(1.0, k);
      const double ratio = smhps_pn(k, mu_scaled, eff, 1) / (mu_scaled * std::exp(-mu_scaled));
      REQUIRE(rel_diff(smhps_gain(k, mu, eff), ratio) < 1e-10);
    }
  }
}

TEST_CASE("eta -> 0 turns every scheme into the bare faint laser") {
  const Efficiencies blind(0.0, 0.6);
  const double pump = 0.33;
  const std::vector<SchemeModel> models = {
      SchemeModel(Architecture(FaintLaser{pump}), blind),
      SchemeModel(Architecture(IdealMhps{4, pump}), blind),
      SchemeModel(Architecture(SymmetricTree{2, pump}), blind),
      SchemeModel(Architecture(AsymmetricChain{5, pump}), blind),
  };
  for (const auto& model : models) {
    for (int n = 0; n <= 6; ++n) {
      REQUIRE(rel_diff(model.prob(pump, n), poisson_pmf(pump, n)) < 1e-12);
    }
  }
}

TEST_CASE("SNR decreases with the pump for every scheme") {
  const Efficiencies eff(0.6, 0.5);
  const std::vector<SchemeModel> models = {
      SchemeModel(Architecture(FaintLaser{0.0}), eff),
      SchemeModel(Architecture(IdealMhps{4, 0.0}), eff),
      SchemeModel(Architecture(SymmetricTree{2, 0.0}), Efficiencies(0.6, 0.5)),
      SchemeModel(Architecture(AsymmetricChain{5, 0.0}), Efficiencies(0.7, 0.6)),
  };
  for (const auto& model : models) {
    double prev = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= 50; ++i) {
      const double mu = 1e-4 * std::pow(10.0 / 1e-4, i / 50.0);
      const double snr = model.snr(mu);
      if (std::isfinite(prev)) REQUIRE(snr < prev * (1.0 + 1e-9));
      prev = snr;
    }
  }
}

TEST_CASE("distribution invariants") {
  const Efficiencies eff(0.6, 0.5);
  const SchemeModel model(Architecture(AsymmetricChain{4, 0.2}), eff);
  const PhotonDistribution d = model.distribution(0.2);
  REQUIRE(d.n_max() == kDefaultNMax);
  double sum = 0.0;
  for (const double p : d.probs) {
    REQUIRE(p >= 0.0);
    REQUIRE(p <= 1.0);
    sum += p;
  }
  REQUIRE(sum <= 1.0 + 1e-12);
  REQUIRE(sum > 1.0 - 1e-12);
  REQUIRE(d.p0 == d.probs[0]);
  REQUIRE(d.p1 == d.probs[1]);
  REQUIRE(d.snr == snr_of(d.p0, d.p1));
  REQUIRE_THROWS_AS(model.distribution(0.2, 1), std::invalid_argument);
}
