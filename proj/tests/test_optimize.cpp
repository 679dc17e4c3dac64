#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "photon_mux/optimize.hpp"

using namespace photon_mux;

namespace {

// Independent oracle for the faint-laser threshold pump: bisects
// e^mu - 1 - mu = mu / theta directly.
double fl_mu_theta_oracle(double theta) {
  double lo = 1e-9, hi = 10.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double lhs = std::expm1(mid) - mid;
    (lhs < mid / theta ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("solve_snr_threshold: faint laser against the bisection oracle") {
  const SchemeModel fl(Architecture(FaintLaser{0.0}), Efficiencies(1.0, 1.0));
  const SnrRoot root = solve_snr_threshold(fl, 10.0);
  REQUIRE(root.monotone);
  REQUIRE(std::abs(root.mu_theta - fl_mu_theta_oracle(10.0)) < 1e-8);
  REQUIRE(root.mu_theta > 0.18);
  REQUIRE(root.mu_theta < 0.19);

  // SNR(1) = (e-2)^-1, so that threshold lands exactly at pump 1
  const double theta_e = 1.0 / (std::exp(1.0) - 2.0);
  REQUIRE(std::abs(solve_snr_threshold(fl, theta_e).mu_theta - 1.0) < 1e-6);
}

TEST_CASE("solve_snr_threshold: MHPS shares the faint-laser root") {
  const SchemeModel fl(Architecture(FaintLaser{0.0}), Efficiencies(1.0, 1.0));
  const double fl_root = solve_snr_threshold(fl, 10.0).mu_theta;
  for (const int m : {2, 4, 16}) {
    const SchemeModel mhps(Architecture(IdealMhps{m, 0.0}), Efficiencies(1.0, 1.0));
    REQUIRE(std::abs(solve_snr_threshold(mhps, 10.0).mu_theta - fl_root) < 1e-9);
  }
}

TEST_CASE("solve_snr_threshold rejects bad thresholds") {
  const SchemeModel fl(Architecture(FaintLaser{0.0}), Efficiencies(1.0, 1.0));
  REQUIRE_THROWS_AS(solve_snr_threshold(fl, 0.0), std::invalid_argument);
  REQUIRE_THROWS_AS(solve_snr_threshold(fl, -3.0), std::invalid_argument);
  REQUIRE_THROWS_AS(solve_snr_threshold(fl, std::numeric_limits<double>::infinity()),
                    std::invalid_argument);
}

TEST_CASE("p1_max: faint laser anchors") {
  const SchemeModel fl(Architecture(FaintLaser{0.0}), Efficiencies(1.0, 1.0));

  const OptResult at10 = p1_max(fl, 10.0);
  REQUIRE(std::abs(at10.p1_bar - 0.155) < 0.002);
  REQUIRE(at10.snr_at_opt >= 10.0 - 1e-9);
  REQUIRE(std::abs(at10.p1_bar - fl.prob(at10.mu_star, 1)) <= 1e-12 * at10.p1_bar);

  // theta -> 0 releases the constraint; the optimum drifts to pump 1, e^-1
  const OptResult free = p1_max(fl, 1e-9);
  REQUIRE(std::abs(free.mu_star - 1.0) < 1e-4);
  REQUIRE(std::abs(free.p1_bar - std::exp(-1.0)) < 1e-9);
}

TEST_CASE("p1_max: asymmetric scheme beats the faint laser") {
  const Efficiencies eff(0.6, 0.5);
  const OptResult fl = p1_max(SchemeModel(Architecture(FaintLaser{0.0}), eff), 10.0);
  const OptResult asym = p1_max(SchemeModel(Architecture(AsymmetricChain{8, 0.0}), eff), 10.0);
  REQUIRE(asym.p1_bar > 0.155);
  REQUIRE(asym.p1_bar > fl.p1_bar);
  REQUIRE(asym.snr_at_opt >= 10.0 - 1e-9);
}

TEST_CASE("p1_max satisfies its constraint across schemes and thresholds") {
  const std::vector<Efficiencies> effs = {Efficiencies(1.0, 1.0), Efficiencies(0.62, 0.5),
                                          Efficiencies(0.3, 0.8)};
  for (const auto& eff : effs) {
    for (const double theta : {1.0, 10.0, 100.0}) {
      const std::vector<SchemeModel> models = {
          SchemeModel(Architecture(FaintLaser{0.0}), eff),
          SchemeModel(Architecture(IdealMhps{4, 0.0}), eff),
          SchemeModel(Architecture(SymmetricTree{2, 0.0}), eff),
          SchemeModel(Architecture(AsymmetricChain{6, 0.0}), eff),
      };
      const double fl_p1 = p1_max(models[0], theta).p1_bar;
      for (const auto& model : models) {
        const OptResult r = p1_max(model, theta);
        REQUIRE(r.snr_at_opt >= theta - 1e-9);
        REQUIRE(std::abs(r.p1_bar - model.prob(r.mu_star, 1)) <= 1e-12 * std::max(r.p1_bar, 1e-30));
        // every multiplexed scheme at least matches the faint laser
        REQUIRE(r.p1_bar >= fl_p1 - 1e-9);
      }
    }
  }
}

TEST_CASE("p1_max: asymmetric index is nondecreasing in the crystal count") {
  for (const auto& eff : {Efficiencies(0.62, 0.5), Efficiencies(0.9, 0.8), Efficiencies(0.4, 0.3)}) {
    double prev = 0.0;
    for (const int m : {1, 2, 3, 4, 6, 8, 12}) {
      const double p1 = p1_max(SchemeModel(Architecture(AsymmetricChain{m, 0.0}), eff), 10.0).p1_bar;
      REQUIRE(p1 >= prev - 1e-9);
      prev = p1;
    }
  }
}

TEST_CASE("p1_max: ideal MHPS index is nondecreasing in m") {
  const Efficiencies ideal(1.0, 1.0);
  double prev = 0.0;
  for (const int m : {1, 2, 4, 8, 16}) {
    const double p1 = p1_max(SchemeModel(Architecture(IdealMhps{m, 0.0}), ideal), 10.0).p1_bar;
    REQUIRE(p1 >= prev - 1e-9);
    prev = p1;
  }
}

TEST_CASE("best_symmetric: ideal efficiencies want every crystal") {
  const OptResult r = best_symmetric(16, Efficiencies(1.0, 1.0), 10.0);
  REQUIRE(r.chosen_m == 16);
}

TEST_CASE("best_symmetric: lossy routers cap the useful tree size") {
  const OptResult r = best_symmetric(256, Efficiencies(0.9, 0.2), 10.0);
  REQUIRE(r.chosen_m < 256);
}

TEST_CASE("best_symmetric matches the exhaustive oracle") {
  const Efficiencies eff(0.6, 0.5);
  const OptResult best = best_symmetric(4, eff, 10.0);
  double oracle_p1 = -1.0;
  long long oracle_m = 0;
  for (int k = 0; k <= 2; ++k) {
    const OptResult r = p1_max(SchemeModel(Architecture(SymmetricTree{k, 0.0}), eff), 10.0);
    if (r.p1_bar > oracle_p1) {
      oracle_p1 = r.p1_bar;
      oracle_m = 1LL << k;
    }
  }
  REQUIRE(best.chosen_m == oracle_m);
  REQUIRE(best.p1_bar == Catch::Approx(oracle_p1).epsilon(1e-14));
}

TEST_CASE("best_symmetric breaks ties toward fewer crystals") {
  // eta = 0 collapses every depth to the faint laser, so k = 0 must win
  const OptResult r = best_symmetric(16, Efficiencies(0.0, 0.9), 10.0);
  REQUIRE(r.chosen_m == 1);
}

TEST_CASE("delta_percent limits") {
  REQUIRE(std::abs(delta_percent(Efficiencies(1.0, 1.0), 10.0, 4)) < 1e-6);
  REQUIRE(std::abs(delta_percent(Efficiencies(0.0, 0.5), 10.0, 4)) < 1e-6);
  // reported hardware point: asymmetric wins
  REQUIRE(delta_percent(Efficiencies(0.62, 0.5), 10.0, 4) > 0.0);
}

TEST_CASE("two-crystal ideal optimum") {
  const TwoCrystalOptimum opt = two_crystal_ideal_opt();
  REQUIRE(std::abs(opt.mu1 - (1.0 - std::exp(-1.0))) < 1e-6);
  REQUIRE(std::abs(opt.mu2 - 1.0) < 1e-6);
  REQUIRE(std::abs(opt.p1 - std::exp(std::exp(-1.0) - 1.0)) < 1e-9);
}

TEST_CASE("two-crystal optimum dominates the grid and the symmetric line") {
  const TwoCrystalOptimum opt = two_crystal_ideal_opt();
  const auto p1 = [](double mu1, double mu2) {
    return mu1 * std::exp(-mu1) + mu2 * std::exp(-(mu1 + mu2));
  };
  double grid_best = 0.0, symmetric_best = 0.0;
  for (int i = 0; i <= 2000; ++i) {
    const double a = 2.0 * i / 2000.0;
    symmetric_best = std::max(symmetric_best, p1(a, a));
    for (int j = 0; j <= 200; ++j) {
      grid_best = std::max(grid_best, p1(a, 2.0 * j / 200.0));
    }
  }
  REQUIRE(opt.p1 >= grid_best - 1e-9);
  REQUIRE(symmetric_best < opt.p1 - 1e-3);  // equal pumps are strictly suboptimal
}
