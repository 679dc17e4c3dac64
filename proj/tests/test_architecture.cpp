#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "photon_mux/architecture.hpp"

using namespace photon_mux;

TEST_CASE("efficiencies validate their ranges") {
  REQUIRE_NOTHROW(Efficiencies(0.0, 1.0));
  REQUIRE_NOTHROW(Efficiencies(1.0, 0.01));
  REQUIRE_THROWS_AS(Efficiencies(-0.1, 0.5), std::invalid_argument);
  REQUIRE_THROWS_AS(Efficiencies(1.1, 0.5), std::invalid_argument);
  REQUIRE_THROWS_AS(Efficiencies(0.5, 0.0), std::invalid_argument);  // gamma = 0 rejected
  REQUIRE_THROWS_AS(Efficiencies(0.5, 1.5), std::invalid_argument);
  REQUIRE_THROWS_AS(Efficiencies(std::nan(""), 0.5), std::invalid_argument);
}

TEST_CASE("expand: asymmetric chain with pump compensation") {
  const auto channels = expand(Architecture(AsymmetricChain{3, 0.1}), Efficiencies(1.0, 0.5));
  REQUIRE(channels.size() == 3);
  REQUIRE(channels[0].k == 1);
  REQUIRE(channels[1].k == 2);
  REQUIRE(channels[2].k == 2);
  REQUIRE(channels[0].mu == Catch::Approx(0.2).margin(1e-15));
  REQUIRE(channels[1].mu == Catch::Approx(0.4).margin(1e-15));
  REQUIRE(channels[2].mu == Catch::Approx(0.4).margin(1e-15));
}

TEST_CASE("expand: symmetric tree") {
  const auto channels = expand(Architecture(SymmetricTree{2, 0.1}), Efficiencies(1.0, 0.5));
  REQUIRE(channels.size() == 4);
  for (const auto& c : channels) {
    REQUIRE(c.k == 2);
    REQUIRE(c.mu == Catch::Approx(0.4).margin(1e-15));
  }
}

TEST_CASE("expand: faint laser and ideal source") {
  const auto fl = expand(Architecture(FaintLaser{0.3}), Efficiencies(0.5, 0.5));
  REQUIRE(fl.size() == 1);
  REQUIRE(fl[0].mu == 0.3);
  REQUIRE(fl[0].k == 0);

  const auto ideal = expand(Architecture(IdealMhps{4, 0.2}), Efficiencies(0.5, 0.5));
  REQUIRE(ideal.size() == 4);
  for (const auto& c : ideal) {
    REQUIRE(c.mu == 0.2);
    REQUIRE(c.k == 0);
  }
}

TEST_CASE("expand: general channels pass through") {
  const GeneralChannels gen{{{0.2, 1}, {0.4, 2}}};
  const auto channels = expand(Architecture(gen), Efficiencies(0.5, 0.5));
  REQUIRE(channels == gen.channels);
}

TEST_CASE("expand is deterministic and order-stable") {
  const Architecture arch(AsymmetricChain{5, 0.15});
  const Efficiencies eff(0.7, 0.6);
  const auto a = expand(arch, eff);
  const auto b = expand(arch, eff);
  REQUIRE(a == b);
  // last two channels share depth and pump
  REQUIRE(a[3].k == a[4].k);
  REQUIRE(a[3].mu == a[4].mu);
}

TEST_CASE("expand: gamma = 1 removes pump compensation") {
  const auto channels = expand(Architecture(AsymmetricChain{4, 0.2}), Efficiencies(0.5, 1.0));
  for (const auto& c : channels) REQUIRE(c.mu == 0.2);
}

TEST_CASE("expand rejects diverged pump compensation") {
  // mu_i = 1 / 0.3^29 ~ 1.4e15 blows past the default 1e6 bound
  REQUIRE_THROWS_AS(expand(Architecture(AsymmetricChain{30, 1.0}), Efficiencies(0.5, 0.3)),
                    std::domain_error);
  // the bound is configurable
  REQUIRE_NOTHROW(expand(Architecture(AsymmetricChain{30, 1.0}), Efficiencies(0.5, 0.3), 1e20));
  REQUIRE_THROWS_AS(expand(Architecture(GeneralChannels{{{1e7, 0}}}), Efficiencies(0.5, 0.5)),
                    std::domain_error);
}

TEST_CASE("architecture validation") {
  REQUIRE_THROWS_AS(Architecture(FaintLaser{-0.1}), std::invalid_argument);
  REQUIRE_THROWS_AS(Architecture(IdealMhps{0, 0.1}), std::invalid_argument);
  REQUIRE_THROWS_AS(Architecture(SymmetricTree{-1, 0.1}), std::invalid_argument);
  REQUIRE_THROWS_AS(Architecture(AsymmetricChain{0, 0.1}), std::invalid_argument);
  REQUIRE_THROWS_AS(Architecture(GeneralChannels{{}}), std::invalid_argument);
  REQUIRE_THROWS_AS(Architecture(GeneralChannels{{{-0.2, 0}}}), std::invalid_argument);
  REQUIRE_THROWS_AS(Architecture(GeneralChannels{{{0.2, -1}}}), std::invalid_argument);
}

TEST_CASE("crystal counts and scheme names") {
  REQUIRE(Architecture(FaintLaser{0.1}).crystal_count() == 1);
  REQUIRE(Architecture(SymmetricTree{4, 0.1}).crystal_count() == 16);
  REQUIRE(Architecture(AsymmetricChain{7, 0.1}).crystal_count() == 7);
  REQUIRE(Architecture(FaintLaser{0.1}).scheme_name() == "faint_laser");
  REQUIRE(Architecture(IdealMhps{2, 0.1}).scheme_name() == "ideal");
  REQUIRE(Architecture(SymmetricTree{1, 0.1}).scheme_name() == "symmetric");
  REQUIRE(Architecture(AsymmetricChain{2, 0.1}).scheme_name() == "asymmetric");
  REQUIRE(Architecture(GeneralChannels{{{0.1, 0}}}).scheme_name() == "general");
}

TEST_CASE("asymmetric depths follow the chain rule") {
  REQUIRE(asymmetric_depth(1, 1) == 0);
  REQUIRE(asymmetric_depth(1, 4) == 1);
  REQUIRE(asymmetric_depth(3, 4) == 3);
  REQUIRE(asymmetric_depth(4, 4) == 3);
}
