#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "photon_mux/efficiencies.hpp"

namespace photon_mux {

// One crystal of the general multiplexed description: mean generated pair
// number and the number of binary routers its signal photon traverses.
// List position is the switch priority; the front channel is checked first
// and is the one routed to the output when no detector fires.
struct ChannelSpec {
  double mu = 0.0;
  int k = 0;

  friend bool operator==(const ChannelSpec&, const ChannelSpec&) = default;
};

struct FaintLaser {
  double pump = 0.0;  // mean photon number per pulse
};

struct IdealMhps {
  int m = 1;          // crystal count, all heralded through a lossless m-to-1 switch
  double pump = 0.0;  // mean pair number per crystal
};

struct SymmetricTree {
  int depth = 0;      // router tree depth k; m = 2^k crystals
  double pump = 0.0;  // output-side mean: each crystal is fed pump / gamma^depth
};

struct AsymmetricChain {
  int m = 1;          // crystal count; crystal i sits behind min(i, m-1) routers
  double pump = 0.0;  // output-side mean: crystal i is fed pump / gamma^k_i
};

struct GeneralChannels {
  std::vector<ChannelSpec> channels;
};

inline constexpr double kDefaultMuOverflowBound = 1e6;
inline constexpr std::size_t kMaxExpandedChannels = std::size_t{1} << 22;

// Tagged description of one source scheme. Values are immutable after
// construction and safe to share between threads.
class Architecture {
 public:
  using Variant = std::variant<FaintLaser, IdealMhps, SymmetricTree,
                               AsymmetricChain, GeneralChannels>;

  Architecture(FaintLaser v) : value_(check(v)) {}
  Architecture(IdealMhps v) : value_(check(v)) {}
  Architecture(SymmetricTree v) : value_(check(v)) {}
  Architecture(AsymmetricChain v) : value_(check(v)) {}
  Architecture(GeneralChannels v) : value_(check(std::move(v))) {}

  const Variant& value() const { return value_; }

  template <typename T>
  const T* get_if() const { return std::get_if<T>(&value_); }

  std::string scheme_name() const {
    struct Namer {
      std::string operator()(const FaintLaser&) const { return "faint_laser"; }
      std::string operator()(const IdealMhps&) const { return "ideal"; }
      std::string operator()(const SymmetricTree&) const { return "symmetric"; }
      std::string operator()(const AsymmetricChain&) const { return "asymmetric"; }
      std::string operator()(const GeneralChannels&) const { return "general"; }
    };
    return std::visit(Namer{}, value_);
  }

  long long crystal_count() const {
    struct Counter {
      long long operator()(const FaintLaser&) const { return 1; }
      long long operator()(const IdealMhps& v) const { return v.m; }
      long long operator()(const SymmetricTree& v) const {
        if (v.depth > 62) throw std::overflow_error("symmetric tree too deep to count crystals");
        return 1LL << v.depth;
      }
      long long operator()(const AsymmetricChain& v) const { return v.m; }
      long long operator()(const GeneralChannels& v) const {
        return static_cast<long long>(v.channels.size());
      }
    };
    return std::visit(Counter{}, value_);
  }

  // Nominal pump parameter; 1.0 for general architectures, whose channel
  // means act as weights for a global scale factor.
  double nominal_pump() const {
    struct Pump {
      double operator()(const FaintLaser& v) const { return v.pump; }
      double operator()(const IdealMhps& v) const { return v.pump; }
      double operator()(const SymmetricTree& v) const { return v.pump; }
      double operator()(const AsymmetricChain& v) const { return v.pump; }
      double operator()(const GeneralChannels&) const { return 1.0; }
    };
    return std::visit(Pump{}, value_);
  }

 private:
  static void check_pump(double pump) {
    if (!(pump >= 0.0) || !std::isfinite(pump)) {
      throw std::invalid_argument("pump parameter must be finite and >= 0");
    }
  }
  static FaintLaser check(FaintLaser v) {
    check_pump(v.pump);
    return v;
  }
  static IdealMhps check(IdealMhps v) {
    check_pump(v.pump);
    if (v.m < 1) throw std::invalid_argument("crystal count m must be >= 1");
    return v;
  }
  static SymmetricTree check(SymmetricTree v) {
    check_pump(v.pump);
    if (v.depth < 0) throw std::invalid_argument("tree depth k must be >= 0");
    return v;
  }
  static AsymmetricChain check(AsymmetricChain v) {
    check_pump(v.pump);
    if (v.m < 1) throw std::invalid_argument("crystal count m must be >= 1");
    return v;
  }
  static GeneralChannels check(GeneralChannels v) {
    if (v.channels.empty()) throw std::invalid_argument("general architecture needs at least one channel");
    for (const auto& c : v.channels) {
      if (!(c.mu >= 0.0) || !std::isfinite(c.mu)) {
        throw std::invalid_argument("channel mean pair number must be finite and >= 0");
      }
      if (c.k < 0) throw std::invalid_argument("channel router depth must be >= 0");
    }
    return v;
  }

  Variant value_;
};

// Router depth of crystal i (1-based) in the asymmetric chain of m crystals:
// i routers for i <= m-1, and m-1 for the last crystal, which shares the
// deepest router with its neighbour.
inline int asymmetric_depth(int i, int m) { return i <= m - 1 ? i : m - 1; }

// Expands an architecture into the per-channel description that the general
// evaluator and the Monte Carlo simulator consume. Channel order encodes the
// switch priority. Pump compensation mu_i = pump / gamma^k_i diverges as
// gamma^-k; any channel mean above mu_overflow_bound is rejected as a
// physically meaningless operating point.
inline std::vector<ChannelSpec> expand(const Architecture& arch, const Efficiencies& eff,
                                       double mu_overflow_bound = kDefaultMuOverflowBound) {
  std::vector<ChannelSpec> out;
  const double gamma = eff.gamma;

  if (const auto* fl = arch.get_if<FaintLaser>()) {
    out.push_back({fl->pump, 0});
  } else if (const auto* id = arch.get_if<IdealMhps>()) {
    out.assign(static_cast<std::size_t>(id->m), ChannelSpec{id->pump, 0});
  } else if (const auto* sym = arch.get_if<SymmetricTree>()) {
    if (sym->depth >= 63 || (std::size_t{1} << sym->depth) > kMaxExpandedChannels) {
      throw std::length_error("symmetric tree too deep to expand explicitly");
    }
    const double mu = sym->pump / std::pow(gamma, sym->depth);
    out.assign(std::size_t{1} << sym->depth, ChannelSpec{mu, sym->depth});
  } else if (const auto* asym = arch.get_if<AsymmetricChain>()) {
    out.reserve(static_cast<std::size_t>(asym->m));
    for (int i = 1; i <= asym->m; ++i) {
      const int k = asymmetric_depth(i, asym->m);
      out.push_back({asym->pump / std::pow(gamma, k), k});
    }
  } else {
    out = arch.get_if<GeneralChannels>()->channels;
  }

  for (const auto& c : out) {
    if (!(c.mu <= mu_overflow_bound)) {
      throw std::domain_error("channel mean pair number exceeds overflow bound: pump compensation diverged");
    }
  }
  return out;
}

}  // namespace photon_mux
