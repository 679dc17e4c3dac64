#pragma once

#include <cmath>
#include <cstdio>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "photon_mux/analytic.hpp"
#include "photon_mux/architecture.hpp"
#include "photon_mux/optimize.hpp"
#include "photon_mux/simulate.hpp"

// JSON surfaces. Documents are parsed with nlohmann/json under a strict
// unknown-key policy; emission is hand-rolled so every floating-point value
// is written with 17 significant digits and round-trips exactly.

namespace photon_mux::jsonio {

using nlohmann::json;

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void reject_unknown_keys(const json& obj, std::initializer_list<const char*> allowed,
                                const std::string& what) {
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const char* key : allowed) {
      if (item.key() == key) {
        known = true;
        break;
      }
    }
    if (!known) throw ConfigError(what + ": unknown key \"" + item.key() + "\"");
  }
}

inline double get_number(const json& obj, const char* key, const std::string& what) {
  if (!obj.contains(key)) throw ConfigError(what + ": missing key \"" + key + "\"");
  if (!obj.at(key).is_number()) throw ConfigError(what + ": key \"" + key + "\" must be a number");
  return obj.at(key).get<double>();
}

inline long long get_integer(const json& obj, const char* key, const std::string& what) {
  if (!obj.contains(key)) throw ConfigError(what + ": missing key \"" + key + "\"");
  if (!obj.at(key).is_number_integer()) {
    throw ConfigError(what + ": key \"" + key + "\" must be an integer");
  }
  return obj.at(key).get<long long>();
}

// {"scheme": "asymmetric", "m": 8, "pump": 0.2}
// {"scheme": "general", "channels": [{"mu": 0.2, "k": 1}, ...]}
// Symmetric trees take "k" (depth) or equivalently "m" = 2^k.
inline Architecture parse_architecture(const json& doc) {
  if (!doc.is_object()) throw ConfigError("architecture: expected a JSON object");
  if (!doc.contains("scheme") || !doc.at("scheme").is_string()) {
    throw ConfigError("architecture: missing string key \"scheme\"");
  }
  const std::string scheme = doc.at("scheme").get<std::string>();
  try {
    if (scheme == "faint_laser") {
      reject_unknown_keys(doc, {"scheme", "pump"}, "faint_laser");
      return Architecture(FaintLaser{get_number(doc, "pump", "faint_laser")});
    }
    if (scheme == "ideal") {
      reject_unknown_keys(doc, {"scheme", "m", "pump"}, "ideal");
      return Architecture(IdealMhps{static_cast<int>(get_integer(doc, "m", "ideal")),
                                    get_number(doc, "pump", "ideal")});
    }
    if (scheme == "symmetric") {
      reject_unknown_keys(doc, {"scheme", "k", "m", "pump"}, "symmetric");
      if (doc.contains("k") && doc.contains("m")) {
        throw ConfigError("symmetric: give either \"k\" or \"m\", not both");
      }
      int depth = 0;
      if (doc.contains("k")) {
        depth = static_cast<int>(get_integer(doc, "k", "symmetric"));
      } else {
        const long long m = get_integer(doc, "m", "symmetric");
        if (m < 1 || (m & (m - 1)) != 0) throw ConfigError("symmetric: m must be a power of two");
        while ((1LL << depth) < m) ++depth;
      }
      return Architecture(SymmetricTree{depth, get_number(doc, "pump", "symmetric")});
    }
    if (scheme == "asymmetric") {
      reject_unknown_keys(doc, {"scheme", "m", "pump"}, "asymmetric");
      return Architecture(AsymmetricChain{static_cast<int>(get_integer(doc, "m", "asymmetric")),
                                          get_number(doc, "pump", "asymmetric")});
    }
    if (scheme == "general") {
      reject_unknown_keys(doc, {"scheme", "channels"}, "general");
      if (!doc.contains("channels") || !doc.at("channels").is_array()) {
        throw ConfigError("general: missing array key \"channels\"");
      }
      GeneralChannels gen;
      for (const auto& entry : doc.at("channels")) {
        if (!entry.is_object()) throw ConfigError("general: channels must be objects");
        reject_unknown_keys(entry, {"mu", "k"}, "general channel");
        gen.channels.push_back({get_number(entry, "mu", "general channel"),
                                static_cast<int>(get_integer(entry, "k", "general channel"))});
      }
      return Architecture(std::move(gen));
    }
  } catch (const std::invalid_argument& err) {
    throw ConfigError(std::string("architecture: ") + err.what());
  }
  throw ConfigError("architecture: unknown scheme \"" + scheme +
                    "\" (expected faint_laser, ideal, symmetric, asymmetric or general)");
}

inline Architecture parse_architecture(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& err) {
    throw ConfigError(std::string("architecture: invalid JSON: ") + err.what());
  }
  return parse_architecture(doc);
}

// --- emission -------------------------------------------------------------

inline std::string number17(double v) {
  if (!std::isfinite(v)) return "null";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string number_array(const std::vector<double>& values) {
  std::string out = "[";
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ", ";
    out += number17(values[i]);
  }
  return out + "]";
}

inline std::string integer_array(const std::vector<std::uint64_t>& values) {
  std::string out = "[";
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ", ";
    out += std::to_string(values[i]);
  }
  return out + "]";
}

inline std::string to_json(const Architecture& arch) {
  if (const auto* fl = arch.get_if<FaintLaser>()) {
    return "{\"scheme\": \"faint_laser\", \"pump\": " + number17(fl->pump) + "}";
  }
  if (const auto* id = arch.get_if<IdealMhps>()) {
    return "{\"scheme\": \"ideal\", \"m\": " + std::to_string(id->m) +
           ", \"pump\": " + number17(id->pump) + "}";
  }
  if (const auto* sym = arch.get_if<SymmetricTree>()) {
    return "{\"scheme\": \"symmetric\", \"k\": " + std::to_string(sym->depth) +
           ", \"pump\": " + number17(sym->pump) + "}";
  }
  if (const auto* asym = arch.get_if<AsymmetricChain>()) {
    return "{\"scheme\": \"asymmetric\", \"m\": " + std::to_string(asym->m) +
           ", \"pump\": " + number17(asym->pump) + "}";
  }
  const auto* gen = arch.get_if<GeneralChannels>();
  std::string out = "{\"scheme\": \"general\", \"channels\": [";
  for (std::size_t i = 0; i < gen->channels.size(); ++i) {
    if (i) out += ", ";
    out += "{\"mu\": " + number17(gen->channels[i].mu) +
           ", \"k\": " + std::to_string(gen->channels[i].k) + "}";
  }
  return out + "]}";
}

inline std::string to_json(const McEstimate& est) {
  std::string out = "{\n";
  out += "  \"p_hat\": " + number_array(est.p_hat) + ",\n";
  out += "  \"stderr\": " + number_array(est.std_err) + ",\n";
  out += "  \"n_trials\": " + std::to_string(est.n_trials) + ",\n";
  out += "  \"seed\": " + std::to_string(est.seed) + ",\n";
  out += "  \"chi_hist\": " + integer_array(est.chi_hist) + ",\n";
  out += "  \"overflow\": " + std::to_string(est.overflow) + "\n";
  return out + "}";
}

inline std::string distribution_report_json(const Architecture& arch, const Efficiencies& eff,
                                            double pump, const PhotonDistribution& dist) {
  std::string out = "{\n";
  out += "  \"scheme\": " + to_json(arch) + ",\n";
  out += "  \"eta\": " + number17(eff.eta) + ",\n";
  out += "  \"gamma\": " + number17(eff.gamma) + ",\n";
  out += "  \"pump\": " + number17(pump) + ",\n";
  out += "  \"n_max\": " + std::to_string(dist.n_max()) + ",\n";
  out += "  \"probs\": " + number_array(dist.probs) + ",\n";
  out += "  \"p0\": " + number17(dist.p0) + ",\n";
  out += "  \"p1\": " + number17(dist.p1) + ",\n";
  out += "  \"snr\": " + number17(dist.snr) + "\n";
  return out + "}";
}

inline std::string opt_result_json(const Architecture& arch, const Efficiencies& eff,
                                   const OptResult& r) {
  std::string out = "{\n";
  out += "  \"scheme\": " + to_json(arch) + ",\n";
  out += "  \"eta\": " + number17(eff.eta) + ",\n";
  out += "  \"gamma\": " + number17(eff.gamma) + ",\n";
  out += "  \"theta\": " + number17(r.theta) + ",\n";
  out += "  \"mu_star\": " + number17(r.mu_star) + ",\n";
  out += "  \"p1_bar\": " + number17(r.p1_bar) + ",\n";
  out += "  \"snr_at_opt\": " + number17(r.snr_at_opt) + ",\n";
  out += "  \"chosen_m\": " + std::to_string(r.chosen_m) + ",\n";
  out += std::string("  \"snr_monotone\": ") + (r.snr_monotone ? "true" : "false") + "\n";
  return out + "}";
}

}  // namespace photon_mux::jsonio
