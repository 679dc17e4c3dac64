// photon-mux: photon-number statistics, SNR-constrained performance indices,
// parameter sweeps and Monte Carlo validation for multiplexed heralded
// single-photon source architectures.
//
// Exit codes: 0 success, 2 configuration error, 3 validation failure,
// 4 I/O failure.

#include <sys/statvfs.h>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "photon_mux/analytic.hpp"
#include "photon_mux/architecture.hpp"
#include "photon_mux/detail/sha256.hpp"
#include "photon_mux/json_io.hpp"
#include "photon_mux/optimize.hpp"
#include "photon_mux/simulate.hpp"
#include "photon_mux/svg.hpp"
#include "photon_mux/sweep.hpp"

namespace {

namespace fs = std::filesystem;
using photon_mux::Architecture;
using photon_mux::Efficiencies;
using photon_mux::OptResult;
using photon_mux::SchemeModel;
using json = nlohmann::json;

constexpr std::uint64_t kDefaultSeed = 20120601;
constexpr std::uint64_t kDefaultTrials = 1000000;

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ValidationFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string fmt17(double v) { return photon_mux::jsonio::number17(v); }

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << content;
  if (!out) throw IoError("write failed: " + path.string());
}

// Config file: flat JSON object; command-line flags override its keys,
// which in turn override built-in defaults.
json load_config(const std::string& path, std::initializer_list<const char*> allowed) {
  if (path.empty()) return json::object();
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file " + path);
  json cfg;
  try {
    in >> cfg;
  } catch (const json::parse_error& err) {
    throw photon_mux::jsonio::ConfigError(std::string("config: invalid JSON: ") + err.what());
  }
  if (!cfg.is_object()) throw photon_mux::jsonio::ConfigError("config: expected a JSON object");
  photon_mux::jsonio::reject_unknown_keys(cfg, allowed, "config");
  return cfg;
}

double pick_double(const CLI::Option* opt, double flag_value, const json& cfg, const char* key,
                   double fallback) {
  if (opt->count() > 0) return flag_value;
  if (cfg.contains(key)) return photon_mux::jsonio::get_number(cfg, key, "config");
  return fallback;
}

std::uint64_t pick_u64(const CLI::Option* opt, std::uint64_t flag_value, const json& cfg,
                       const char* key, std::uint64_t fallback) {
  if (opt->count() > 0) return flag_value;
  if (cfg.contains(key)) return static_cast<std::uint64_t>(photon_mux::jsonio::get_integer(cfg, key, "config"));
  return fallback;
}

int pick_int(const CLI::Option* opt, int flag_value, const json& cfg, const char* key, int fallback) {
  if (opt->count() > 0) return flag_value;
  if (cfg.contains(key)) return static_cast<int>(photon_mux::jsonio::get_integer(cfg, key, "config"));
  return fallback;
}

std::string pick_string(const CLI::Option* opt, const std::string& flag_value, const json& cfg,
                        const char* key, const std::string& fallback) {
  if (opt->count() > 0) return flag_value;
  if (cfg.contains(key) && cfg.at(key).is_string()) return cfg.at(key).get<std::string>();
  return fallback;
}

std::pair<std::size_t, std::size_t> parse_grid_spec(const std::string& spec) {
  const auto x = spec.find('x');
  if (x == std::string::npos) {
    throw photon_mux::jsonio::ConfigError("grid: expected \"<eta>x<gamma>\", e.g. 101x101");
  }
  try {
    const std::size_t ne = std::stoul(spec.substr(0, x));
    const std::size_t ng = std::stoul(spec.substr(x + 1));
    if (ne < 2 || ng < 2) throw photon_mux::jsonio::ConfigError("grid: each axis needs at least 2 points");
    return {ne, ng};
  } catch (const std::logic_error&) {
    throw photon_mux::jsonio::ConfigError("grid: cannot parse \"" + spec + "\"");
  }
}

// Architecture from --scheme plus structure flags, or from the config file's
// "scheme" object (required for general channel lists).
struct SchemeFlags {
  std::string name;
  int m = 0;
  int k = -1;
  double pump = -1.0;
  const CLI::Option* name_opt = nullptr;
  const CLI::Option* m_opt = nullptr;
  const CLI::Option* k_opt = nullptr;
  const CLI::Option* pump_opt = nullptr;
};

Architecture resolve_architecture(const SchemeFlags& flags, const json& cfg, bool pump_required) {
  using photon_mux::jsonio::ConfigError;
  const bool has_cfg_scheme = cfg.contains("scheme");

  if (!flags.name_opt->count() && has_cfg_scheme) {
    return photon_mux::jsonio::parse_architecture(cfg.at("scheme"));
  }
  if (!flags.name_opt->count()) {
    throw ConfigError("no scheme given: use --scheme or a config file with a \"scheme\" object");
  }

  const std::string& name = flags.name;
  const int m = pick_int(flags.m_opt, flags.m, cfg, "m", 0);
  const int k = pick_int(flags.k_opt, flags.k, cfg, "k", -1);
  double pump = pick_double(flags.pump_opt, flags.pump, cfg, "pump", -1.0);
  if (pump < 0.0) {
    if (pump_required) throw ConfigError("scheme \"" + name + "\" needs --pump");
    pump = 0.0;
  }

  try {
    if (name == "faint_laser") return Architecture(photon_mux::FaintLaser{pump});
    if (name == "ideal") {
      if (m < 1) throw ConfigError("scheme \"ideal\" needs --m");
      return Architecture(photon_mux::IdealMhps{m, pump});
    }
    if (name == "symmetric") {
      if (k >= 0) return Architecture(photon_mux::SymmetricTree{k, pump});
      if (m >= 1) {
        if (!photon_mux::is_power_of_two(m)) throw ConfigError("symmetric scheme needs m = 2^k");
        int depth = 0;
        while ((1 << depth) < m) ++depth;
        return Architecture(photon_mux::SymmetricTree{depth, pump});
      }
      throw ConfigError("scheme \"symmetric\" needs --k (or --m = 2^k)");
    }
    if (name == "asymmetric") {
      if (m < 1) throw ConfigError("scheme \"asymmetric\" needs --m");
      return Architecture(photon_mux::AsymmetricChain{m, pump});
    }
    if (name == "general") {
      if (!has_cfg_scheme) {
        throw ConfigError("scheme \"general\" needs a config file with a \"scheme\" object");
      }
      return photon_mux::jsonio::parse_architecture(cfg.at("scheme"));
    }
  } catch (const std::invalid_argument& err) {
    throw ConfigError(std::string("scheme: ") + err.what());
  }
  throw ConfigError("unknown scheme \"" + name +
                    "\" (expected faint_laser, ideal, symmetric, asymmetric or general)");
}

std::string describe(const Architecture& arch) {
  std::string out = arch.scheme_name();
  if (const auto* id = arch.get_if<photon_mux::IdealMhps>()) out += " m=" + std::to_string(id->m);
  if (const auto* sym = arch.get_if<photon_mux::SymmetricTree>()) {
    out += " k=" + std::to_string(sym->depth) + " (m=" + std::to_string(1LL << sym->depth) + ")";
  }
  if (const auto* asym = arch.get_if<photon_mux::AsymmetricChain>()) out += " m=" + std::to_string(asym->m);
  if (const auto* gen = arch.get_if<photon_mux::GeneralChannels>()) {
    out += " (" + std::to_string(gen->channels.size()) + " channels)";
  }
  return out;
}

// ---------------------------------------------------------------------------
// dist

int cmd_dist(const SchemeFlags& scheme_flags, const json& cfg, double eta, double gamma,
             const CLI::Option* eta_opt, const CLI::Option* gamma_opt, const std::string& out_path,
             const CLI::Option* out_opt) {
  const Architecture arch = resolve_architecture(scheme_flags, cfg, /*pump_required=*/true);
  const Efficiencies eff(pick_double(eta_opt, eta, cfg, "eta", 1.0),
                         pick_double(gamma_opt, gamma, cfg, "gamma", 1.0));
  const int n_max = cfg.contains("n_max")
                        ? static_cast<int>(photon_mux::jsonio::get_integer(cfg, "n_max", "config"))
                        : photon_mux::kDefaultNMax;

  const SchemeModel model(arch, eff);
  const double pump = arch.nominal_pump();
  const photon_mux::PhotonDistribution dist = model.distribution(pump, n_max);

  std::cout << "scheme: " << describe(arch) << "\n";
  std::cout << "eta = " << fmt17(eff.eta) << ", gamma = " << fmt17(eff.gamma)
            << ", pump = " << fmt17(pump) << "\n\n";
  std::cout << "  n   P(N=n)\n";
  for (int n = 0; n <= dist.n_max(); ++n) {
    if (n > 8 && dist.probs[n] < 1e-15 && n < dist.n_max()) continue;  // keep the table short
    std::printf("%3d   %s\n", n, fmt17(dist.probs[n]).c_str());
  }
  std::cout << "\nP1  = " << fmt17(dist.p1) << "\n";
  std::cout << "SNR = " << (std::isfinite(dist.snr) ? fmt17(dist.snr) : "inf") << "\n";

  const std::string report = photon_mux::jsonio::distribution_report_json(arch, eff, pump, dist);
  if (out_opt->count() || cfg.contains("out")) {
    write_file(pick_string(out_opt, out_path, cfg, "out", ""), report + "\n");
  } else {
    std::cout << "\n" << report << "\n";
  }
  return 0;
}

// ---------------------------------------------------------------------------
// optimize

int cmd_optimize(const SchemeFlags& scheme_flags, const json& cfg, double eta, double gamma,
                 double theta, const CLI::Option* eta_opt, const CLI::Option* gamma_opt,
                 const CLI::Option* theta_opt, const std::string& out_path,
                 const CLI::Option* out_opt) {
  const Efficiencies eff(pick_double(eta_opt, eta, cfg, "eta", 1.0),
                         pick_double(gamma_opt, gamma, cfg, "gamma", 1.0));
  const double theta_v = pick_double(theta_opt, theta, cfg, "theta", 10.0);

  Architecture arch(photon_mux::FaintLaser{0.0});
  OptResult result;
  if (scheme_flags.name_opt->count() && scheme_flags.name == "symmetric_best") {
    const int m_max = pick_int(scheme_flags.m_opt, scheme_flags.m, cfg, "m", 0);
    if (m_max < 1) {
      throw photon_mux::jsonio::ConfigError("symmetric_best needs --m (largest crystal count)");
    }
    result = photon_mux::best_symmetric(m_max, eff, theta_v);
    int depth = 0;
    while ((1LL << depth) < result.chosen_m) ++depth;
    arch = Architecture(photon_mux::SymmetricTree{depth, result.mu_star});
  } else {
    arch = resolve_architecture(scheme_flags, cfg, /*pump_required=*/false);
    result = photon_mux::p1_max(SchemeModel(arch, eff), theta_v);
  }

  std::cout << "scheme: " << describe(arch) << "\n";
  std::cout << "theta        = " << fmt17(result.theta) << "\n";
  std::cout << "mu_star      = " << fmt17(result.mu_star) << "\n";
  std::cout << "p1_bar       = " << fmt17(result.p1_bar) << "\n";
  std::cout << "snr_at_opt   = " << fmt17(result.snr_at_opt) << "\n";
  std::cout << "chosen_m     = " << result.chosen_m << "\n";
  if (!result.snr_monotone) {
    std::cout << "note: sampled SNR curve was not monotone; global grid search used\n";
  }
  const std::string report = photon_mux::jsonio::opt_result_json(arch, eff, result);
  if (out_opt->count() || cfg.contains("out")) {
    write_file(pick_string(out_opt, out_path, cfg, "out", ""), report + "\n");
  } else {
    std::cout << "\n" << report << "\n";
  }
  return 0;
}

// ---------------------------------------------------------------------------
// sweep

std::vector<double> axis_from_config(const json& cfg, const char* key, std::size_t count) {
  double lo = 0.01, hi = 1.0;
  if (cfg.contains(key)) {
    const auto& range = cfg.at(key);
    if (!range.is_array() || range.size() != 2 || !range[0].is_number() || !range[1].is_number()) {
      throw photon_mux::jsonio::ConfigError(std::string("config: ") + key + " must be [lo, hi]");
    }
    lo = range[0].get<double>();
    hi = range[1].get<double>();
  }
  return photon_mux::linspace(lo, hi, count);
}

int cmd_sweep(const std::string& metric, const SchemeFlags& scheme_flags, const json& cfg,
              double eta, double gamma, double theta, const std::string& grid_spec,
              const CLI::Option* eta_opt, const CLI::Option* gamma_opt, const CLI::Option* theta_opt,
              const CLI::Option* grid_opt, const std::string& out_path, const CLI::Option* out_opt,
              const std::string& svg_path, const CLI::Option* svg_opt) {
  using photon_mux::jsonio::ConfigError;
  const double theta_v = pick_double(theta_opt, theta, cfg, "theta", 10.0);
  const std::string out_file = pick_string(out_opt, out_path, cfg, "out", "");
  const std::string svg_file = pick_string(svg_opt, svg_path, cfg, "svg", "");

  std::ostringstream csv;
  std::string svg_text;

  if (metric == "scalability") {
    const Efficiencies eff(pick_double(eta_opt, eta, cfg, "eta", 1.0),
                           pick_double(gamma_opt, gamma, cfg, "gamma", 1.0));
    const int m_max = pick_int(scheme_flags.m_opt, scheme_flags.m, cfg, "m", 256);
    const std::string scheme = scheme_flags.name_opt->count() ? scheme_flags.name : "asymmetric";
    photon_mux::CurveScheme kind;
    if (scheme == "faint_laser") kind = photon_mux::CurveScheme::FaintLaser;
    else if (scheme == "ideal") kind = photon_mux::CurveScheme::Ideal;
    else if (scheme == "symmetric") kind = photon_mux::CurveScheme::Symmetric;
    else if (scheme == "asymmetric") kind = photon_mux::CurveScheme::Asymmetric;
    else throw ConfigError("scalability sweep: unsupported scheme \"" + scheme + "\"");
    std::vector<int> ms;
    if (kind == photon_mux::CurveScheme::Symmetric) {
      for (int m = 2; m <= m_max; m *= 2) ms.push_back(m);
    } else {
      for (int m = 2; m <= m_max; ++m) ms.push_back(m);
    }
    if (ms.empty()) throw ConfigError("scalability sweep: --m must be at least 2");
    const auto curve = photon_mux::scalability_curve(kind, theta_v, eff, ms);
    photon_mux::write_curve_csv(csv, curve);
    if (!svg_file.empty()) {
      photon_mux::svg::Series series;
      series.label = scheme;
      for (const auto& pt : curve) {
        series.x.push_back(pt.m);
        series.y.push_back(pt.p1);
      }
      photon_mux::svg::ChartSpec spec;
      spec.title = scheme + " scalability, theta=" + fmt17(theta_v);
      spec.x_label = "crystal count m";
      spec.y_label = "optimized one-photon probability";
      spec.x_scale = photon_mux::svg::Scale::Log2;
      svg_text = photon_mux::svg::line_chart(spec, {series});
    }
  } else {
    photon_mux::GridMetric grid_metric;
    if (metric == "p1_symmetric_best") grid_metric = photon_mux::GridMetric::P1SymmetricBest;
    else if (metric == "p1_asymmetric") grid_metric = photon_mux::GridMetric::P1Asymmetric;
    else if (metric == "delta") grid_metric = photon_mux::GridMetric::Delta;
    else throw ConfigError("unknown sweep metric \"" + metric + "\"");

    const int m = pick_int(scheme_flags.m_opt, scheme_flags.m, cfg, "m", 4);
    const auto [ne, ng] = parse_grid_spec(pick_string(grid_opt, grid_spec, cfg, "grid", "101x101"));
    const auto eta_axis = axis_from_config(cfg, "eta_range", ne);
    const auto gamma_axis = axis_from_config(cfg, "gamma_range", ng);
    const photon_mux::SweepGrid grid =
        photon_mux::contour_grid(grid_metric, theta_v, m, eta_axis, gamma_axis);
    photon_mux::write_grid_csv(csv, grid);
    if (!svg_file.empty()) {
      photon_mux::svg::HeatmapSpec spec;
      spec.title = metric + ", m=" + std::to_string(m) + ", theta=" + fmt17(theta_v);
      spec.x_label = "detection efficiency eta";
      spec.y_label = "transmissivity gamma";
      double lo = grid.values[0], hi = grid.values[0];
      for (const double v : grid.values) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
      for (int i = 1; i <= 6; ++i) spec.contour_levels.push_back(lo + (hi - lo) * i / 7.0);
      svg_text = photon_mux::svg::heatmap(spec, grid.eta_axis, grid.gamma_axis, grid.values);
    }
  }

  if (out_file.empty()) {
    std::cout << csv.str();
  } else {
    write_file(out_file, csv.str());
    std::cout << "wrote " << out_file << "\n";
  }
  if (!svg_file.empty()) {
    write_file(svg_file, svg_text);
    std::cout << "wrote " << svg_file << "\n";
  }
  return 0;
}

// ---------------------------------------------------------------------------
// mc-validate

int cmd_mc_validate(const json& cfg, std::uint64_t trials, std::uint64_t seed, int max_cases,
                    const CLI::Option* trials_opt, const CLI::Option* seed_opt,
                    const std::string& out_path, const CLI::Option* out_opt) {
  const std::uint64_t n_trials = pick_u64(trials_opt, trials, cfg, "trials", kDefaultTrials);
  const std::uint64_t run_seed = pick_u64(seed_opt, seed, cfg, "seed", kDefaultSeed);

  auto grid = photon_mux::standard_validation_grid();
  if (max_cases > 0 && static_cast<std::size_t>(max_cases) < grid.size()) {
    grid.erase(grid.begin() + max_cases, grid.end());
  }

  bool all_pass = true;
  std::string report_json = "{\n  \"trials\": " + std::to_string(n_trials) +
                            ",\n  \"seed\": " + std::to_string(run_seed) + ",\n  \"cases\": [\n";
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto report = photon_mux::validate_case(grid[i], n_trials, photon_mux::case_seed(run_seed, i));
    all_pass = all_pass && report.pass();
    std::printf("[%s] %-34s worst excess %+.3e, worst chi z %.2f\n",
                report.pass() ? "pass" : "FAIL", report.name.c_str(), report.worst_dist_excess,
                report.worst_chi_z);
    report_json += std::string("    {\"name\": \"") + report.name + "\", \"pass\": " +
                   (report.pass() ? "true" : "false") +
                   ", \"worst_excess\": " + fmt17(report.worst_dist_excess) +
                   ", \"worst_chi_z\": " + fmt17(report.worst_chi_z) + "}";
    report_json += i + 1 < grid.size() ? ",\n" : "\n";
  }
  report_json += std::string("  ],\n  \"pass\": ") + (all_pass ? "true" : "false") + "\n}\n";

  if (out_opt->count() || cfg.contains("out")) {
    write_file(pick_string(out_opt, out_path, cfg, "out", ""), report_json);
  }
  std::cout << (all_pass ? "mc-validate: PASS" : "mc-validate: FAIL") << " (" << grid.size()
            << " cases, " << n_trials << " trials each)\n";
  if (!all_pass) throw ValidationFailure("Monte Carlo disagreement beyond the 4-sigma/1e-4 rule");
  return 0;
}

// ---------------------------------------------------------------------------
// reproduce

struct ManifestEntry {
  std::string name;
  std::size_t bytes;
  std::string sha256;
};

class Bundle {
 public:
  explicit Bundle(fs::path dir) : dir_(std::move(dir)) {}

  void add(const std::string& name, const std::string& content) {
    write_file(dir_ / name, content);
    entries_.push_back({name, content.size(), photon_mux::detail::sha256_hex(content)});
    std::cout << "wrote " << (dir_ / name).string() << " (" << content.size() << " bytes)\n";
  }

  const std::vector<ManifestEntry>& entries() const { return entries_; }

 private:
  fs::path dir_;
  std::vector<ManifestEntry> entries_;
};

void check_disk_headroom(const fs::path& dir) {
  struct statvfs info {};
  if (statvfs(dir.c_str(), &info) != 0) throw IoError("statvfs failed for " + dir.string());
  const std::uint64_t available = static_cast<std::uint64_t>(info.f_bavail) * info.f_frsize;
  if (available < (std::uint64_t{1} << 30)) {
    throw IoError("less than 1 GB free at " + dir.string() + "; refusing to write the bundle");
  }
}

std::vector<std::pair<double, double>> reproduce_pairs(const json& cfg) {
  // Default (eta, gamma) pairs for the scalability figures. The exact pairs
  // plotted in the paper are only visible graphically, so these are a
  // documented, configurable stand-in covering the same regimes.
  std::vector<std::pair<double, double>> pairs = {{0.9, 0.9}, {0.9, 0.7}, {0.9, 0.5},
                                                  {0.7, 0.7}, {0.6, 0.5}, {0.5, 0.9}};
  if (cfg.contains("pairs")) {
    pairs.clear();
    for (const auto& p : cfg.at("pairs")) {
      if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number()) {
        throw photon_mux::jsonio::ConfigError("config: pairs must be [[eta, gamma], ...]");
      }
      pairs.emplace_back(p[0].get<double>(), p[1].get<double>());
    }
    if (pairs.empty()) throw photon_mux::jsonio::ConfigError("config: pairs must not be empty");
  }
  return pairs;
}

std::string pair_tag(double eta, double gamma) {
  std::ostringstream out;
  out << "eta" << eta << "_gamma" << gamma;
  return out.str();
}

int cmd_reproduce(const json& cfg, const std::string& out_dir, std::uint64_t seed, double theta,
                  const std::string& grid_spec, bool render, const CLI::Option* seed_opt,
                  const CLI::Option* theta_opt, const CLI::Option* grid_opt) {
  using photon_mux::svg::Scale;
  using photon_mux::svg::Series;

  const std::uint64_t run_seed = pick_u64(seed_opt, seed, cfg, "seed", kDefaultSeed);
  const double theta_v = pick_double(theta_opt, theta, cfg, "theta", 10.0);
  const auto [ne, ng] = parse_grid_spec(pick_string(grid_opt, grid_spec, cfg, "grid", "101x101"));
  const auto pairs = reproduce_pairs(cfg);

  const fs::path dir(out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  check_disk_headroom(dir);

  Bundle bundle(dir);

  // -- fig 2: optimized P1 against the guaranteed SNR, ideal efficiencies
  {
    const Efficiencies ideal(1.0, 1.0);
    std::vector<double> thetas;
    for (int i = 0; i <= 40; ++i) thetas.push_back(std::pow(10.0, 2.0 * i / 40.0));
    std::ostringstream csv;
    csv << "scheme,m,theta,p1,mu_star\n";
    std::vector<Series> series;
    for (const int m : {1, 4, 8, 16}) {  // m = 1 is the faint laser
      Series s;
      s.label = m == 1 ? "faint laser" : "mhps m=" + std::to_string(m);
      s.dashed = m == 1;
      const Architecture arch = m == 1 ? Architecture(photon_mux::FaintLaser{0.0})
                                       : Architecture(photon_mux::IdealMhps{m, 0.0});
      const SchemeModel model(arch, ideal);
      for (const double th : thetas) {
        const OptResult r = photon_mux::p1_max(model, th);
        csv << (m == 1 ? "faint_laser" : "ideal") << ',' << m << ',' << fmt17(th) << ','
            << fmt17(r.p1_bar) << ',' << fmt17(r.mu_star) << '\n';
        s.x.push_back(th);
        s.y.push_back(r.p1_bar);
      }
      series.push_back(std::move(s));
    }
    bundle.add("fig2_index_vs_theta.csv", csv.str());
    if (render) {
      photon_mux::svg::ChartSpec spec;
      spec.title = "Optimized one-photon probability vs guaranteed SNR";
      spec.x_label = "SNR threshold";
      spec.y_label = "optimized P1";
      spec.x_scale = Scale::Log10;
      bundle.add("fig2.svg", photon_mux::svg::line_chart(spec, series));
    }
  }

  // -- figs 4 and 5: scalability in the crystal count
  const double fl_reference =
      photon_mux::p1_max(SchemeModel(Architecture(photon_mux::FaintLaser{0.0}), Efficiencies(1.0, 1.0)),
                         theta_v)
          .p1_bar;
  for (const bool symmetric : {false, true}) {
    std::vector<Series> series;
    for (const auto& [eta, gamma] : pairs) {
      const Efficiencies eff(eta, gamma);
      std::vector<int> ms;
      if (symmetric) {
        for (int m = 2; m <= 256; m *= 2) ms.push_back(m);
      } else {
        ms = photon_mux::default_scalability_m();
      }
      const auto curve = photon_mux::scalability_curve(
          symmetric ? photon_mux::CurveScheme::Symmetric : photon_mux::CurveScheme::Asymmetric,
          theta_v, eff, ms);
      std::ostringstream csv;
      photon_mux::write_curve_csv(csv, curve);
      bundle.add(std::string(symmetric ? "fig5_smhps_" : "fig4_amhps_") + pair_tag(eta, gamma) + ".csv",
                 csv.str());
      Series s;
      s.label = "eta=" + photon_mux::svg::chart_detail::fmt(eta) +
                " gamma=" + photon_mux::svg::chart_detail::fmt(gamma);
      for (const auto& pt : curve) {
        s.x.push_back(pt.m);
        s.y.push_back(pt.p1);
      }
      series.push_back(std::move(s));
    }
    Series fl;
    fl.label = "faint laser";
    fl.dashed = true;
    fl.x = {2.0, 256.0};
    fl.y = {fl_reference, fl_reference};
    series.push_back(std::move(fl));
    if (render) {
      photon_mux::svg::ChartSpec spec;
      spec.title = std::string(symmetric ? "SMHPS" : "AMHPS") + " scalability, theta=" + fmt17(theta_v);
      spec.x_label = "crystal count m";
      spec.y_label = "optimized P1";
      spec.x_scale = Scale::Log2;
      bundle.add(symmetric ? "fig5.svg" : "fig4.svg", photon_mux::svg::line_chart(spec, series));
    }
  }

  // -- figs 6-8: contour grids over the (eta, gamma) plane
  const auto eta_axis = photon_mux::linspace(0.01, 1.0, ne);
  const auto gamma_axis = photon_mux::linspace(0.01, 1.0, ng);
  const auto emit_grid = [&](const std::string& stem, photon_mux::GridMetric metric, int m,
                             const std::string& title) {
    const photon_mux::SweepGrid grid =
        photon_mux::contour_grid(metric, theta_v, m, eta_axis, gamma_axis);
    std::ostringstream csv;
    photon_mux::write_grid_csv(csv, grid);
    bundle.add(stem + ".csv", csv.str());
    if (render) {
      photon_mux::svg::HeatmapSpec spec;
      spec.title = title;
      spec.x_label = "detection efficiency eta";
      spec.y_label = "transmissivity gamma";
      double lo = grid.values[0], hi = grid.values[0];
      for (const double v : grid.values) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
      if (metric == photon_mux::GridMetric::Delta) spec.contour_levels.push_back(0.0);
      for (int i = 1; i <= 6; ++i) spec.contour_levels.push_back(lo + (hi - lo) * i / 7.0);
      bundle.add(stem + ".svg",
                 photon_mux::svg::heatmap(spec, grid.eta_axis, grid.gamma_axis, grid.values));
    }
  };

  emit_grid("fig6_smhps_m4", photon_mux::GridMetric::P1SymmetricBest, 4,
            "Best symmetric P1, m' <= 4, theta=" + fmt17(theta_v));
  emit_grid("fig6_amhps_m4", photon_mux::GridMetric::P1Asymmetric, 4,
            "Asymmetric P1, m = 4, theta=" + fmt17(theta_v));
  emit_grid("fig7_smhps_m8", photon_mux::GridMetric::P1SymmetricBest, 8,
            "Best symmetric P1, m' <= 8, theta=" + fmt17(theta_v));
  emit_grid("fig7_amhps_m8", photon_mux::GridMetric::P1Asymmetric, 8,
            "Asymmetric P1, m = 8, theta=" + fmt17(theta_v));
  emit_grid("fig8_delta_m4", photon_mux::GridMetric::Delta, 4,
            "Percentage difference asymmetric vs best symmetric, m = 4");
  emit_grid("fig8_delta_m32", photon_mux::GridMetric::Delta, 32,
            "Percentage difference asymmetric vs best symmetric, m = 32");

  // -- fig 9: ideal two-crystal one-photon probability over both pumps
  {
    const auto two_crystal_p1 = [](double mu1, double mu2) {
      return mu1 * std::exp(-mu1) + mu2 * std::exp(-(mu1 + mu2));
    };
    const auto mu_axis = photon_mux::linspace(0.0, 4.0, 161);
    std::ostringstream csv;
    csv << "mu1,mu2,p1\n";
    std::vector<double> values(mu_axis.size() * mu_axis.size());
    for (std::size_t j = 0; j < mu_axis.size(); ++j) {
      for (std::size_t i = 0; i < mu_axis.size(); ++i) {
        const double v = two_crystal_p1(mu_axis[i], mu_axis[j]);
        values[j * mu_axis.size() + i] = v;
        csv << fmt17(mu_axis[i]) << ',' << fmt17(mu_axis[j]) << ',' << fmt17(v) << '\n';
      }
    }
    bundle.add("fig9_two_crystal.csv", csv.str());
    if (render) {
      photon_mux::svg::HeatmapSpec spec;
      spec.title = "Two-crystal ideal P(K=1) over the pump pair";
      spec.x_label = "mu1";
      spec.y_label = "mu2";
      const auto opt = photon_mux::two_crystal_ideal_opt();
      spec.marker_x = opt.mu1;
      spec.marker_y = opt.mu2;
      for (int i = 1; i <= 6; ++i) spec.contour_levels.push_back(opt.p1 * i / 7.0);
      bundle.add("fig9.svg", photon_mux::svg::heatmap(spec, mu_axis, mu_axis, values));
    }
  }

  // -- manifest with checksums
  {
    std::string manifest = "{\n";
    manifest += "  \"command\": \"reproduce\",\n";
    manifest += "  \"seed\": " + std::to_string(run_seed) + ",\n";
    manifest += "  \"theta\": " + fmt17(theta_v) + ",\n";
    manifest += "  \"grid\": \"" + std::to_string(ne) + "x" + std::to_string(ng) + "\",\n";
    manifest += "  \"pairs\": [";
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      if (i) manifest += ", ";
      manifest += "[" + fmt17(pairs[i].first) + ", " + fmt17(pairs[i].second) + "]";
    }
    manifest += "],\n  \"files\": [\n";
    const auto& entries = bundle.entries();
    for (std::size_t i = 0; i < entries.size(); ++i) {
      manifest += "    {\"name\": \"" + entries[i].name + "\", \"bytes\": " +
                  std::to_string(entries[i].bytes) + ", \"sha256\": \"" + entries[i].sha256 + "\"}";
      manifest += i + 1 < entries.size() ? ",\n" : "\n";
    }
    manifest += "  ]\n}\n";
    write_file(dir / "manifest.json", manifest);
    std::cout << "wrote " << (dir / "manifest.json").string() << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "photon-number statistics and performance indices for multiplexed heralded single-photon sources"};
  app.require_subcommand(1);

  SchemeFlags scheme;
  double eta = 1.0, gamma = 1.0, theta = 10.0;
  std::uint64_t trials = kDefaultTrials, seed = kDefaultSeed;
  std::string grid_spec = "101x101", out_path, svg_path, config_path, metric;
  int max_cases = 0;
  bool render = true;

  const auto add_scheme_flags = [&scheme](CLI::App* cmd) {
    scheme.name_opt = cmd->add_option(
        "--scheme", scheme.name, "scheme name: faint_laser, ideal, symmetric, asymmetric, general");
    scheme.m_opt = cmd->add_option("--m", scheme.m, "crystal count (ideal, asymmetric) or largest m");
    scheme.k_opt = cmd->add_option("--k", scheme.k, "symmetric tree depth, m = 2^k");
    scheme.pump_opt = cmd->add_option("--pump", scheme.pump, "pump parameter (mean pair number)");
  };

  CLI::App* dist = app.add_subcommand("dist", "evaluate an output photon-number distribution");
  add_scheme_flags(dist);
  const CLI::Option* dist_eta = dist->add_option("--eta", eta, "detection efficiency");
  const CLI::Option* dist_gamma = dist->add_option("--gamma", gamma, "router transmissivity");
  const CLI::Option* dist_out = dist->add_option("--out", out_path, "write the JSON report here");
  dist->add_option("--config", config_path, "JSON config file");

  CLI::App* optimize = app.add_subcommand("optimize", "maximize P1 subject to SNR >= theta");
  add_scheme_flags(optimize);
  const CLI::Option* opt_eta = optimize->add_option("--eta", eta, "detection efficiency");
  const CLI::Option* opt_gamma = optimize->add_option("--gamma", gamma, "router transmissivity");
  const CLI::Option* opt_theta = optimize->add_option("--theta", theta, "guaranteed SNR threshold");
  const CLI::Option* opt_out = optimize->add_option("--out", out_path, "write the JSON report here");
  optimize->add_option("--config", config_path, "JSON config file");

  CLI::App* sweep = app.add_subcommand("sweep", "scalability curves and (eta, gamma) contour grids");
  add_scheme_flags(sweep);
  sweep->add_option("--metric", metric, "scalability, p1_symmetric_best, p1_asymmetric or delta")
      ->required();
  const CLI::Option* sweep_eta = sweep->add_option("--eta", eta, "detection efficiency (scalability)");
  const CLI::Option* sweep_gamma =
      sweep->add_option("--gamma", gamma, "router transmissivity (scalability)");
  const CLI::Option* sweep_theta = sweep->add_option("--theta", theta, "guaranteed SNR threshold");
  const CLI::Option* sweep_grid = sweep->add_option("--grid", grid_spec, "grid resolution, e.g. 101x101");
  const CLI::Option* sweep_out = sweep->add_option("--out", out_path, "CSV output path (default stdout)");
  const CLI::Option* sweep_svg = sweep->add_option("--svg", svg_path, "also render an SVG chart here");
  sweep->add_option("--config", config_path, "JSON config file");

  CLI::App* mc = app.add_subcommand("mc-validate", "Monte Carlo vs analytic agreement on the standard grid");
  const CLI::Option* mc_trials = mc->add_option("--trials", trials, "trials per case");
  const CLI::Option* mc_seed = mc->add_option("--seed", seed, "base RNG seed");
  const CLI::Option* mc_out = mc->add_option("--out", out_path, "write the JSON report here");
  mc->add_option("--max-cases", max_cases, "check only the first N cases");
  mc->add_option("--config", config_path, "JSON config file");

  CLI::App* reproduce = app.add_subcommand(
      "reproduce", "emit every figure dataset, SVG renderings and a checksummed manifest");
  reproduce->add_option("--out", out_path, "output directory")->required();
  const CLI::Option* rep_seed = reproduce->add_option("--seed", seed, "RNG seed recorded in the manifest");
  const CLI::Option* rep_theta = reproduce->add_option("--theta", theta, "guaranteed SNR threshold");
  const CLI::Option* rep_grid = reproduce->add_option("--grid", grid_spec, "contour grid resolution");
  reproduce->add_flag("--svg,!--no-svg", render, "render SVG charts (default on)");
  reproduce->add_option("--config", config_path, "JSON config file");

  CLI11_PARSE(app, argc, argv);

  try {
    if (dist->parsed()) {
      const json cfg = load_config(config_path, {"scheme", "pump", "m", "k", "eta", "gamma", "n_max", "out"});
      return cmd_dist(scheme, cfg, eta, gamma, dist_eta, dist_gamma, out_path, dist_out);
    }
    if (optimize->parsed()) {
      const json cfg = load_config(config_path, {"scheme", "pump", "m", "k", "eta", "gamma", "theta", "out"});
      return cmd_optimize(scheme, cfg, eta, gamma, theta, opt_eta, opt_gamma, opt_theta, out_path, opt_out);
    }
    if (sweep->parsed()) {
      const json cfg = load_config(config_path, {"scheme", "m", "k", "eta", "gamma", "theta", "grid",
                                                 "eta_range", "gamma_range", "out", "svg"});
      return cmd_sweep(metric, scheme, cfg, eta, gamma, theta, grid_spec, sweep_eta, sweep_gamma,
                       sweep_theta, sweep_grid, out_path, sweep_out, svg_path, sweep_svg);
    }
    if (mc->parsed()) {
      const json cfg = load_config(config_path, {"trials", "seed", "out"});
      return cmd_mc_validate(cfg, trials, seed, max_cases, mc_trials, mc_seed, out_path, mc_out);
    }
    if (reproduce->parsed()) {
      const json cfg = load_config(config_path, {"seed", "theta", "grid", "pairs"});
      return cmd_reproduce(cfg, out_path, seed, theta, grid_spec, render, rep_seed, rep_theta, rep_grid);
    }
  } catch (const photon_mux::jsonio::ConfigError& err) {
    std::cerr << "config error: " << err.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& err) {
    std::cerr << "config error: " << err.what() << "\n";
    return 2;
  } catch (const std::domain_error& err) {
    std::cerr << "config error: " << err.what() << "\n";
    return 2;
  } catch (const ValidationFailure& err) {
    std::cerr << "validation failure: " << err.what() << "\n";
    return 3;
  } catch (const IoError& err) {
    std::cerr << "io error: " << err.what() << "\n";
    return 4;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  }
  return 0;
}
