#pragma once

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "photon_mux/detail/parallel.hpp"
#include "photon_mux/optimize.hpp"

// Figure datasets: scalability curves in the crystal count and contour grids
// over the (eta, gamma) plane. Cells are independent work items; assembly is
// keyed by index so results never depend on scheduling.

namespace photon_mux {

enum class CurveScheme { FaintLaser, Ideal, Symmetric, Asymmetric };
enum class GridMetric { P1SymmetricBest, P1Asymmetric, Delta };

struct CurvePoint {
  int m = 0;
  double p1 = 0.0;
  double mu_star = 0.0;
  double snr = 0.0;
};

struct SweepGrid {
  std::vector<double> eta_axis;
  std::vector<double> gamma_axis;
  std::vector<double> values;     // row-major, gamma rows x eta columns
  std::vector<long long> chosen_m;
  std::vector<double> mu_star;
  GridMetric metric = GridMetric::P1Asymmetric;
  int m = 1;
  double theta = 0.0;

  std::size_t index(std::size_t eta_i, std::size_t gamma_i) const {
    return gamma_i * eta_axis.size() + eta_i;
  }
  double value(std::size_t eta_i, std::size_t gamma_i) const { return values[index(eta_i, gamma_i)]; }
};

inline std::vector<double> linspace(double lo, double hi, std::size_t count) {
  if (count < 2) throw std::invalid_argument("linspace: need at least two points");
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i) {
    out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
  }
  out.back() = hi;
  return out;
}

// m values {2, ..., 256} as plotted in the scalability figures.
inline std::vector<int> default_scalability_m() {
  std::vector<int> out;
  for (int m = 2; m <= 256; ++m) out.push_back(m);
  return out;
}

inline bool is_power_of_two(int m) { return m > 0 && (m & (m - 1)) == 0; }

inline Architecture curve_architecture(CurveScheme scheme, int m) {
  switch (scheme) {
    case CurveScheme::FaintLaser:
      return Architecture(FaintLaser{0.0});
    case CurveScheme::Ideal:
      return Architecture(IdealMhps{m, 0.0});
    case CurveScheme::Symmetric: {
      if (!is_power_of_two(m)) throw std::invalid_argument("symmetric scheme needs m = 2^k crystals");
      int k = 0;
      while ((1 << k) < m) ++k;
      return Architecture(SymmetricTree{k, 0.0});
    }
    case CurveScheme::Asymmetric:
      return Architecture(AsymmetricChain{m, 0.0});
  }
  throw std::logic_error("unreachable");
}

// One optimized point per crystal count.
inline std::vector<CurvePoint> scalability_curve(CurveScheme scheme, double theta,
                                                 const Efficiencies& eff,
                                                 const std::vector<int>& m_values,
                                                 unsigned threads = 0) {
  if (m_values.empty()) throw std::invalid_argument("scalability_curve: empty m list");
  for (std::size_t i = 0; i + 1 < m_values.size(); ++i) {
    if (m_values[i] >= m_values[i + 1]) throw std::invalid_argument("scalability_curve: m values must be ascending");
  }
  for (const int m : m_values) {
    if (m < 1) throw std::invalid_argument("scalability_curve: m must be >= 1");
    if (scheme == CurveScheme::Symmetric && !is_power_of_two(m)) {
      throw std::invalid_argument("scalability_curve: symmetric scheme needs powers of two");
    }
  }

  std::vector<CurvePoint> out(m_values.size());
  detail::parallel_for(m_values.size(), threads, [&](std::size_t i) {
    const int m = m_values[i];
    const SchemeModel model(curve_architecture(scheme, m), eff);
    const OptResult r = p1_max(model, theta);
    out[i] = {m, r.p1_bar, r.mu_star, r.snr_at_opt};
  });
  return out;
}

// Optimized metric on an (eta, gamma) grid. For symmetric metrics the
// recorded chosen_m is the best m' <= m at that cell, which is what makes
// the published contour lines kink.
inline SweepGrid contour_grid(GridMetric metric, double theta, int m,
                              std::vector<double> eta_axis, std::vector<double> gamma_axis,
                              unsigned threads = 0) {
  if (m < 1) throw std::invalid_argument("contour_grid: m must be >= 1");
  if (eta_axis.empty() || gamma_axis.empty()) throw std::invalid_argument("contour_grid: empty axis");
  for (const double v : eta_axis) {
    if (!(v > 0.0 && v <= 1.0)) throw std::invalid_argument("contour_grid: eta axis must lie in (0, 1]");
  }
  for (const double v : gamma_axis) {
    if (!(v > 0.0 && v <= 1.0)) throw std::invalid_argument("contour_grid: gamma axis must lie in (0, 1]");
  }
  const std::size_t cells = eta_axis.size() * gamma_axis.size();
  if (cells > 1000000) throw std::invalid_argument("contour_grid: more than 1e6 cells");

  SweepGrid grid;
  grid.eta_axis = std::move(eta_axis);
  grid.gamma_axis = std::move(gamma_axis);
  grid.values.resize(cells);
  grid.chosen_m.resize(cells);
  grid.mu_star.resize(cells);
  grid.metric = metric;
  grid.m = m;
  grid.theta = theta;

  detail::parallel_for(cells, threads, [&](std::size_t cell) {
    const std::size_t eta_i = cell % grid.eta_axis.size();
    const std::size_t gamma_i = cell / grid.eta_axis.size();
    const Efficiencies eff(grid.eta_axis[eta_i], grid.gamma_axis[gamma_i]);
    switch (metric) {
      case GridMetric::P1SymmetricBest: {
        const OptResult r = best_symmetric(m, eff, theta);
        grid.values[cell] = r.p1_bar;
        grid.chosen_m[cell] = r.chosen_m;
        grid.mu_star[cell] = r.mu_star;
        break;
      }
      case GridMetric::P1Asymmetric: {
        const OptResult r = p1_max(SchemeModel(Architecture(AsymmetricChain{m, 0.0}), eff), theta);
        grid.values[cell] = r.p1_bar;
        grid.chosen_m[cell] = m;
        grid.mu_star[cell] = r.mu_star;
        break;
      }
      case GridMetric::Delta: {
        const OptResult asym = p1_max(SchemeModel(Architecture(AsymmetricChain{m, 0.0}), eff), theta);
        const OptResult sym = best_symmetric(m, eff, theta);
        grid.values[cell] = 100.0 * (asym.p1_bar - sym.p1_bar) / sym.p1_bar;
        grid.chosen_m[cell] = sym.chosen_m;
        grid.mu_star[cell] = asym.mu_star;
        break;
      }
    }
  });
  return grid;
}

// All floating-point file output uses 17 significant digits so values
// round-trip exactly.
inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline void write_grid_csv(std::ostream& os, const SweepGrid& grid) {
  os << "eta,gamma,value,chosen_m,mu_star\n";
  for (std::size_t gi = 0; gi < grid.gamma_axis.size(); ++gi) {
    for (std::size_t ei = 0; ei < grid.eta_axis.size(); ++ei) {
      const std::size_t cell = grid.index(ei, gi);
      os << format_double(grid.eta_axis[ei]) << ',' << format_double(grid.gamma_axis[gi]) << ','
         << format_double(grid.values[cell]) << ',' << grid.chosen_m[cell] << ','
         << format_double(grid.mu_star[cell]) << '\n';
    }
  }
}

inline void write_curve_csv(std::ostream& os, const std::vector<CurvePoint>& curve) {
  os << "m,p1,mu_star,snr\n";
  for (const auto& point : curve) {
    os << point.m << ',' << format_double(point.p1) << ',' << format_double(point.mu_star)
       << ',' << format_double(point.snr) << '\n';
  }
}

}  // namespace photon_mux
