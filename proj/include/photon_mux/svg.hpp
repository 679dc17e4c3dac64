#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>
#include <vector>

// Minimal self-contained SVG charts: axis frames, polyline series with a
// legend, and color-mapped heatmaps with marching-squares contour lines.
// Text output only; no plotting dependency.

namespace photon_mux::svg {

enum class Scale { Linear, Log10, Log2 };

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  bool dashed = false;
};

struct ChartSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  Scale x_scale = Scale::Linear;
  Scale y_scale = Scale::Linear;
  int width = 860;
  int height = 540;
};

struct HeatmapSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<double> contour_levels;
  double marker_x = std::numeric_limits<double>::quiet_NaN();
  double marker_y = std::numeric_limits<double>::quiet_NaN();
  int width = 880;
  int height = 600;
};

namespace chart_detail {

inline std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

inline std::string escape(const std::string& text) {
  std::string out;
  for (const char c : text) {
    if (c == '&') out += "&amp;";
    else if (c == '<') out += "&lt;";
    else if (c == '>') out += "&gt;";
    else out.push_back(c);
  }
  return out;
}

inline double forward(Scale s, double v) {
  switch (s) {
    case Scale::Linear: return v;
    case Scale::Log10: return std::log10(v);
    case Scale::Log2: return std::log2(v);
  }
  return v;
}

struct Ticks {
  std::vector<double> values;  // data coordinates
};

inline Ticks linear_ticks(double lo, double hi) {
  Ticks t;
  const double span = hi - lo;
  if (!(span > 0)) {
    t.values = {lo};
    return t;
  }
  const double raw = span / 6.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (const double m : {1.0, 2.0, 5.0, 10.0}) {
    if (raw <= m * mag) {
      step = m * mag;
      break;
    }
  }
  for (double v = std::ceil(lo / step) * step; v <= hi + 1e-9 * span; v += step) {
    t.values.push_back(std::abs(v) < 1e-12 * span ? 0.0 : v);
  }
  return t;
}

inline Ticks log_ticks(double lo, double hi, double base) {
  Ticks t;
  const int first = static_cast<int>(std::ceil(std::log(lo) / std::log(base) - 1e-9));
  const int last = static_cast<int>(std::floor(std::log(hi) / std::log(base) + 1e-9));
  for (int e = first; e <= last; ++e) t.values.push_back(std::pow(base, e));
  if (t.values.empty()) t.values = {lo, hi};
  return t;
}

inline Ticks make_ticks(Scale s, double lo, double hi) {
  switch (s) {
    case Scale::Linear: return linear_ticks(lo, hi);
    case Scale::Log10: return log_ticks(lo, hi, 10.0);
    case Scale::Log2: return log_ticks(lo, hi, 2.0);
  }
  return linear_ticks(lo, hi);
}

struct Rgb {
  double r, g, b;
};

inline std::string color_hex(const Rgb& c) {
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", static_cast<int>(std::lround(c.r * 255)),
                static_cast<int>(std::lround(c.g * 255)), static_cast<int>(std::lround(c.b * 255)));
  return buf;
}

// viridis anchors, dark blue to yellow
inline Rgb viridis(double u) {
  static const Rgb stops[] = {
      {0.267, 0.005, 0.329}, {0.283, 0.141, 0.458}, {0.254, 0.265, 0.530},
      {0.207, 0.372, 0.553}, {0.164, 0.471, 0.558}, {0.128, 0.567, 0.551},
      {0.135, 0.659, 0.518}, {0.267, 0.749, 0.441}, {0.478, 0.821, 0.318},
      {0.741, 0.873, 0.150}, {0.993, 0.906, 0.144}};
  u = std::clamp(u, 0.0, 1.0);
  const double pos = u * 10.0;
  const int i = std::min(9, static_cast<int>(pos));
  const double f = pos - i;
  return {stops[i].r + f * (stops[i + 1].r - stops[i].r),
          stops[i].g + f * (stops[i + 1].g - stops[i].g),
          stops[i].b + f * (stops[i + 1].b - stops[i].b)};
}

inline const char* series_color(std::size_t i) {
  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                  "#9467bd", "#8c564b", "#17becf", "#7f7f7f"};
  return palette[i % 8];
}

}  // namespace chart_detail

inline std::string line_chart(const ChartSpec& spec, const std::vector<Series>& series) {
  using namespace chart_detail;
  const double ml = 78, mr = 24, mt = 46, mb = 58;
  const double pw = spec.width - ml - mr;
  const double ph = spec.height - mt - mb;

  double x_lo = std::numeric_limits<double>::infinity(), x_hi = -x_lo;
  double y_lo = x_lo, y_hi = -x_lo;
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      const double tx = forward(spec.x_scale, s.x[i]);
      const double ty = forward(spec.y_scale, s.y[i]);
      if (!std::isfinite(tx) || !std::isfinite(ty)) continue;
      x_lo = std::min(x_lo, tx);
      x_hi = std::max(x_hi, tx);
      y_lo = std::min(y_lo, ty);
      y_hi = std::max(y_hi, ty);
    }
  }
  if (!(x_hi > x_lo)) x_hi = x_lo + 1.0;
  if (!(y_hi > y_lo)) y_hi = y_lo + 1.0;
  const double y_pad = 0.05 * (y_hi - y_lo);
  y_lo -= y_pad;
  y_hi += y_pad;

  const auto px = [&](double v) { return ml + (forward(spec.x_scale, v) - x_lo) / (x_hi - x_lo) * pw; };
  const auto py = [&](double v) { return mt + ph - (forward(spec.y_scale, v) - y_lo) / (y_hi - y_lo) * ph; };

  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(spec.width) +
         "\" height=\"" + std::to_string(spec.height) + "\" font-family=\"monospace\">\n";
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out += "<text x=\"" + fmt(spec.width / 2.0) + "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">" +
         escape(spec.title) + "</text>\n";

  // frame and ticks
  const Ticks xt = make_ticks(spec.x_scale, spec.x_scale == Scale::Linear ? x_lo : std::pow(spec.x_scale == Scale::Log10 ? 10.0 : 2.0, x_lo),
                              spec.x_scale == Scale::Linear ? x_hi : std::pow(spec.x_scale == Scale::Log10 ? 10.0 : 2.0, x_hi));
  const Ticks yt = make_ticks(spec.y_scale, spec.y_scale == Scale::Linear ? y_lo : std::pow(10.0, y_lo),
                              spec.y_scale == Scale::Linear ? y_hi : std::pow(10.0, y_hi));
  for (const double v : xt.values) {
    const double x = px(v);
    out += "<line x1=\"" + fmt(x) + "\" y1=\"" + fmt(mt) + "\" x2=\"" + fmt(x) + "\" y2=\"" +
           fmt(mt + ph) + "\" stroke=\"#dddddd\"/>\n";
    out += "<text x=\"" + fmt(x) + "\" y=\"" + fmt(mt + ph + 18) +
           "\" text-anchor=\"middle\" font-size=\"12\">" + fmt(v) + "</text>\n";
  }
  for (const double v : yt.values) {
    const double y = py(v);
    out += "<line x1=\"" + fmt(ml) + "\" y1=\"" + fmt(y) + "\" x2=\"" + fmt(ml + pw) + "\" y2=\"" +
           fmt(y) + "\" stroke=\"#dddddd\"/>\n";
    out += "<text x=\"" + fmt(ml - 6) + "\" y=\"" + fmt(y + 4) +
           "\" text-anchor=\"end\" font-size=\"12\">" + fmt(v) + "</text>\n";
  }
  out += "<rect x=\"" + fmt(ml) + "\" y=\"" + fmt(mt) + "\" width=\"" + fmt(pw) + "\" height=\"" +
         fmt(ph) + "\" fill=\"none\" stroke=\"black\"/>\n";
  out += "<text x=\"" + fmt(ml + pw / 2) + "\" y=\"" + fmt(spec.height - 14.0) +
         "\" text-anchor=\"middle\" font-size=\"13\">" + escape(spec.x_label) + "</text>\n";
  out += "<text x=\"20\" y=\"" + fmt(mt + ph / 2) + "\" text-anchor=\"middle\" font-size=\"13\" " +
         "transform=\"rotate(-90 20 " + fmt(mt + ph / 2) + ")\">" + escape(spec.y_label) + "</text>\n";

  for (std::size_t si = 0; si < series.size(); ++si) {
    const auto& s = series[si];
    std::string points;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      points += fmt(px(s.x[i])) + "," + fmt(py(s.y[i])) + " ";
    }
    out += "<polyline fill=\"none\" stroke=\"" + std::string(series_color(si)) +
           "\" stroke-width=\"1.8\"" + (s.dashed ? " stroke-dasharray=\"6 4\"" : "") +
           " points=\"" + points + "\"/>\n";
  }

  // legend
  const double lx = ml + pw - 208, ly = mt + 10;
  out += "<rect x=\"" + fmt(lx) + "\" y=\"" + fmt(ly) + "\" width=\"198\" height=\"" +
         fmt(series.size() * 18.0 + 8) + "\" fill=\"white\" stroke=\"#999999\"/>\n";
  for (std::size_t si = 0; si < series.size(); ++si) {
    const double yy = ly + 14 + si * 18.0;
    out += "<line x1=\"" + fmt(lx + 8) + "\" y1=\"" + fmt(yy - 4) + "\" x2=\"" + fmt(lx + 34) +
           "\" y2=\"" + fmt(yy - 4) + "\" stroke=\"" + std::string(series_color(si)) +
           "\" stroke-width=\"2\"" + (series[si].dashed ? " stroke-dasharray=\"6 4\"" : "") + "/>\n";
    out += "<text x=\"" + fmt(lx + 40) + "\" y=\"" + fmt(yy) + "\" font-size=\"12\">" +
           escape(series[si].label) + "</text>\n";
  }
  out += "</svg>\n";
  return out;
}

// values are row-major: values[yi * x_axis.size() + xi]
inline std::string heatmap(const HeatmapSpec& spec, const std::vector<double>& x_axis,
                           const std::vector<double>& y_axis, const std::vector<double>& values) {
  using namespace chart_detail;
  const double ml = 78, mr = 96, mt = 46, mb = 58;
  const double pw = spec.width - ml - mr;
  const double ph = spec.height - mt - mb;
  const std::size_t nx = x_axis.size(), ny = y_axis.size();

  double v_lo = std::numeric_limits<double>::infinity(), v_hi = -v_lo;
  for (const double v : values) {
    v_lo = std::min(v_lo, v);
    v_hi = std::max(v_hi, v);
  }
  if (!(v_hi > v_lo)) v_hi = v_lo + 1.0;

  const double x_lo = x_axis.front(), x_hi = x_axis.back();
  const double y_lo = y_axis.front(), y_hi = y_axis.back();
  const auto px = [&](double v) { return ml + (v - x_lo) / (x_hi - x_lo) * pw; };
  const auto py = [&](double v) { return mt + ph - (v - y_lo) / (y_hi - y_lo) * ph; };

  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(spec.width) +
         "\" height=\"" + std::to_string(spec.height) + "\" font-family=\"monospace\">\n";
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out += "<text x=\"" + fmt(spec.width / 2.0) + "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">" +
         escape(spec.title) + "</text>\n";

  // cells, each centered on its grid node
  for (std::size_t yi = 0; yi < ny; ++yi) {
    for (std::size_t xi = 0; xi < nx; ++xi) {
      const double v = values[yi * nx + xi];
      const double cx0 = px(xi == 0 ? x_axis[0] : 0.5 * (x_axis[xi - 1] + x_axis[xi]));
      const double cx1 = px(xi + 1 == nx ? x_axis[nx - 1] : 0.5 * (x_axis[xi] + x_axis[xi + 1]));
      const double cy0 = py(yi + 1 == ny ? y_axis[ny - 1] : 0.5 * (y_axis[yi] + y_axis[yi + 1]));
      const double cy1 = py(yi == 0 ? y_axis[0] : 0.5 * (y_axis[yi - 1] + y_axis[yi]));
      out += "<rect x=\"" + fmt(cx0) + "\" y=\"" + fmt(cy0) + "\" width=\"" + fmt(cx1 - cx0 + 0.5) +
             "\" height=\"" + fmt(cy1 - cy0 + 0.5) + "\" fill=\"" +
             color_hex(viridis((v - v_lo) / (v_hi - v_lo))) + "\"/>\n";
    }
  }

  // marching-squares contour lines on the grid nodes
  for (const double level : spec.contour_levels) {
    if (!(level > v_lo && level < v_hi)) continue;
    std::string segments;
    for (std::size_t yi = 0; yi + 1 < ny; ++yi) {
      for (std::size_t xi = 0; xi + 1 < nx; ++xi) {
        const double v00 = values[yi * nx + xi], v10 = values[yi * nx + xi + 1];
        const double v01 = values[(yi + 1) * nx + xi], v11 = values[(yi + 1) * nx + xi + 1];
        const int mask = (v00 >= level ? 1 : 0) | (v10 >= level ? 2 : 0) |
                         (v11 >= level ? 4 : 0) | (v01 >= level ? 8 : 0);
        if (mask == 0 || mask == 15) continue;
        const auto interp = [&](double a, double b, double pa, double pb) {
          const double t = (level - a) / (b - a);
          return pa + t * (pb - pa);
        };
        // edge midpoints in pixel space: bottom, right, top, left
        const double xb = interp(v00, v10, px(x_axis[xi]), px(x_axis[xi + 1])), yb = py(y_axis[yi]);
        const double xr = px(x_axis[xi + 1]), yr = interp(v10, v11, py(y_axis[yi]), py(y_axis[yi + 1]));
        const double xt2 = interp(v01, v11, px(x_axis[xi]), px(x_axis[xi + 1])), yt2 = py(y_axis[yi + 1]);
        const double xl = px(x_axis[xi]), yl = interp(v00, v01, py(y_axis[yi]), py(y_axis[yi + 1]));
        const auto seg = [&](double x1, double y1, double x2, double y2) {
          segments += "M" + fmt(x1) + " " + fmt(y1) + " L" + fmt(x2) + " " + fmt(y2) + " ";
        };
        switch (mask) {
          case 1: case 14: seg(xl, yl, xb, yb); break;
          case 2: case 13: seg(xb, yb, xr, yr); break;
          case 3: case 12: seg(xl, yl, xr, yr); break;
          case 4: case 11: seg(xt2, yt2, xr, yr); break;
          case 6: case 9: seg(xb, yb, xt2, yt2); break;
          case 7: case 8: seg(xl, yl, xt2, yt2); break;
          case 5: case 10: {  // saddle: split on the cell average
            const double center = 0.25 * (v00 + v10 + v01 + v11);
            if ((mask == 5) == (center >= level)) {
              seg(xl, yl, xt2, yt2);
              seg(xb, yb, xr, yr);
            } else {
              seg(xl, yl, xb, yb);
              seg(xt2, yt2, xr, yr);
            }
            break;
          }
        }
      }
    }
    if (!segments.empty()) {
      out += "<path d=\"" + segments + "\" fill=\"none\" stroke=\"white\" stroke-width=\"1.1\"/>\n";
    }
  }

  // axes
  const Ticks xt = linear_ticks(x_lo, x_hi);
  const Ticks yt = linear_ticks(y_lo, y_hi);
  for (const double v : xt.values) {
    out += "<text x=\"" + fmt(px(v)) + "\" y=\"" + fmt(mt + ph + 18) +
           "\" text-anchor=\"middle\" font-size=\"12\">" + fmt(v) + "</text>\n";
  }
  for (const double v : yt.values) {
    out += "<text x=\"" + fmt(ml - 6) + "\" y=\"" + fmt(py(v) + 4) +
           "\" text-anchor=\"end\" font-size=\"12\">" + fmt(v) + "</text>\n";
  }
  out += "<rect x=\"" + fmt(ml) + "\" y=\"" + fmt(mt) + "\" width=\"" + fmt(pw) + "\" height=\"" +
         fmt(ph) + "\" fill=\"none\" stroke=\"black\"/>\n";
  out += "<text x=\"" + fmt(ml + pw / 2) + "\" y=\"" + fmt(spec.height - 14.0) +
         "\" text-anchor=\"middle\" font-size=\"13\">" + escape(spec.x_label) + "</text>\n";
  out += "<text x=\"20\" y=\"" + fmt(mt + ph / 2) + "\" text-anchor=\"middle\" font-size=\"13\" " +
         "transform=\"rotate(-90 20 " + fmt(mt + ph / 2) + ")\">" + escape(spec.y_label) + "</text>\n";

  // colorbar with contour-level ticks
  const double bx = ml + pw + 18, bw = 16;
  for (int i = 0; i < 120; ++i) {
    const double u = (i + 0.5) / 120.0;
    out += "<rect x=\"" + fmt(bx) + "\" y=\"" + fmt(mt + ph * (1.0 - (i + 1) / 120.0)) + "\" width=\"" +
           fmt(bw) + "\" height=\"" + fmt(ph / 120.0 + 0.5) + "\" fill=\"" + color_hex(viridis(u)) + "\"/>\n";
  }
  out += "<rect x=\"" + fmt(bx) + "\" y=\"" + fmt(mt) + "\" width=\"" + fmt(bw) + "\" height=\"" +
         fmt(ph) + "\" fill=\"none\" stroke=\"black\"/>\n";
  const auto bar_y = [&](double v) { return mt + ph * (1.0 - (v - v_lo) / (v_hi - v_lo)); };
  for (const double v : {v_lo, v_hi}) {
    out += "<text x=\"" + fmt(bx + bw + 4) + "\" y=\"" + fmt(bar_y(v) + 4) + "\" font-size=\"11\">" +
           fmt(v) + "</text>\n";
  }
  for (const double level : spec.contour_levels) {
    if (!(level >= v_lo && level <= v_hi)) continue;
    out += "<line x1=\"" + fmt(bx) + "\" y1=\"" + fmt(bar_y(level)) + "\" x2=\"" + fmt(bx + bw) +
           "\" y2=\"" + fmt(bar_y(level)) + "\" stroke=\"white\"/>\n";
    out += "<text x=\"" + fmt(bx + bw + 4) + "\" y=\"" + fmt(bar_y(level) + 4) + "\" font-size=\"11\">" +
           fmt(level) + "</text>\n";
  }

  if (std::isfinite(spec.marker_x) && std::isfinite(spec.marker_y)) {
    const double mx = px(spec.marker_x), my = py(spec.marker_y);
    out += "<line x1=\"" + fmt(mx - 7) + "\" y1=\"" + fmt(my) + "\" x2=\"" + fmt(mx + 7) + "\" y2=\"" +
           fmt(my) + "\" stroke=\"red\" stroke-width=\"1.6\"/>\n";
    out += "<line x1=\"" + fmt(mx) + "\" y1=\"" + fmt(my - 7) + "\" x2=\"" + fmt(mx) + "\" y2=\"" +
           fmt(my + 7) + "\" stroke=\"red\" stroke-width=\"1.6\"/>\n";
  }

  out += "</svg>\n";
  return out;
}

}  // namespace photon_mux::svg
