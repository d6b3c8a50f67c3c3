#include "fmros/report/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace fmros::svg {

namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                    "#9467bd", "#17becf", "#8c564b", "#7f7f7f"};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string fmt_tick(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  void expand(double v) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void pad() {
    if (!(lo <= hi)) {
      lo = 0;
      hi = 1;
    }
    if (lo == hi) {
      lo -= 0.5;
      hi += 0.5;
    }
    const double m = 0.06 * (hi - lo);
    lo -= m;
    hi += m;
  }
};

std::vector<double> nice_ticks(double lo, double hi, int target = 6) {
  const double span = hi - lo;
  double raw = span / target;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double norm = raw / mag;
  double step = 10.0;
  if (norm <= 1.5) {
    step = 1.0;
  } else if (norm <= 3.0) {
    step = 2.0;
  } else if (norm <= 7.0) {
    step = 5.0;
  }
  step *= mag;
  std::vector<double> ticks;
  for (double v = std::ceil(lo / step) * step; v <= hi + 1e-12 * span; v += step)
    ticks.push_back(v);
  return ticks;
}

void render_panel(std::ostringstream& out, const Chart& chart, double x0, double width) {
  const double margin_left = 78, margin_right = 18, margin_top = 40, margin_bottom = 92;
  const double plot_w = width - margin_left - margin_right;
  const double plot_h = chart.height - margin_top - margin_bottom;
  const double px0 = x0 + margin_left, py0 = margin_top;

  Range xr, yr;
  const bool categorical = !chart.x_tick_labels.empty();
  if (categorical) {
    xr.lo = -0.5;
    xr.hi = static_cast<double>(chart.x_tick_labels.size()) - 0.5;
  }
  for (const auto& s : chart.series) {
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!categorical) xr.expand(s.x[i]);
      yr.expand(s.y[i]);
      if (i < s.err.size()) {
        yr.expand(s.y[i] - s.err[i]);
        yr.expand(s.y[i] + s.err[i]);
      }
    }
  }
  if (!categorical) xr.pad();
  yr.pad();

  auto sx = [&](double v) { return px0 + (v - xr.lo) / (xr.hi - xr.lo) * plot_w; };
  auto sy = [&](double v) { return py0 + plot_h - (v - yr.lo) / (yr.hi - yr.lo) * plot_h; };

  out << "<rect x=\"" << fmt(px0) << "\" y=\"" << fmt(py0) << "\" width=\"" << fmt(plot_w)
      << "\" height=\"" << fmt(plot_h)
      << "\" fill=\"white\" stroke=\"#444\" stroke-width=\"1\"/>\n";
  out << "<text x=\"" << fmt(px0 + plot_w / 2) << "\" y=\"" << fmt(py0 - 16)
      << "\" text-anchor=\"middle\" font-size=\"15\" font-weight=\"bold\">"
      << escape(chart.title) << "</text>\n";

  // y ticks and grid
  for (double v : nice_ticks(yr.lo, yr.hi)) {
    const double y = sy(v);
    out << "<line x1=\"" << fmt(px0) << "\" y1=\"" << fmt(y) << "\" x2=\"" << fmt(px0 + plot_w)
        << "\" y2=\"" << fmt(y) << "\" stroke=\"#ddd\" stroke-width=\"0.7\"/>\n";
    out << "<text x=\"" << fmt(px0 - 6) << "\" y=\"" << fmt(y + 4)
        << "\" text-anchor=\"end\" font-size=\"11\">" << fmt_tick(v) << "</text>\n";
  }

  // x ticks
  if (categorical) {
    for (std::size_t i = 0; i < chart.x_tick_labels.size(); ++i) {
      const double x = sx(static_cast<double>(i));
      out << "<line x1=\"" << fmt(x) << "\" y1=\"" << fmt(py0 + plot_h) << "\" x2=\"" << fmt(x)
          << "\" y2=\"" << fmt(py0 + plot_h + 4) << "\" stroke=\"#444\"/>\n";
      out << "<text x=\"" << fmt(x) << "\" y=\"" << fmt(py0 + plot_h + 8)
          << "\" text-anchor=\"end\" font-size=\"11\" transform=\"rotate(-45 " << fmt(x) << ' '
          << fmt(py0 + plot_h + 8) << ")\">" << escape(chart.x_tick_labels[i]) << "</text>\n";
    }
  } else {
    for (double v : nice_ticks(xr.lo, xr.hi)) {
      const double x = sx(v);
      out << "<line x1=\"" << fmt(x) << "\" y1=\"" << fmt(py0 + plot_h) << "\" x2=\"" << fmt(x)
          << "\" y2=\"" << fmt(py0 + plot_h + 4) << "\" stroke=\"#444\"/>\n";
      out << "<text x=\"" << fmt(x) << "\" y=\"" << fmt(py0 + plot_h + 18)
          << "\" text-anchor=\"middle\" font-size=\"11\">" << fmt_tick(v) << "</text>\n";
    }
  }

  for (double v : chart.x_separators) {
    const double x = sx(v);
    out << "<line x1=\"" << fmt(x) << "\" y1=\"" << fmt(py0) << "\" x2=\"" << fmt(x)
        << "\" y2=\"" << fmt(py0 + plot_h)
        << "\" stroke=\"#777\" stroke-width=\"1\" stroke-dasharray=\"6 4\"/>\n";
  }

  out << "<text x=\"" << fmt(px0 + plot_w / 2) << "\" y=\"" << fmt(chart.height - 8)
      << "\" text-anchor=\"middle\" font-size=\"13\">" << escape(chart.x_label) << "</text>\n";
  out << "<text x=\"" << fmt(x0 + 18) << "\" y=\"" << fmt(py0 + plot_h / 2)
      << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 " << fmt(x0 + 18)
      << ' ' << fmt(py0 + plot_h / 2) << ")\">" << escape(chart.y_label) << "</text>\n";

  // series
  for (std::size_t si = 0; si < chart.series.size(); ++si) {
    const auto& s = chart.series[si];
    const std::string color =
        s.color.empty() ? kPalette[si % (sizeof(kPalette) / sizeof(kPalette[0]))] : s.color;
    if (s.line && s.x.size() > 1) {
      out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.8\"";
      if (s.dashed) out << " stroke-dasharray=\"7 4\"";
      out << " points=\"";
      for (std::size_t i = 0; i < s.x.size(); ++i)
        out << fmt(sx(s.x[i])) << ',' << fmt(sy(s.y[i])) << ' ';
      out << "\"/>\n";
    }
    for (std::size_t i = 0; i < s.err.size() && i < s.x.size(); ++i) {
      const double x = sx(s.x[i]);
      out << "<line x1=\"" << fmt(x) << "\" y1=\"" << fmt(sy(s.y[i] - s.err[i])) << "\" x2=\""
          << fmt(x) << "\" y2=\"" << fmt(sy(s.y[i] + s.err[i])) << "\" stroke=\"" << color
          << "\" stroke-width=\"1.4\"/>\n";
    }
    if (s.points) {
      for (std::size_t i = 0; i < s.x.size(); ++i) {
        out << "<circle cx=\"" << fmt(sx(s.x[i])) << "\" cy=\"" << fmt(sy(s.y[i]))
            << "\" r=\"3.2\" fill=\"" << color << "\"/>\n";
      }
    }
  }

  // legend (only when labeled)
  double ly = py0 + 10;
  for (std::size_t si = 0; si < chart.series.size(); ++si) {
    const auto& s = chart.series[si];
    if (s.label.empty()) continue;
    const std::string color =
        s.color.empty() ? kPalette[si % (sizeof(kPalette) / sizeof(kPalette[0]))] : s.color;
    const double lx = px0 + plot_w - 150;
    out << "<line x1=\"" << fmt(lx) << "\" y1=\"" << fmt(ly) << "\" x2=\"" << fmt(lx + 24)
        << "\" y2=\"" << fmt(ly) << "\" stroke=\"" << color << "\" stroke-width=\"2\"";
    if (s.dashed) out << " stroke-dasharray=\"7 4\"";
    out << "/>\n";
    out << "<text x=\"" << fmt(lx + 30) << "\" y=\"" << fmt(ly + 4) << "\" font-size=\"11\">"
        << escape(s.label) << "</text>\n";
    ly += 16;
  }
}

}  // namespace

void write_panels_svg(std::span<const Chart> panels, const std::string& path) {
  if (panels.empty()) throw std::invalid_argument("write_panels_svg: no panels");
  double total_w = 0, total_h = 0;
  for (const auto& p : panels) {
    total_w += p.width;
    total_h = std::max(total_h, p.height);
  }
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(total_w) << "\" height=\""
      << fmt(total_h) << "\" font-family=\"sans-serif\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  double x0 = 0;
  for (const auto& p : panels) {
    render_panel(out, p, x0, p.width);
    x0 += p.width;
  }
  out << "</svg>\n";

  std::ofstream file(path);
  if (!file) throw std::runtime_error("cannot write " + path);
  file << out.str();
  if (!file) throw std::runtime_error("write failed: " + path);
}

void write_chart_svg(const Chart& chart, const std::string& path) {
  write_panels_svg({&chart, 1}, path);
}

}  // namespace fmros::svg
