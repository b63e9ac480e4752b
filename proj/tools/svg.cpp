#include "svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace tdefl::cli {

namespace {

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#17becf", "#7f7f7f"};

std::string escape(const std::string& s) {
  std::string o;
  for (char c : s) {
    switch (c) {
      case '<': o += "&lt;"; break;
      case '>': o += "&gt;"; break;
      case '&': o += "&amp;"; break;
      default: o += c;
    }
  }
  return o;
}

std::string num(double v) {
  char b[32];
  std::snprintf(b, sizeof b, "%.4g", v);
  return b;
}

}  // namespace

std::string render_svg(const Chart& chart, int width, int height) {
  const double ml = 60, mr = 20, mt = 36, mb = 48;
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  double bar_width = 0.0;
  for (const Series& s : chart.series) {
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      x0 = std::min(x0, s.x[i]);
      x1 = std::max(x1, s.x[i]);
      y0 = std::min(y0, s.y[i]);
      y1 = std::max(y1, s.y[i]);
    }
    if (s.columns && s.x.size() > 1) bar_width = std::abs(s.x[1] - s.x[0]);
  }
  if (!std::isfinite(x0)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  x0 -= bar_width / 2;
  x1 += bar_width / 2;
  if (y0 > 0) y0 = 0;
  if (x1 == x0) x1 = x0 + 1;
  if (y1 == y0) y1 = y0 + 1;
  const double pw = width - ml - mr, ph = height - mt - mb;
  auto sx = [&](double x) { return ml + (x - x0) / (x1 - x0) * pw; };
  auto sy = [&](double y) { return mt + (1.0 - (y - y0) / (y1 - y0)) * ph; };

  std::string o;
  o += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(width) + "\" height=\"" +
       std::to_string(height) + "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  o += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o += "<text x=\"" + num(width / 2.0) + "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">" + escape(chart.title) +
       "</text>\n";
  o += "<rect x=\"" + num(ml) + "\" y=\"" + num(mt) + "\" width=\"" + num(pw) + "\" height=\"" + num(ph) +
       "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int t = 0; t <= 4; ++t) {
    const double xv = x0 + (x1 - x0) * t / 4.0, yv = y0 + (y1 - y0) * t / 4.0;
    o += "<text x=\"" + num(sx(xv)) + "\" y=\"" + num(mt + ph + 16) + "\" text-anchor=\"middle\">" + num(xv) +
         "</text>\n";
    o += "<text x=\"" + num(ml - 6) + "\" y=\"" + num(sy(yv) + 4) + "\" text-anchor=\"end\">" + num(yv) + "</text>\n";
  }
  o += "<text x=\"" + num(ml + pw / 2) + "\" y=\"" + num(height - 10.0) + "\" text-anchor=\"middle\">" +
       escape(chart.xlabel) + "</text>\n";
  o += "<text x=\"14\" y=\"" + num(mt + ph / 2) + "\" text-anchor=\"middle\" transform=\"rotate(-90 14 " +
       num(mt + ph / 2) + ")\">" + escape(chart.ylabel) + "</text>\n";

  for (std::size_t si = 0; si < chart.series.size(); ++si) {
    const Series& s = chart.series[si];
    const char* color = kPalette[si % (sizeof kPalette / sizeof *kPalette)];
    if (s.columns) {
      const double bw = std::max(1.0, sx(x0 + bar_width) - sx(x0) - 1.0);
      for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
        if (!std::isfinite(s.y[i])) continue;
        const double top = sy(std::max(s.y[i], 0.0)), base = sy(std::max(y0, 0.0));
        o += "<rect x=\"" + num(sx(s.x[i]) - bw / 2) + "\" y=\"" + num(top) + "\" width=\"" + num(bw) +
             "\" height=\"" + num(std::max(0.0, base - top)) + "\" fill=\"" + color + "\" fill-opacity=\"0.5\"/>\n";
      }
    } else {
      std::string pts;
      for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
        if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
        pts += num(sx(s.x[i])) + "," + num(sy(s.y[i])) + " ";
      }
      o += "<polyline fill=\"none\" stroke=\"" + std::string(color) + "\" stroke-width=\"1.5\" points=\"" + pts +
           "\"/>\n";
    }
    o += "<text x=\"" + num(ml + pw - 6) + "\" y=\"" + num(mt + 16 + 14.0 * static_cast<double>(si)) +
         "\" text-anchor=\"end\" fill=\"" + color + "\">" + escape(s.label) + "</text>\n";
  }
  o += "</svg>\n";
  return o;
}

}  // namespace tdefl::cli
