// Static log-log convergence plots as SVG.

#ifndef BIOTFE_REPORT_SVG_HPP
#define BIOTFE_REPORT_SVG_HPP

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "biotfe/verify/norms.hpp"

namespace biotfe::report {

struct Series {
  std::string label;
  std::vector<double> h;
  std::vector<double> error;
};

namespace detail {

inline std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

inline std::string escape_xml(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace detail

/// Error against h on log-log axes with one polyline per series, the fitted
/// slope of each series in the legend and a slope-1 reference triangle.
/// Non-positive or NaN points are skipped. Returns the fitted slopes.
inline std::vector<double> write_loglog_svg(std::ostream& os, const std::string& title, const std::string& ylabel,
                                            const std::vector<Series>& series) {
  using detail::fmt;
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin, ymin = xmin, ymax = -xmin;
  std::vector<double> slopes;
  for (const auto& s : series) {
    if (s.h.size() != s.error.size()) throw std::invalid_argument("plot: series '" + s.label + "' has mismatched data");
    for (std::size_t i = 0; i < s.h.size(); ++i) {
      if (!(s.h[i] > 0.0 && s.error[i] > 0.0)) continue;
      xmin = std::min(xmin, std::log10(s.h[i]));
      xmax = std::max(xmax, std::log10(s.h[i]));
      ymin = std::min(ymin, std::log10(s.error[i]));
      ymax = std::max(ymax, std::log10(s.error[i]));
    }
    slopes.push_back(verify::fitted_slope(s.h, s.error));
  }
  if (!(xmin <= xmax)) throw std::invalid_argument("plot: no positive data points");
  xmin = std::floor(xmin - 0.05);
  xmax = std::ceil(xmax + 0.05);
  ymin = std::floor(ymin - 0.3);
  ymax = std::ceil(ymax + 0.05);

  const double W = 640, H = 480, left = 80, right = 190, top = 40, bottom = 60;
  const double pw = W - left - right, ph = H - top - bottom;
  auto px = [&](double lx) { return left + (lx - xmin) / (xmax - xmin) * pw; };
  auto py = [&](double ly) { return top + (ymax - ly) / (ymax - ymin) * ph; };
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf"};

  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" viewBox=\"0 0 " << W
     << ' ' << H << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << left + pw / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">"
     << detail::escape_xml(title) << "</text>\n";
  for (int d = static_cast<int>(xmin); d <= static_cast<int>(xmax); ++d) {
    os << "<line x1=\"" << fmt("%.2f", px(d)) << "\" y1=\"" << top << "\" x2=\"" << fmt("%.2f", px(d)) << "\" y2=\""
       << top + ph << "\" stroke=\"#ddd\"/>\n";
    os << "<text x=\"" << fmt("%.2f", px(d)) << "\" y=\"" << top + ph + 18 << "\" text-anchor=\"middle\">1e" << d
       << "</text>\n";
  }
  for (int d = static_cast<int>(ymin); d <= static_cast<int>(ymax); ++d) {
    os << "<line x1=\"" << left << "\" y1=\"" << fmt("%.2f", py(d)) << "\" x2=\"" << left + pw << "\" y2=\""
       << fmt("%.2f", py(d)) << "\" stroke=\"#ddd\"/>\n";
    os << "<text x=\"" << left - 8 << "\" y=\"" << fmt("%.2f", py(d) + 4) << "\" text-anchor=\"end\">1e" << d
       << "</text>\n";
  }
  os << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
     << "\" fill=\"none\" stroke=\"black\"/>\n";
  os << "<text x=\"" << left + pw / 2 << "\" y=\"" << H - 15 << "\" text-anchor=\"middle\">h</text>\n";
  os << "<text x=\"20\" y=\"" << top + ph / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 20 " << top + ph / 2
     << ")\">" << detail::escape_xml(ylabel) << "</text>\n";

  double lowest_x = xmax, lowest_y = ymax;
  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const char* color = colors[k % std::size(colors)];
    std::string pts;
    for (std::size_t i = 0; i < s.h.size(); ++i) {
      if (!(s.h[i] > 0.0 && s.error[i] > 0.0)) continue;
      const double lx = std::log10(s.h[i]), ly = std::log10(s.error[i]);
      if (ly < lowest_y) {
        lowest_y = ly;
        lowest_x = lx;
      }
      pts += fmt("%.2f", px(lx)) + "," + fmt("%.2f", py(ly)) + " ";
      os << "<circle cx=\"" << fmt("%.2f", px(lx)) << "\" cy=\"" << fmt("%.2f", py(ly)) << "\" r=\"3.5\" fill=\""
         << color << "\"/>\n";
    }
    if (!pts.empty()) pts.pop_back();
    os << "<polyline points=\"" << pts << "\" fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    const double ly = top + 20 + 20 * static_cast<double>(k);
    os << "<line x1=\"" << left + pw + 12 << "\" y1=\"" << ly - 4 << "\" x2=\"" << left + pw + 36 << "\" y2=\"" << ly - 4
       << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    os << "<text x=\"" << left + pw + 42 << "\" y=\"" << ly << "\">" << detail::escape_xml(s.label) << " (slope "
       << (std::isnan(slopes[k]) ? std::string("n/a") : fmt("%.2f", slopes[k])) << ")</text>\n";
  }

  // Slope-1 triangle below the smallest error, one decade in h wide at most.
  const double dx = std::min(0.5 * (xmax - xmin), std::log10(4.0));
  const double tx0 = std::max(xmin + 0.05, std::min(lowest_x, xmax - dx - 0.05));
  const double ty0 = std::max(ymin + 0.05, lowest_y - dx - 0.15);
  os << "<polygon points=\"" << fmt("%.2f", px(tx0)) << ',' << fmt("%.2f", py(ty0)) << ' ' << fmt("%.2f", px(tx0 + dx))
     << ',' << fmt("%.2f", py(ty0)) << ' ' << fmt("%.2f", px(tx0 + dx)) << ',' << fmt("%.2f", py(ty0 + dx))
     << "\" fill=\"none\" stroke=\"black\" stroke-dasharray=\"4 3\"/>\n";
  os << "<text x=\"" << fmt("%.2f", px(tx0 + dx) + 6) << "\" y=\"" << fmt("%.2f", py(ty0 + dx / 2) + 4)
     << "\">1</text>\n";
  os << "<text x=\"" << fmt("%.2f", px(tx0 + dx / 2)) << "\" y=\"" << fmt("%.2f", py(ty0) + 15)
     << "\" text-anchor=\"middle\">1</text>\n";
  os << "</svg>\n";
  return slopes;
}

}  // namespace biotfe::report

#endif  // BIOTFE_REPORT_SVG_HPP
