#include "movingflow/svg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "movingflow/archive.hpp"
#include "movingflow/estimates.hpp"
#include "movingflow/truncation.hpp"

namespace mf {

namespace {

constexpr double W = 640, H = 420, ML = 70, MR = 170, MT = 30, MB = 50;
const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b"};

struct Frame {
  double x0, x1, y0, y1;
  double px(double x) const { return ML + (x - x0) / (x1 - x0) * (W - ML - MR); }
  double py(double y) const { return H - MB - (y - y0) / (y1 - y0) * (H - MT - MB); }
};

std::string f(double v) { return format_double(std::round(v * 100.0) / 100.0); }

std::string open(const std::string& title) {
  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" viewBox=\"0 0 " << W
    << " " << H << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
    << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
    << "<text x=\"" << W / 2 << "\" y=\"18\" text-anchor=\"middle\">" << title << "</text>\n";
  return s.str();
}

std::string axes(const Frame& fr, const std::string& xlabel, const std::string& ylabel, bool logscale) {
  std::ostringstream s;
  s << "<rect x=\"" << ML << "\" y=\"" << MT << "\" width=\"" << W - ML - MR << "\" height=\"" << H - MT - MB
    << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double xv = fr.x0 + (fr.x1 - fr.x0) * i / 4, yv = fr.y0 + (fr.y1 - fr.y0) * i / 4;
    const double xl = logscale ? std::pow(10.0, xv) : xv, yl = logscale ? std::pow(10.0, yv) : yv;
    std::ostringstream xs, ys;
    xs.precision(3);
    ys.precision(3);
    xs << xl;
    ys << yl;
    s << "<text x=\"" << f(fr.px(xv)) << "\" y=\"" << H - MB + 16 << "\" text-anchor=\"middle\">" << xs.str()
      << "</text>\n";
    s << "<text x=\"" << ML - 6 << "\" y=\"" << f(fr.py(yv) + 4) << "\" text-anchor=\"end\">" << ys.str()
      << "</text>\n";
  }
  s << "<text x=\"" << (ML + W - MR) / 2 << "\" y=\"" << H - 10 << "\" text-anchor=\"middle\">" << xlabel
    << "</text>\n";
  s << "<text x=\"16\" y=\"" << H / 2 << "\" transform=\"rotate(-90 16 " << H / 2 << ")\" text-anchor=\"middle\">"
    << ylabel << "</text>\n";
  return s.str();
}

std::string polyline(const Frame& fr, const std::vector<double>& x, const std::vector<double>& y, const char* color,
                     const char* extra = "") {
  std::ostringstream s;
  s << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" " << extra << " points=\"";
  for (std::size_t i = 0; i < x.size(); ++i) s << f(fr.px(x[i])) << "," << f(fr.py(y[i])) << " ";
  s << "\"/>\n";
  return s.str();
}

std::string legend(int i, const std::string& text, const char* color) {
  std::ostringstream s;
  const double y = MT + 14 + 18 * i;
  s << "<line x1=\"" << W - MR + 10 << "\" y1=\"" << y - 4 << "\" x2=\"" << W - MR + 30 << "\" y2=\"" << y - 4
    << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n"
    << "<text x=\"" << W - MR + 36 << "\" y=\"" << y << "\">" << text << "</text>\n";
  return s.str();
}

}  // namespace

std::string svg_field_snapshots(const SpaceTimeField& field, int count) {
  struct Level {
    const Slice* slice;
    const Field* f;
  };
  std::vector<Level> levels;
  for (const Slice& s : field.slices)
    for (std::size_t k = 0; k < s.steps.size(); ++k)
      if (&s == &field.slices.front() || k > 0) levels.push_back({&s, &s.steps[k]});
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = 0.0, y1 = 0.0;
  for (const Level& l : levels) {
    x0 = std::min(x0, l.slice->mesh.nodes[0]);
    x1 = std::max(x1, l.slice->mesh.nodes[l.slice->mesh.nodes.size() - 1]);
    y0 = std::min(y0, l.f->values.minCoeff());
    y1 = std::max(y1, l.f->values.maxCoeff());
  }
  if (levels.empty()) x0 = 0.0, x1 = 1.0;
  if (y1 - y0 < 1e-12) y0 -= 1.0, y1 += 1.0;
  const double pad = 0.12 * (y1 - y0);
  const Frame fr{x0, x1, y0 - pad, y1 + pad};
  std::string out = open("u(x, t) snapshots") + axes(fr, "x", "u", false);
  const int shown = levels.empty() ? 0 : std::min<int>(count, static_cast<int>(levels.size()));
  for (int i = 0; i < shown; ++i) {
    const std::size_t idx = shown == 1 ? 0 : i * (levels.size() - 1) / (shown - 1);
    const Level& l = levels[idx];
    const char* color = kColors[i % 7];
    const auto& nodes = l.slice->mesh.nodes;
    // Interval outline below the plot area.
    const double yb = fr.y0 + 0.02 * (fr.y1 - fr.y0) * (i + 1);
    out += polyline(fr, {nodes[0], nodes[nodes.size() - 1]}, {yb, yb}, color, "stroke-dasharray=\"4 2\"");
    std::vector<double> xs(nodes.data(), nodes.data() + nodes.size());
    std::vector<double> ys(l.f->values.data(), l.f->values.data() + l.f->values.size());
    out += polyline(fr, xs, ys, color);
    std::ostringstream label;
    label.precision(4);
    label << "t = " << l.f->time;
    out += legend(i, label.str(), color);
  }
  return out + "</svg>\n";
}

std::string svg_trend(const std::vector<TrendSeries>& series, const std::string& xlabel, const std::string& ylabel) {
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (const auto& s : series)
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!(s.x[i] > 0.0) || !(s.y[i] > 0.0)) continue;
      x0 = std::min(x0, std::log10(s.x[i]));
      x1 = std::max(x1, std::log10(s.x[i]));
      y0 = std::min(y0, std::log10(s.y[i]));
      y1 = std::max(y1, std::log10(s.y[i]));
    }
  if (!std::isfinite(x0)) x0 = 0.0, x1 = 1.0, y0 = 0.0, y1 = 1.0;
  if (x1 - x0 < 1e-12) x0 -= 0.5, x1 += 0.5;
  if (y1 - y0 < 1e-12) y0 -= 0.5, y1 += 0.5;
  const Frame fr{x0, x1, y0 - 0.05 * (y1 - y0), y1 + 0.05 * (y1 - y0)};
  std::string out = open("convergence trend") + axes(fr, xlabel, ylabel, true);
  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    std::vector<double> lx, ly, px, py;
    for (std::size_t i = 0; i < s.x.size(); ++i)
      if (s.x[i] > 0.0 && s.y[i] > 0.0) {
        lx.push_back(std::log10(s.x[i]));
        ly.push_back(std::log10(s.y[i]));
        px.push_back(s.x[i]);
        py.push_back(s.y[i]);
      }
    const char* color = kColors[k % 7];
    out += polyline(fr, lx, ly, color);
    for (std::size_t i = 0; i < lx.size(); ++i)
      out += "<circle cx=\"" + f(fr.px(lx[i])) + "\" cy=\"" + f(fr.py(ly[i])) + "\" r=\"3\" fill=\"" + color + "\"/>\n";
    std::ostringstream label;
    label.precision(3);
    label << s.label << " (slope " << (px.size() >= 2 ? log_slope(px, py) : 0.0) << ")";
    out += legend(static_cast<int>(k), label.str(), color);
  }
  return out + "</svg>\n";
}

std::string svg_bands(const SpaceTimeField& field, int n) {
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0;
  for (const Slice& s : field.slices) {
    x0 = std::min(x0, s.mesh.nodes[0]);
    x1 = std::max(x1, s.mesh.nodes[s.mesh.nodes.size() - 1]);
  }
  const double T = field.horizon();
  double t0 = field.slices.empty() ? 0.0 : field.slices.front().t_begin;
  if (!std::isfinite(x0)) x0 = 0.0, x1 = 1.0;
  const Frame fr{x0, x1, t0, T > t0 ? T : t0 + 1.0};
  std::string out = open("bands B_" + std::to_string(n) + " / E_" + std::to_string(n)) + axes(fr, "x", "t", false);
  int shaded = 0;
  for (const Slice& s : field.slices) {
    const auto& nodes = s.mesh.nodes;
    out += "<rect x=\"" + f(fr.px(nodes[0])) + "\" y=\"" + f(fr.py(s.t_end)) + "\" width=\"" +
           f(fr.px(nodes[nodes.size() - 1]) - fr.px(nodes[0])) + "\" height=\"" + f(fr.py(s.t_begin) - fr.py(s.t_end)) +
           "\" fill=\"none\" stroke=\"#888\"/>\n";
    for (std::size_t k = 1; k < s.steps.size(); ++k) {
      const Field& u = s.steps[k];
      const double ta = s.steps[k - 1].time, tb = u.time;
      for (int e = 0; e < s.mesh.elements(); ++e) {
        const double mid = 0.5 * (u.values[e] + u.values[e + 1]);
        const char* color = above_band(n, mid) ? "#08306b" : (in_band(n, mid) ? "#9ecae1" : nullptr);
        if (!color) continue;
        ++shaded;
        out += "<rect x=\"" + f(fr.px(nodes[e])) + "\" y=\"" + f(fr.py(tb)) + "\" width=\"" +
               f(fr.px(nodes[e + 1]) - fr.px(nodes[e])) + "\" height=\"" + f(fr.py(ta) - fr.py(tb)) + "\" fill=\"" +
               color + "\"/>\n";
      }
    }
  }
  out += legend(0, "B_n", "#9ecae1") + legend(1, "E_n", "#08306b");
  out += "<!-- shaded cells: " + std::to_string(shaded) + " -->\n";
  return out + "</svg>\n";
}

}  // namespace mf
