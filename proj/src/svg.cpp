#include "lempert/svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace lempert::plot {

namespace {

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

double nice_step(double span) {
  double raw = span / 5.0;
  double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double frac = raw / mag;
  double nice = frac < 1.5 ? 1.0 : frac < 3.5 ? 2.0 : frac < 7.5 ? 5.0 : 10.0;
  return nice * mag;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

}  // namespace

std::string SvgPlot::render() const {
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  auto tx = [&](double x) { return logx ? std::log10(x) : x; };
  auto ty = [&](double y) { return logy ? std::log10(y) : y; };
  for (const Series& s : series) {
    for (auto [x, y] : s.points) {
      if (logx && x <= 0) continue;
      if (logy && y <= 0) continue;
      xmin = std::min(xmin, tx(x));
      xmax = std::max(xmax, tx(x));
      ymin = std::min(ymin, ty(y));
      ymax = std::max(ymax, ty(y));
    }
  }
  if (!(xmin < xmax)) {
    xmin -= 0.5;
    xmax += 0.5;
  }
  if (!(ymin < ymax)) {
    ymin -= 0.5;
    ymax += 0.5;
  }
  double xpad = 0.06 * (xmax - xmin), ypad = 0.08 * (ymax - ymin);
  xmin -= xpad;
  xmax += xpad;
  ymin -= ypad;
  ymax += ypad;

  const double ml = 70, mr = 20, mt = 40, mb = 55;
  double pw = width - ml - mr, ph = height - mt - mb;
  auto px = [&](double x) { return ml + (tx(x) - xmin) / (xmax - xmin) * pw; };
  auto py = [&](double y) { return mt + (1.0 - (ty(y) - ymin) / (ymax - ymin)) * ph; };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
     << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << width / 2 << "\" y=\"22\" text-anchor=\"middle\" "
        "font-family=\"sans-serif\" font-size=\"15\">"
     << title << "</text>\n";

  // axes frame
  os << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << pw << "\" height=\""
     << ph << "\" fill=\"none\" stroke=\"#333\"/>\n";

  auto emit_tick_x = [&](double v, const std::string& label) {
    double X = ml + (v - xmin) / (xmax - xmin) * pw;
    os << "<line x1=\"" << X << "\" y1=\"" << mt + ph << "\" x2=\"" << X << "\" y2=\""
       << mt + ph + 5 << "\" stroke=\"#333\"/>\n";
    os << "<text x=\"" << X << "\" y=\"" << mt + ph + 18
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" << label
       << "</text>\n";
  };
  auto emit_tick_y = [&](double v, const std::string& label) {
    double Y = mt + (1.0 - (v - ymin) / (ymax - ymin)) * ph;
    os << "<line x1=\"" << ml - 5 << "\" y1=\"" << Y << "\" x2=\"" << ml << "\" y2=\"" << Y
       << "\" stroke=\"#333\"/>\n";
    os << "<text x=\"" << ml - 8 << "\" y=\"" << Y + 4
       << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << label
       << "</text>\n";
  };

  if (logx) {
    for (int e = int(std::floor(xmin)); e <= int(std::ceil(xmax)); ++e)
      if (e >= xmin && e <= xmax) emit_tick_x(e, "1e" + std::to_string(e));
  } else {
    double step = nice_step(xmax - xmin);
    for (double v = std::ceil(xmin / step) * step; v <= xmax + 1e-12; v += step)
      emit_tick_x(v, fmt(v));
  }
  if (logy) {
    for (int e = int(std::floor(ymin)); e <= int(std::ceil(ymax)); ++e)
      if (e >= ymin && e <= ymax) emit_tick_y(e, "1e" + std::to_string(e));
  } else {
    double step = nice_step(ymax - ymin);
    for (double v = std::ceil(ymin / step) * step; v <= ymax + 1e-12; v += step)
      emit_tick_y(v, fmt(v));
  }

  os << "<text x=\"" << ml + pw / 2 << "\" y=\"" << height - 12
     << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" << xlabel
     << "</text>\n";
  os << "<text x=\"18\" y=\"" << mt + ph / 2
     << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" "
        "transform=\"rotate(-90 18 "
     << mt + ph / 2 << ")\">" << ylabel << "</text>\n";

  int ci = 0;
  double legend_y = mt + 14;
  for (const Series& s : series) {
    std::string color = s.color.empty() ? kPalette[ci % 8] : s.color;
    if (s.color.empty() || s.color == "auto") color = kPalette[ci % 8];
    std::vector<std::pair<double, double>> pts;
    for (auto [x, y] : s.points) {
      if (logx && x <= 0) continue;
      if (logy && y <= 0) continue;
      pts.emplace_back(px(x), py(y));
    }
    if (s.line && pts.size() > 1) {
      os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.6\" points=\"";
      for (auto [X, Y] : pts) os << X << "," << Y << " ";
      os << "\"/>\n";
    }
    if (s.markers) {
      for (auto [X, Y] : pts)
        os << "<circle cx=\"" << X << "\" cy=\"" << Y << "\" r=\"2.6\" fill=\"" << color
           << "\"/>\n";
    }
    if (!s.label.empty()) {
      os << "<rect x=\"" << ml + pw - 150 << "\" y=\"" << legend_y - 8
         << "\" width=\"10\" height=\"10\" fill=\"" << color << "\"/>\n";
      os << "<text x=\"" << ml + pw - 135 << "\" y=\"" << legend_y + 1
         << "\" font-family=\"sans-serif\" font-size=\"11\">" << s.label << "</text>\n";
      legend_y += 16;
    }
    ++ci;
  }
  os << "</svg>\n";
  return os.str();
}

void SvgPlot::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write svg: " + path);
  out << render();
}

}  // namespace lempert::plot
