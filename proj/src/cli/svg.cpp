#include "oaekit/cli/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include "oaekit/error.hpp"

namespace oaekit::cli {

namespace {

constexpr double kWidth = 640, kHeight = 400;
constexpr double kLeft = 70, kRight = 140, kTop = 40, kBottom = 50;
const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#17becf"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

std::string escape(const std::string& s) {
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

}  // namespace

std::string render_svg(const std::vector<analysis::PlotPoint>& points, ChartKind kind, const ChartLabels& labels) {
  std::vector<std::string> series;
  for (const auto& p : points) {
    if (std::find(series.begin(), series.end(), p.series) == series.end()) series.push_back(p.series);
  }
  double x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  if (!points.empty()) {
    x0 = x1 = points[0].x;
    y0 = std::min(0.0, points[0].y - points[0].err_low);
    y1 = points[0].y + points[0].err_high;
    for (const auto& p : points) {
      x0 = std::min(x0, p.x);
      x1 = std::max(x1, p.x);
      y0 = std::min(y0, p.y - p.err_low);
      y1 = std::max(y1, p.y + p.err_high);
    }
  }
  if (kind == ChartKind::bar) {
    x0 -= 0.5;
    x1 += 0.5;
  }
  if (x1 == x0) x1 = x0 + 1;
  if (y1 == y0) y1 = y0 + 1;
  const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
  const auto sx = [&](double x) { return kLeft + (x - x0) / (x1 - x0) * pw; };
  const auto sy = [&](double y) { return kTop + (1.0 - (y - y0) / (y1 - y0)) * ph; };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" << escape(labels.title)
      << "</text>\n";
  svg << "<line x1=\"" << kLeft << "\" y1=\"" << kTop + ph << "\" x2=\"" << kLeft + pw << "\" y2=\"" << kTop + ph
      << "\" stroke=\"black\"/>\n";
  svg << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\"" << kTop + ph
      << "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double y = y0 + (y1 - y0) * i / 4.0;
    svg << "<text x=\"" << kLeft - 6 << "\" y=\"" << num(sy(y) + 4) << "\" text-anchor=\"end\">" << tick(y)
        << "</text>\n";
  }
  std::vector<double> xs;
  for (const auto& p : points) {
    if (std::find(xs.begin(), xs.end(), p.x) == xs.end()) xs.push_back(p.x);
  }
  for (double x : xs) {
    svg << "<text x=\"" << num(sx(x)) << "\" y=\"" << kTop + ph + 16 << "\" text-anchor=\"middle\">" << tick(x)
        << "</text>\n";
  }
  svg << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << kHeight - 10 << "\" text-anchor=\"middle\">"
      << escape(labels.x) << "</text>\n";
  svg << "<text transform=\"translate(16," << kTop + ph / 2 << ") rotate(-90)\" text-anchor=\"middle\">"
      << escape(labels.y) << "</text>\n";

  const double group = kind == ChartKind::bar ? 0.8 * pw / (x1 - x0) : 0.0;
  const double bar = series.empty() ? 0.0 : group / static_cast<double>(series.size());
  for (std::size_t s = 0; s < series.size(); ++s) {
    const char* colour = kPalette[s % std::size(kPalette)];
    std::vector<analysis::PlotPoint> pts;
    for (const auto& p : points) {
      if (p.series == series[s]) pts.push_back(p);
    }
    std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) { return a.x < b.x; });
    if (kind == ChartKind::line) {
      svg << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"2\" points=\"";
      for (const auto& p : pts) svg << num(sx(p.x)) << ',' << num(sy(p.y)) << ' ';
      svg << "\"/>\n";
    }
    for (const auto& p : pts) {
      double cx = sx(p.x);
      if (kind == ChartKind::bar) {
        const double left = cx - group / 2 + bar * static_cast<double>(s);
        const double top = std::min(sy(p.y), sy(0.0)), h = std::abs(sy(p.y) - sy(0.0));
        svg << "<rect x=\"" << num(left) << "\" y=\"" << num(top) << "\" width=\"" << num(bar) << "\" height=\""
            << num(h) << "\" fill=\"" << colour << "\"/>\n";
        cx = left + bar / 2;
      } else {
        svg << "<circle cx=\"" << num(cx) << "\" cy=\"" << num(sy(p.y)) << "\" r=\"3\" fill=\"" << colour << "\"/>\n";
      }
      if (p.err_low > 0 || p.err_high > 0) {
        svg << "<line x1=\"" << num(cx) << "\" y1=\"" << num(sy(p.y - p.err_low)) << "\" x2=\"" << num(cx)
            << "\" y2=\"" << num(sy(p.y + p.err_high)) << "\" stroke=\"black\"/>\n";
      }
    }
    const double ly = kTop + 10 + 18.0 * static_cast<double>(s);
    svg << "<rect x=\"" << kLeft + pw + 12 << "\" y=\"" << num(ly - 9) << "\" width=\"10\" height=\"10\" fill=\""
        << colour << "\"/>\n";
    svg << "<text x=\"" << kLeft + pw + 28 << "\" y=\"" << num(ly) << "\">" << escape(series[s]) << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

std::vector<analysis::PlotPoint> parse_tsv(const std::string& text, const std::string& source) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "series\tx\ty\terr_low\terr_high") {
    throw SchemaViolation(source + ": line 1: expected the plot-data header");
  }
  std::vector<analysis::PlotPoint> out;
  std::size_t n = 1;
  while (std::getline(in, line)) {
    ++n;
    if (line.empty()) continue;
    std::istringstream row(line);
    analysis::PlotPoint p;
    std::string x, y, lo, hi;
    if (!std::getline(row, p.series, '\t') || !std::getline(row, x, '\t') || !std::getline(row, y, '\t') ||
        !std::getline(row, lo, '\t') || !std::getline(row, hi)) {
      throw SchemaViolation(source + ": line " + std::to_string(n) + ": expected 5 fields");
    }
    try {
      p.x = std::stod(x);
      p.y = std::stod(y);
      p.err_low = std::stod(lo);
      p.err_high = std::stod(hi);
    } catch (const std::exception&) {
      throw SchemaViolation(source + ": line " + std::to_string(n) + ": not a number");
    }
    out.push_back(p);
  }
  return out;
}

}  // namespace oaekit::cli
