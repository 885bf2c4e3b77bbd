#include "nlslab/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "nlslab/error.hpp"

namespace nlslab {

namespace {

const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

std::string num(double v) {
  char b[32];
  std::snprintf(b, sizeof b, "%.4g", v);
  return b;
}

std::string escape(const std::string& s) {
  std::string o;
  for (char c : s) {
    if (c == '<') o += "&lt;";
    else if (c == '>') o += "&gt;";
    else if (c == '&') o += "&amp;";
    else o += c;
  }
  return o;
}

}  // namespace

std::string plot_svg(const CsvTable& table, const PlotSpec& spec) {
  if (spec.y.empty()) fail(ErrorKind::missing_column, "no y columns requested");
  if (table.rows() == 0) fail(ErrorKind::missing_column, "table has no rows");
  const std::vector<double> xs = table.column(spec.x);
  std::vector<std::vector<double>> ys;
  for (const auto& name : spec.y) ys.push_back(table.column(name));

  auto tx = [&](double v) { return spec.log_x ? std::log10(v) : v; };
  auto ty = [&](double v) { return spec.log_y ? std::log10(v) : v; };
  auto usable = [&](double x, double y) {
    return std::isfinite(x) && std::isfinite(y) && (!spec.log_x || x > 0.0) && (!spec.log_y || y > 0.0);
  };

  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (const auto& col : ys)
    for (std::size_t i = 0; i < xs.size(); ++i)
      if (usable(xs[i], col[i])) {
        x0 = std::min(x0, tx(xs[i]));
        x1 = std::max(x1, tx(xs[i]));
        y0 = std::min(y0, ty(col[i]));
        y1 = std::max(y1, ty(col[i]));
      }
  if (!(x0 <= x1)) fail(ErrorKind::missing_column, "no plottable points");
  if (x1 == x0) x1 = x0 + 1.0;
  if (y1 == y0) y1 = y0 + 1.0;

  const double ml = 70, mr = 20, mt = 30, mb = 45;
  const double W = spec.width, H = spec.height;
  auto px = [&](double v) { return ml + (tx(v) - x0) / (x1 - x0) * (W - ml - mr); };
  auto py = [&](double v) { return H - mb - (ty(v) - y0) / (y1 - y0) * (H - mt - mb); };

  std::string s = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(W) + "\" height=\"" + num(H) + "\">\n";
  s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s += "<rect x=\"" + num(ml) + "\" y=\"" + num(mt) + "\" width=\"" + num(W - ml - mr) + "\" height=\"" +
       num(H - mt - mb) + "\" fill=\"none\" stroke=\"black\"/>\n";
  if (!spec.title.empty())
    s += "<text x=\"" + num(W / 2) + "\" y=\"18\" text-anchor=\"middle\" font-size=\"14\">" + escape(spec.title) +
         "</text>\n";
  for (int k = 0; k <= 4; ++k) {
    const double fx = x0 + (x1 - x0) * k / 4.0, fy = y0 + (y1 - y0) * k / 4.0;
    const double lx = spec.log_x ? std::pow(10.0, fx) : fx, ly = spec.log_y ? std::pow(10.0, fy) : fy;
    s += "<text x=\"" + num(px(lx)) + "\" y=\"" + num(H - mb + 16) + "\" text-anchor=\"middle\" font-size=\"11\">" +
         num(lx) + "</text>\n";
    s += "<text x=\"" + num(ml - 6) + "\" y=\"" + num(py(ly) + 4) + "\" text-anchor=\"end\" font-size=\"11\">" +
         num(ly) + "</text>\n";
  }
  s += "<text x=\"" + num(W / 2) + "\" y=\"" + num(H - 8) + "\" text-anchor=\"middle\" font-size=\"12\">" +
       escape(spec.x) + "</text>\n";
  for (std::size_t c = 0; c < ys.size(); ++c) {
    std::string pts;
    for (std::size_t i = 0; i < xs.size(); ++i)
      if (usable(xs[i], ys[c][i])) pts += num(px(xs[i])) + "," + num(py(ys[c][i])) + " ";
    const char* color = kColors[c % 6];
    s += "<polyline fill=\"none\" stroke=\"" + std::string(color) + "\" stroke-width=\"1.5\" points=\"" + pts +
         "\"/>\n";
    s += "<text x=\"" + num(W - mr - 4) + "\" y=\"" + num(mt + 14 + 14 * static_cast<double>(c)) +
         "\" text-anchor=\"end\" font-size=\"11\" fill=\"" + color + "\">" + escape(spec.y[c]) + "</text>\n";
  }
  s += "</svg>\n";
  return s;
}

}  // namespace nlslab
