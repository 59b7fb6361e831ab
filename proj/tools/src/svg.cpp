#include "dancer/cli/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace dancer::cli::svg {

namespace {

constexpr double kWidth = 640, kHeight = 420;
constexpr double kLeft = 70, kRight = 150, kTop = 40, kBottom = 50;
const char* const kColours[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string comment(const std::string& s) {
  std::string out = s;
  for (std::size_t pos; (pos = out.find("--")) != std::string::npos;) out.replace(pos, 2, "- -");
  return out;
}

std::string header(const PlotOptions& o) {
  std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  if (!o.provenance.empty()) out += "<!-- " + comment(o.provenance) + " -->\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(kWidth) + "\" height=\"" + num(kHeight) +
         "\" viewBox=\"0 0 " + num(kWidth) + " " + num(kHeight) + "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out += "<text x=\"" + num(kWidth / 2) + "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" + escape(o.title) +
         "</text>\n";
  return out;
}

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();

  void add(double v) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void settle() {
    if (!std::isfinite(lo)) lo = 0.0, hi = 1.0;
    if (hi - lo <= 1e-300 * std::max(1.0, std::abs(hi))) {
      const double pad = std::max(std::abs(hi) * 0.1, 1e-12);
      lo -= pad;
      hi += pad;
    }
  }
};

std::string axes(const Range& xr, const Range& yr, const PlotOptions& o) {
  const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
  std::string out = "<rect x=\"" + num(kLeft) + "\" y=\"" + num(kTop) + "\" width=\"" + num(pw) + "\" height=\"" +
                    num(ph) + "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    const double fx = k / 4.0;
    const double x = kLeft + fx * pw, y = kTop + ph - fx * ph;
    const double xv = xr.lo + fx * (xr.hi - xr.lo), yv = yr.lo + fx * (yr.hi - yr.lo);
    const std::string xs = o.log_x ? "1e" + num(xv) : num(xv);
    const std::string ys = o.log_y ? "1e" + num(yv) : num(yv);
    out += "<line x1=\"" + num(x) + "\" y1=\"" + num(kTop + ph) + "\" x2=\"" + num(x) + "\" y2=\"" +
           num(kTop + ph + 5) + "\" stroke=\"black\"/>\n";
    out += "<text x=\"" + num(x) + "\" y=\"" + num(kTop + ph + 18) + "\" text-anchor=\"middle\">" + xs + "</text>\n";
    out += "<line x1=\"" + num(kLeft - 5) + "\" y1=\"" + num(y) + "\" x2=\"" + num(kLeft) + "\" y2=\"" + num(y) +
           "\" stroke=\"black\"/>\n";
    out += "<text x=\"" + num(kLeft - 8) + "\" y=\"" + num(y + 4) + "\" text-anchor=\"end\">" + ys + "</text>\n";
  }
  out += "<text x=\"" + num(kLeft + pw / 2) + "\" y=\"" + num(kHeight - 10) + "\" text-anchor=\"middle\">" +
         escape(o.x_label) + "</text>\n";
  out += "<text x=\"16\" y=\"" + num(kTop + ph / 2) + "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " +
         num(kTop + ph / 2) + ")\">" + escape(o.y_label) + "</text>\n";
  return out;
}

/// Blue (negative) through white to red (positive).
std::string diverging(double t) {
  t = std::clamp(t, -1.0, 1.0);
  const int fade = static_cast<int>(std::lround(255 * (1.0 - std::abs(t))));
  char buf[8];
  if (t >= 0)
    std::snprintf(buf, sizeof buf, "#ff%02x%02x", fade, fade);
  else
    std::snprintf(buf, sizeof buf, "#%02x%02xff", fade, fade);
  return buf;
}

}  // namespace

std::string line_plot(const std::vector<Series>& series, const PlotOptions& o) {
  auto tx = [&](double v) { return o.log_x ? std::log10(std::abs(v)) : v; };
  auto ty = [&](double v) { return o.log_y ? std::log10(std::abs(v)) : v; };
  auto usable = [&](double x, double y) {
    return std::isfinite(x) && std::isfinite(y) && !(o.log_y && y == 0.0) && !(o.log_x && x == 0.0);
  };
  Range xr, yr;
  for (const auto& s : series)
    for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i)
      if (usable(s.x[i], s.y[i])) xr.add(tx(s.x[i])), yr.add(ty(s.y[i]));
  xr.settle();
  yr.settle();
  const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
  auto px = [&](double v) { return kLeft + (tx(v) - xr.lo) / (xr.hi - xr.lo) * pw; };
  auto py = [&](double v) { return kTop + ph - (ty(v) - yr.lo) / (yr.hi - yr.lo) * ph; };

  std::string out = header(o) + axes(xr, yr, o);
  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const char* colour = kColours[k % std::size(kColours)];
    std::string points;
    std::size_t count = 0;
    for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
      if (!usable(s.x[i], s.y[i])) continue;
      points += num(px(s.x[i])) + "," + num(py(s.y[i])) + " ";
      ++count;
    }
    if (count == 1) {
      const auto pos = points.find(',');
      out += "<circle cx=\"" + points.substr(0, pos) + "\" cy=\"" + points.substr(pos + 1, points.size() - pos - 2) +
             "\" r=\"3\" fill=\"" + colour + "\"/>\n";
    } else if (count > 1) {
      out += "<polyline fill=\"none\" stroke=\"" + std::string(colour) + "\" stroke-width=\"1.5\" points=\"" + points +
             "\"/>\n";
    }
    const double ly = kTop + 14 + 16 * static_cast<double>(k);
    out += "<line x1=\"" + num(kWidth - kRight + 10) + "\" y1=\"" + num(ly - 4) + "\" x2=\"" +
           num(kWidth - kRight + 28) + "\" y2=\"" + num(ly - 4) + "\" stroke=\"" + colour + "\" stroke-width=\"2\"/>\n";
    out += "<text x=\"" + num(kWidth - kRight + 32) + "\" y=\"" + num(ly) + "\">" + escape(s.name) + "</text>\n";
  }
  return out + "</svg>\n";
}

std::string heatmap(const Field2D& field, const PlotOptions& o, std::size_t max_cells) {
  const std::size_t rows = field.rows(), cols = field.cols();
  const std::size_t rs = std::max<std::size_t>(1, (rows + max_cells - 1) / max_cells);
  const std::size_t cs = std::max<std::size_t>(1, (cols + max_cells - 1) / max_cells);
  const std::size_t nr = (rows + rs - 1) / rs, nc = (cols + cs - 1) / cs;
  const double scale = field.max_abs();

  Range xr, yr;
  xr.add(0.0);
  xr.add(field.r_grid().r_max());
  yr.add(0.0);
  yr.add(field.s_grid().r_max());
  const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
  const double cw = pw / static_cast<double>(nc), ch = ph / static_cast<double>(nr);

  std::string out = header(o);
  for (std::size_t a = 0; a < nr; ++a) {
    for (std::size_t b = 0; b < nc; ++b) {
      const double v = field(a * rs, b * cs);
      const double x = kLeft + static_cast<double>(b) * cw;
      const double y = kTop + ph - static_cast<double>(a + 1) * ch;
      out += "<rect x=\"" + num(x) + "\" y=\"" + num(y) + "\" width=\"" + num(cw + 0.05) + "\" height=\"" +
             num(ch + 0.05) + "\" fill=\"" + diverging(scale > 0 ? v / scale : 0.0) + "\"/>\n";
    }
  }
  out += axes(xr, yr, o);
  for (int k = 0; k <= 10; ++k) {
    const double t = 1.0 - k / 5.0;
    const double y = kTop + k * ph / 10.0;
    out += "<rect x=\"" + num(kWidth - kRight + 20) + "\" y=\"" + num(y) + "\" width=\"16\" height=\"" +
           num(ph / 10.0 + 0.05) + "\" fill=\"" + diverging(t) + "\"/>\n";
    if (k % 5 == 0)
      out += "<text x=\"" + num(kWidth - kRight + 42) + "\" y=\"" + num(y + 8) + "\">" + num(t * scale) + "</text>\n";
  }
  return out + "</svg>\n";
}

}  // namespace dancer::cli::svg
