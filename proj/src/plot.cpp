#include "magsq/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

namespace magsq {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 440.0;
constexpr double kLeft = 78.0;
constexpr double kRight = 24.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 58.0;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick_label(double v) {
  if (std::abs(v) < 1e-12) return "0";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

std::string escape(const std::string& text) {
  std::string out;
  for (const char c : text) {
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

const char* dash(LineStyle style) {
  switch (style) {
    case LineStyle::dashed: return " stroke-dasharray=\"8,5\"";
    case LineStyle::dash_dot: return " stroke-dasharray=\"9,4,2,4\"";
    default: return "";
  }
}

std::pair<double, double> padded(double lo, double hi) {
  if (!std::isfinite(lo) || !std::isfinite(hi)) return {0.0, 1.0};
  if (hi - lo < 1e-12 * std::max(1.0, std::abs(hi))) {
    const double d = std::max(1e-3, std::abs(hi) * 0.1);
    return {lo - d, hi + d};
  }
  const double d = 0.05 * (hi - lo);
  return {lo - d, hi + d};
}

struct Frame {
  double x0, x1, y0, y1;
  double px(double x) const { return kLeft + (x - x0) / (x1 - x0) * (kWidth - kLeft - kRight); }
  double py(double y) const {
    return kHeight - kBottom - (y - y0) / (y1 - y0) * (kHeight - kTop - kBottom);
  }
};

void open_svg(std::string& s, const std::string& title) {
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(kWidth) +
       "\" height=\"" + num(kHeight) + "\" viewBox=\"0 0 " + num(kWidth) + " " +
       num(kHeight) + "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s += "<text x=\"" + num(kWidth / 2) + "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" +
       escape(title) + "</text>\n";
}

void draw_axes(std::string& s, const Frame& f, const std::string& x_label,
               const std::string& y_label) {
  const double left = kLeft, right = kWidth - kRight;
  const double top = kTop, bottom = kHeight - kBottom;
  s += "<rect x=\"" + num(left) + "\" y=\"" + num(top) + "\" width=\"" +
       num(right - left) + "\" height=\"" + num(bottom - top) +
       "\" fill=\"none\" stroke=\"black\"/>\n";
  for (const double t : nice_ticks(f.x0, f.x1)) {
    if (t < f.x0 || t > f.x1) continue;
    const double x = f.px(t);
    s += "<line x1=\"" + num(x) + "\" y1=\"" + num(bottom) + "\" x2=\"" + num(x) +
         "\" y2=\"" + num(bottom - 5) + "\" stroke=\"black\"/>\n";
    s += "<text x=\"" + num(x) + "\" y=\"" + num(bottom + 16) +
         "\" text-anchor=\"middle\">" + tick_label(t) + "</text>\n";
  }
  for (const double t : nice_ticks(f.y0, f.y1)) {
    if (t < f.y0 || t > f.y1) continue;
    const double y = f.py(t);
    s += "<line x1=\"" + num(left) + "\" y1=\"" + num(y) + "\" x2=\"" + num(left + 5) +
         "\" y2=\"" + num(y) + "\" stroke=\"black\"/>\n";
    s += "<text x=\"" + num(left - 6) + "\" y=\"" + num(y + 4) +
         "\" text-anchor=\"end\">" + tick_label(t) + "</text>\n";
  }
  s += "<text x=\"" + num((left + right) / 2) + "\" y=\"" + num(kHeight - 16) +
       "\" text-anchor=\"middle\">" + escape(x_label) + "</text>\n";
  s += "<text x=\"18\" y=\"" + num((top + bottom) / 2) +
       "\" text-anchor=\"middle\" transform=\"rotate(-90 18 " + num((top + bottom) / 2) +
       ")\">" + escape(y_label) + "</text>\n";
}

}  // namespace

std::vector<double> nice_ticks(double lo, double hi, int target) {
  std::vector<double> ticks;
  if (!(hi > lo) || !std::isfinite(lo) || !std::isfinite(hi) || target < 1) return ticks;
  const double raw = (hi - lo) / target;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (const double m : {1.0, 2.0, 2.5, 5.0, 10.0}) {
    if (m * mag >= raw) {
      step = m * mag;
      break;
    }
  }
  const long first = static_cast<long>(std::ceil(lo / step - 1e-9));
  const long last = static_cast<long>(std::floor(hi / step + 1e-9));
  for (long k = first; k <= last; ++k) ticks.push_back(k * step);
  return ticks;
}

std::string render_svg(const LinePlot& plot) {
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  for (const auto& series : plot.series) {
    const std::size_t n = std::min(series.x.size(), series.y.size());
    for (std::size_t i = 0; i < n; ++i) {
      if (!std::isfinite(series.x[i]) || !std::isfinite(series.y[i])) continue;
      xmin = std::min(xmin, series.x[i]);
      xmax = std::max(xmax, series.x[i]);
      ymin = std::min(ymin, series.y[i]);
      ymax = std::max(ymax, series.y[i]);
    }
  }
  if (plot.y_reference && std::isfinite(ymin)) {
    ymin = std::min(ymin, *plot.y_reference);
    ymax = std::max(ymax, *plot.y_reference);
  }
  Frame f{};
  std::tie(f.x0, f.x1) = plot.x_range ? *plot.x_range
                                      : (std::isfinite(xmin) ? std::pair{xmin, xmax}
                                                             : std::pair{0.0, 1.0});
  if (!(f.x1 > f.x0)) std::tie(f.x0, f.x1) = padded(f.x0, f.x1);
  std::tie(f.y0, f.y1) = plot.y_range ? *plot.y_range : padded(ymin, ymax);

  std::string s;
  open_svg(s, plot.title);
  draw_axes(s, f, plot.x_label, plot.y_label);

  s += "<clipPath id=\"plot-area\"><rect x=\"" + num(kLeft) + "\" y=\"" + num(kTop) +
       "\" width=\"" + num(kWidth - kLeft - kRight) + "\" height=\"" +
       num(kHeight - kTop - kBottom) + "\"/></clipPath>\n";
  if (plot.y_reference) {
    const double y = f.py(*plot.y_reference);
    s += "<line x1=\"" + num(kLeft) + "\" y1=\"" + num(y) + "\" x2=\"" +
         num(kWidth - kRight) + "\" y2=\"" + num(y) +
         "\" stroke=\"#888888\" stroke-dasharray=\"2,3\"/>\n";
  }
  for (const auto& series : plot.series) {
    const std::size_t n = std::min(series.x.size(), series.y.size());
    std::string d;
    bool pen = false;
    for (std::size_t i = 0; i < n; ++i) {
      if (!std::isfinite(series.x[i]) || !std::isfinite(series.y[i])) {
        pen = false;
        continue;
      }
      d += (pen ? " L" : " M") + num(f.px(series.x[i])) + "," + num(f.py(series.y[i]));
      pen = true;
    }
    if (d.empty()) continue;
    s += "<path clip-path=\"url(#plot-area)\" fill=\"none\" stroke=\"" + series.color +
         "\" stroke-width=\"1.8\"" + dash(series.style) + " d=\"" + d.substr(1) + "\"/>\n";
  }

  double ly = kTop + 16;
  for (const auto& series : plot.series) {
    if (series.label.empty()) continue;
    const double lx = kWidth - kRight - 170;
    s += "<line x1=\"" + num(lx) + "\" y1=\"" + num(ly - 4) + "\" x2=\"" + num(lx + 30) +
         "\" y2=\"" + num(ly - 4) + "\" stroke=\"" + series.color +
         "\" stroke-width=\"1.8\"" + dash(series.style) + "/>\n";
    s += "<text x=\"" + num(lx + 36) + "\" y=\"" + num(ly) + "\">" + escape(series.label) +
         "</text>\n";
    ly += 16;
  }
  s += "</svg>\n";
  return s;
}

std::string render_wigner_svg(const Eigen::Matrix2d& cov, const Eigen::Vector2d& mean,
                              double q_extent, double p_extent, const std::string& title,
                              const std::string& x_label, const std::string& y_label) {
  Frame f{-q_extent, q_extent, -p_extent, p_extent};
  std::string s;
  open_svg(s, title);
  draw_axes(s, f, x_label, y_label);

  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig(cov);
  const Eigen::Vector2d lambda = eig.eigenvalues();
  const Eigen::Matrix2d axes = eig.eigenvectors();
  const double angle = std::atan2(axes(1, 1), axes(0, 1));

  s += "<g clip-path=\"url(#wigner-area)\">\n";
  s += "<clipPath id=\"wigner-area\"><rect x=\"" + num(kLeft) + "\" y=\"" + num(kTop) +
       "\" width=\"" + num(kWidth - kLeft - kRight) + "\" height=\"" +
       num(kHeight - kTop - kBottom) + "\"/></clipPath>\n";
  for (int k = 1; k <= 9; ++k) {
    const double level = 0.1 * k;
    // Contour dᵀV⁻¹d = −2 ln(level).
    const double c = -2.0 * std::log(level);
    std::string d;
    constexpr int kPoints = 96;
    for (int i = 0; i <= kPoints; ++i) {
      const double phi = 2.0 * std::numbers::pi * i / kPoints;
      const double u = std::sqrt(c * lambda(1)) * std::cos(phi);
      const double v = std::sqrt(c * lambda(0)) * std::sin(phi);
      const double q = mean(0) + u * std::cos(angle) - v * std::sin(angle);
      const double p = mean(1) + u * std::sin(angle) + v * std::cos(angle);
      d += (i == 0 ? "M" : " L") + num(f.px(q)) + "," + num(f.py(p));
    }
    const int shade = static_cast<int>(std::lround(230 - 200 * level));
    char color[16];
    std::snprintf(color, sizeof color, "#%02x%02xff", shade, shade);
    s += "<path fill=\"" + std::string(color) + "\" fill-opacity=\"0.35\" stroke=\"#1f3f9f\" "
         "stroke-width=\"0.8\" d=\"" + d + " Z\"/>\n";
  }
  s += "</g>\n";
  s += "</svg>\n";
  return s;
}

}  // namespace magsq
