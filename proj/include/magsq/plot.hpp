#pragma once

// Minimal static SVG rendering for line plots and Gaussian Wigner contours.
// Output depends only on the input values, so identical data gives identical
// bytes.

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace magsq {

enum class LineStyle { solid, dashed, dash_dot };

struct LineSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;  // non-finite values break the line
  LineStyle style = LineStyle::solid;
  std::string color = "#1f77b4";
};

struct LinePlot {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<LineSeries> series;
  std::optional<std::pair<double, double>> x_range;
  std::optional<std::pair<double, double>> y_range;
  /// Draw a horizontal reference line (e.g. the vacuum level).
  std::optional<double> y_reference;
};

std::string render_svg(const LinePlot& plot);

/// Contours of a single-mode Gaussian Wigner function at W/W_max = 0.1 … 0.9,
/// drawn over [−q_extent, q_extent] × [−p_extent, p_extent].
std::string render_wigner_svg(const Eigen::Matrix2d& cov, const Eigen::Vector2d& mean,
                              double q_extent, double p_extent, const std::string& title,
                              const std::string& x_label = "q",
                              const std::string& y_label = "p");

/// Rounded tick positions covering [lo, hi] with about `target` intervals.
std::vector<double> nice_ticks(double lo, double hi, int target = 5);

}  // namespace magsq
