#include "magsq/search.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "magsq/errors.hpp"

namespace magsq {

Maximum golden_section_maximize(const std::function<double(double)>& f,
                                double lo, double hi, double tolerance) {
  if (!(tolerance > 0.0)) throw DomainError("tolerance must be positive");
  if (!(hi >= lo)) throw DomainError("empty search interval");
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;

  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tolerance) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return fc >= fd ? Maximum{c, fc} : Maximum{d, fd};
}

Maximum scan_and_refine(const std::function<double(double)>& f,
                        std::span<const double> grid, double tolerance) {
  if (grid.empty()) throw DomainError("empty search grid");
  std::size_t best = grid.size();
  double best_value = -std::numeric_limits<double>::infinity();
  std::vector<double> values(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    values[i] = f(grid[i]);
    if (std::isfinite(values[i]) && values[i] > best_value) {
      best = i;
      best_value = values[i];
    }
  }
  if (best == grid.size()) throw DomainError("no feasible point on the grid");

  const auto safe = [&](double x) {
    const double v = f(x);
    return std::isfinite(v) ? v : -std::numeric_limits<double>::infinity();
  };
  const double lo = best > 0 ? grid[best - 1] : grid[best];
  const double hi = best + 1 < grid.size() ? grid[best + 1] : grid[best];
  Maximum refined{grid[best], best_value};
  if (hi > lo) {
    const auto m = golden_section_maximize(safe, lo, hi, tolerance);
    if (m.value > refined.value) refined = m;
  }
  return refined;
}

}  // namespace magsq
