#pragma once

#include <functional>
#include <span>

namespace magsq {

struct Maximum {
  double argument = 0.0;
  double value = 0.0;
};

/// Golden-section search for the maximum of a unimodal `f` on [lo, hi].
/// Stops once the bracket is narrower than `tolerance`.
Maximum golden_section_maximize(const std::function<double(double)>& f,
                                double lo, double hi, double tolerance);

/// Scan `grid`, then refine around the best grid point by golden section.
/// Non-finite objective values are treated as infeasible. Throws DomainError
/// when no grid point is feasible.
Maximum scan_and_refine(const std::function<double(double)>& f,
                        std::span<const double> grid, double tolerance);

}  // namespace magsq
