#pragma once

// Embedded Runge-Kutta 5(4) integrator (Dormand-Prince) with a fourth-order
// continuous extension, used by every time-dependent computation.

#include <Eigen/Dense>
#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <vector>

namespace magsq {

struct OdeOptions {
  double rtol = 1e-9;
  double atol = 1e-12;
  double initial_step = 0.0;  // 0 selects a step automatically
  double max_step = std::numeric_limits<double>::infinity();
  std::size_t max_steps = 20'000'000;
};

using OdeRhs =
    std::function<void(double t, const Eigen::VectorXd& y, Eigen::VectorXd& dydt)>;

/// Piecewise polynomial interpolant assembled from accepted steps.
class DenseTrajectory {
 public:
  bool empty() const noexcept { return segments_.empty(); }
  std::size_t step_count() const noexcept { return segments_.size(); }
  double t_begin() const;
  double t_end() const;
  Eigen::Index dimension() const;

  /// State at `t`; throws DomainError outside [t_begin, t_end].
  Eigen::VectorXd operator()(double t) const;
  /// Single component of the state at `t`.
  double component(double t, Eigen::Index index) const;

  /// Start times of each accepted step followed by the final time.
  std::vector<double> step_times() const;

 private:
  friend class DormandPrince;

  struct Segment {
    double t0;
    double h;
    Eigen::Matrix<double, Eigen::Dynamic, 5> coeffs;
  };

  const Segment& locate(double t) const;

  std::vector<Segment> segments_;
};

class DormandPrince {
 public:
  explicit DormandPrince(OdeRhs rhs, OdeOptions options = {});

  /// Applied to the state after every accepted step (e.g. re-symmetrizing a
  /// covariance matrix).
  void set_projection(std::function<void(Eigen::VectorXd&)> projection) {
    projection_ = std::move(projection);
  }

  /// Integrate from `t_grid.front()` to `t_grid.back()` and return the state
  /// at every grid point. `t_grid` must be strictly increasing. When `record`
  /// is non-null the full dense trajectory is stored there.
  std::vector<Eigen::VectorXd> solve(const Eigen::VectorXd& y0,
                                     std::span<const double> t_grid,
                                     DenseTrajectory* record = nullptr) const;

  /// Number of accepted/rejected steps of the most recent solve.
  std::size_t accepted_steps() const noexcept { return accepted_; }
  std::size_t rejected_steps() const noexcept { return rejected_; }

 private:
  double initial_step(double t0, const Eigen::VectorXd& y0,
                      const Eigen::VectorXd& f0, double span) const;

  OdeRhs rhs_;
  OdeOptions options_;
  std::function<void(Eigen::VectorXd&)> projection_;
  mutable std::size_t accepted_ = 0;
  mutable std::size_t rejected_ = 0;
};

}  // namespace magsq
