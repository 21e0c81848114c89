#include "magsq/ode.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "magsq/errors.hpp"

namespace magsq {

namespace {

// Dormand & Prince (1980) tableau.
constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0, c5 = 8.0 / 9.0;
constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0,
                 a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0,
                 a63 = 46732.0 / 5247.0, a64 = 49.0 / 176.0,
                 a65 = -5103.0 / 18656.0;
constexpr double a71 = 35.0 / 384.0, a73 = 500.0 / 1113.0, a74 = 125.0 / 192.0,
                 a75 = -2187.0 / 6784.0, a76 = 11.0 / 84.0;
// Difference between the fifth- and fourth-order weights.
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                 e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
// Continuous extension (Hairer, Nørsett & Wanner, DOPRI5 contd5).
constexpr double d1 = -12715105075.0 / 11282082432.0,
                 d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0,
                 d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0,
                 d7 = 69997945.0 / 29380423.0;

double scaled_norm(const Eigen::VectorXd& v, const Eigen::VectorXd& scale) {
  if (v.size() == 0) return 0.0;
  return std::sqrt((v.array() / scale.array()).square().mean());
}

double interpolate(const Eigen::Matrix<double, Eigen::Dynamic, 5>& rc,
                   Eigen::Index i, double s) {
  const double s1 = 1.0 - s;
  return rc(i, 0) +
         s * (rc(i, 1) + s1 * (rc(i, 2) + s * (rc(i, 3) + s1 * rc(i, 4))));
}

}  // namespace

double DenseTrajectory::t_begin() const {
  if (segments_.empty()) throw DomainError("empty trajectory");
  return segments_.front().t0;
}

double DenseTrajectory::t_end() const {
  if (segments_.empty()) throw DomainError("empty trajectory");
  return segments_.back().t0 + segments_.back().h;
}

Eigen::Index DenseTrajectory::dimension() const {
  return segments_.empty() ? 0 : segments_.front().coeffs.rows();
}

const DenseTrajectory::Segment& DenseTrajectory::locate(double t) const {
  if (segments_.empty()) throw DomainError("empty trajectory");
  const double span = t_end() - t_begin();
  const double slack = 1e-12 * span;
  if (t < t_begin() - slack || t > t_end() + slack) {
    std::ostringstream msg;
    msg << "time " << t << " outside trajectory [" << t_begin() << ", "
        << t_end() << "]";
    throw DomainError(msg.str());
  }
  auto it = std::upper_bound(
      segments_.begin(), segments_.end(), t,
      [](double value, const Segment& seg) { return value < seg.t0; });
  if (it != segments_.begin()) --it;
  return *it;
}

Eigen::VectorXd DenseTrajectory::operator()(double t) const {
  const Segment& seg = locate(t);
  const double s = std::clamp((t - seg.t0) / seg.h, 0.0, 1.0);
  Eigen::VectorXd y(seg.coeffs.rows());
  for (Eigen::Index i = 0; i < y.size(); ++i) y[i] = interpolate(seg.coeffs, i, s);
  return y;
}

double DenseTrajectory::component(double t, Eigen::Index index) const {
  const Segment& seg = locate(t);
  const double s = std::clamp((t - seg.t0) / seg.h, 0.0, 1.0);
  return interpolate(seg.coeffs, index, s);
}

std::vector<double> DenseTrajectory::step_times() const {
  std::vector<double> times;
  times.reserve(segments_.size() + 1);
  for (const auto& seg : segments_) times.push_back(seg.t0);
  if (!segments_.empty()) times.push_back(t_end());
  return times;
}

DormandPrince::DormandPrince(OdeRhs rhs, OdeOptions options)
    : rhs_(std::move(rhs)), options_(options) {
  if (!(options_.rtol > 0.0) || !(options_.atol >= 0.0)) {
    throw DomainError("integrator tolerances must be positive");
  }
}

double DormandPrince::initial_step(double t0, const Eigen::VectorXd& y0,
                                   const Eigen::VectorXd& f0,
                                   double span) const {
  if (options_.initial_step > 0.0) return std::min(options_.initial_step, span);

  const Eigen::VectorXd scale =
      (options_.atol + options_.rtol * y0.array().abs()).matrix();
  const double d0 = scaled_norm(y0, scale);
  const double d1 = scaled_norm(f0, scale);
  double h0 = (d0 < 1e-10 || d1 < 1e-10) ? 1e-6 * span : 0.01 * d0 / d1;
  h0 = std::min(h0, span);

  Eigen::VectorXd y1 = y0 + h0 * f0;
  Eigen::VectorXd f1(y0.size());
  rhs_(t0 + h0, y1, f1);
  const double d2 = scaled_norm(f1 - f0, scale) / h0;
  const double dmax = std::max(d1, d2);
  const double h1 = dmax <= 1e-15 ? std::max(1e-6 * span, h0 * 1e-3)
                                  : std::pow(0.01 / dmax, 0.2);
  return std::min({100.0 * h0, h1, span, options_.max_step});
}

std::vector<Eigen::VectorXd> DormandPrince::solve(
    const Eigen::VectorXd& y0, std::span<const double> t_grid,
    DenseTrajectory* record) const {
  accepted_ = rejected_ = 0;
  std::vector<Eigen::VectorXd> out;
  if (t_grid.empty()) return out;
  for (std::size_t i = 1; i < t_grid.size(); ++i) {
    if (!(t_grid[i] > t_grid[i - 1])) {
      throw DomainError("time grid must be strictly increasing");
    }
  }
  out.reserve(t_grid.size());
  out.push_back(y0);
  if (record) record->segments_.clear();
  if (t_grid.size() == 1) return out;

  const double t_final = t_grid.back();
  const double span = t_final - t_grid.front();
  const Eigen::Index n = y0.size();

  double t = t_grid.front();
  Eigen::VectorXd y = y0;
  Eigen::VectorXd k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n);
  Eigen::VectorXd ytmp(n), ynew(n), err(n);
  rhs_(t, y, k1);

  double h = initial_step(t, y, k1, span);
  std::size_t next = 1;
  bool last_rejected = false;

  while (next < t_grid.size()) {
    if (accepted_ + rejected_ >= options_.max_steps) {
      throw IntegrationError("maximum number of integration steps exceeded", t);
    }
    const double scale_t = std::max(std::abs(t), span);
    if (h < 1e-14 * scale_t) {
      std::ostringstream msg;
      msg << "step size underflow at t = " << t << " (h = " << h << ")";
      throw IntegrationError(msg.str(), t);
    }
    bool final_step = false;
    if (t + h >= t_final || t + 1.01 * h >= t_final) {
      h = t_final - t;
      final_step = true;
    }

    ytmp = y + h * a21 * k1;
    rhs_(t + c2 * h, ytmp, k2);
    ytmp = y + h * (a31 * k1 + a32 * k2);
    rhs_(t + c3 * h, ytmp, k3);
    ytmp = y + h * (a41 * k1 + a42 * k2 + a43 * k3);
    rhs_(t + c4 * h, ytmp, k4);
    ytmp = y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
    rhs_(t + c5 * h, ytmp, k5);
    ytmp = y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
    rhs_(t + h, ytmp, k6);
    ynew = y + h * (a71 * k1 + a73 * k3 + a74 * k4 + a75 * k5 + a76 * k6);
    rhs_(t + h, ynew, k7);
    err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

    const Eigen::VectorXd scale =
        (options_.atol +
         options_.rtol * y.array().abs().max(ynew.array().abs()))
            .matrix();
    const double err_norm = scaled_norm(err, scale);
    if (!std::isfinite(err_norm)) {
      ++rejected_;
      h *= 0.2;
      last_rejected = true;
      continue;
    }

    if (err_norm > 1.0) {
      ++rejected_;
      h *= std::max(0.2, 0.9 * std::pow(err_norm, -0.2));
      last_rejected = true;
      continue;
    }

    // Accepted.
    ++accepted_;
    Eigen::Matrix<double, Eigen::Dynamic, 5> rc(n, 5);
    const Eigen::VectorXd ydiff = ynew - y;
    const Eigen::VectorXd bspl = h * k1 - ydiff;
    rc.col(0) = y;
    rc.col(1) = ydiff;
    rc.col(2) = bspl;
    rc.col(3) = ydiff - h * k7 - bspl;
    rc.col(4) = h * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * k7);

    const double t_new = final_step ? t_final : t + h;
    while (next < t_grid.size() && t_grid[next] <= t_new) {
      if (t_grid[next] == t_new) {
        out.push_back(ynew);
      } else {
        const double s = (t_grid[next] - t) / h;
        Eigen::VectorXd yi(n);
        for (Eigen::Index i = 0; i < n; ++i) yi[i] = interpolate(rc, i, s);
        if (projection_) projection_(yi);
        out.push_back(std::move(yi));
      }
      ++next;
    }
    if (record) record->segments_.push_back({t, h, std::move(rc)});

    t = t_new;
    y = ynew;
    if (projection_) projection_(y);
    if (final_step) {
      if (projection_ && next == t_grid.size()) out.back() = y;
      break;
    }
    k1 = k7;
    if (projection_) rhs_(t, y, k1);

    double factor = std::min(10.0, std::max(0.2, 0.9 * std::pow(err_norm, -0.2)));
    if (last_rejected) factor = std::min(factor, 1.0);
    h = std::min(h * factor, options_.max_step);
    last_rejected = false;
  }
  return out;
}

}  // namespace magsq
