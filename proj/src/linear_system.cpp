#include "magsq/linear_system.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "magsq/errors.hpp"
#include "magsq/search.hpp"

namespace magsq {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void require_rate(double value, const char* name) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw DomainError(std::string(name) + " must be positive");
  }
}

}  // namespace

void LinearOmmParams::validate() const {
  require_rate(wavelength, "wavelength");
  require_rate(omega_b, "omega_b");
  require_rate(omega_m, "omega_m");
  require_rate(kappa_a, "kappa_a");
  require_rate(kappa_m, "kappa_m");
  require_rate(gamma_b, "gamma_b");
  require_rate(g0, "g0");
  require_rate(g_m, "g_m");
  if (!(temperature >= 0.0)) throw DomainError("temperature must be >= 0");
  if (std::abs(omega_m - omega_b) > 1e-9 * omega_b) {
    throw ConfigError(
        "linear model requires a magnon mode resonant with the mechanical mode "
        "(omega_m == omega_b)");
  }
}

EffectiveCouplings LinearOmmParams::couplings() const {
  return effective_couplings(drive, g0, kappa_a, omega_b);
}

LinearOmmParams LinearOmmParams::with_ratio(double ratio) const {
  LinearOmmParams out = *this;
  const auto* direct = std::get_if<DirectCouplings>(&drive);
  out.drive = DirectCouplings{direct ? direct->g_minus : couplings().minus, ratio};
  return out;
}

namespace linear {

Matrix drift_matrix(const LinearOmmParams& p, EffectiveCouplings g) {
  Matrix a = Matrix::Zero(6, 6);
  a(kXa, kXa) = a(kYa, kYa) = -p.kappa_a / 2.0;
  a(kQ, kQ) = a(kP, kP) = -p.gamma_b / 2.0;
  a(kXm, kXm) = a(kYm, kYm) = -p.kappa_m / 2.0;

  a(kXa, kP) = g.plus - g.minus;
  a(kYa, kQ) = g.plus + g.minus;
  a(kQ, kYa) = g.plus - g.minus;
  a(kP, kXa) = g.plus + g.minus;

  a(kQ, kYm) = p.g_m;
  a(kP, kXm) = -p.g_m;
  a(kXm, kP) = p.g_m;
  a(kYm, kQ) = -p.g_m;
  return a;
}

Matrix diffusion_matrix(const LinearOmmParams& p) {
  const double n_b = thermal_occupancy(p.omega_b, p.temperature);
  const double n_m = thermal_occupancy(p.omega_m, p.temperature);
  Vector diag(6);
  diag << p.kappa_a / 2.0, p.kappa_a / 2.0, p.gamma_b * (n_b + 0.5),
      p.gamma_b * (n_b + 0.5), p.kappa_m * (n_m + 0.5), p.kappa_m * (n_m + 0.5);
  return diag.asDiagonal();
}

}  // namespace linear

MomentModel build_model(const LinearOmmParams& params) {
  params.validate();
  const auto g = params.couplings();
  if (g.minus > 0.0 && !(g.plus < g.minus)) {
    std::ostringstream msg;
    msg << "two-tone drive requires G+ < G- for stability (G+/G- = "
        << g.plus / g.minus << ")";
    throw StabilityError(msg.str(), kNaN);
  }
  if (g.minus == 0.0 && g.plus > 0.0) {
    throw StabilityError("blue-detuned drive without a red tone is unstable", kNaN);
  }

  MomentModel model(linear::drift_matrix(params, g),
                    linear::diffusion_matrix(params));
  const double limit = params.omega_b / 10.0;
  const std::pair<const char*, double> rates[] = {
      {"kappa_a", params.kappa_a}, {"kappa_m", params.kappa_m},
      {"gamma_b", params.gamma_b}, {"G+", g.plus}, {"G-", g.minus}};
  for (const auto& [name, value] : rates) {
    if (value > limit) {
      model.warnings.push_back(std::string("RWA validity: ") + name +
                               " exceeds omega_b/10");
    }
  }
  return model;
}

SteadyReport steady_state(const LinearOmmParams& params) {
  const MomentModel model = build_model(params);
  const Matrix& a = model.constant_drift();

  SteadyReport report;
  report.couplings = params.couplings();
  report.margin = hurwitz_margin(a);
  report.state = GaussianState(Vector::Zero(6),
                               solve_lyapunov(a, model.diffusion()));
  report.bogoliubov = report.couplings.minus > 0.0
                          ? bogoliubov_params(report.couplings.plus,
                                              report.couplings.minus)
                          : BogoliubovParams{};
  report.s_b = squeezing_db(report.state.cov(linear::kQ, linear::kQ));
  report.s_m = squeezing_db(report.state.cov(linear::kYm, linear::kYm));
  report.n_b = bogoliubov_occupancy(
      report.state.cov.block<2, 2>(linear::kQ, linear::kQ), report.bogoliubov.r);
  return report;
}

SqueezingTrace squeezing_vs_ratio(const LinearOmmParams& params,
                                  std::span<const double> ratios) {
  SqueezingTrace trace;
  trace.axis_name = "G+/G-";
  trace.axis_unit = "";
  trace.quadratures = {"q", "Y_m"};
  trace.variances.resize(2);
  trace.squeezing.resize(2);
  trace.extra = {{"N_B", "", {}}, {"margin", "rad/s", {}}};

  for (const double ratio : ratios) {
    if (!(ratio >= 0.0)) throw DomainError("ratio grid values must be >= 0");
    trace.axis.push_back(ratio);
    bool ok = ratio < 1.0;
    SteadyReport r;
    if (ok) {
      try {
        r = steady_state(params.with_ratio(ratio));
      } catch (const StabilityError&) {
        ok = false;
      }
    }
    trace.stable.push_back(ok);
    trace.variances[0].push_back(ok ? r.state.cov(linear::kQ, linear::kQ) : kNaN);
    trace.variances[1].push_back(ok ? r.state.cov(linear::kYm, linear::kYm) : kNaN);
    trace.squeezing[0].push_back(ok ? r.s_b : kNaN);
    trace.squeezing[1].push_back(ok ? r.s_m : kNaN);
    trace.extra[0].values.push_back(ok ? r.n_b : kNaN);
    trace.extra[1].values.push_back(ok ? r.margin : kNaN);
  }
  return trace;
}

RatioOptimum optimal_ratio(const LinearOmmParams& params, double tolerance) {
  if (!(tolerance > 0.0)) throw DomainError("tolerance must be positive");
  std::vector<double> grid;
  for (int i = 0; i <= 99; ++i) grid.push_back(0.01 * i);

  const auto objective = [&](double ratio) {
    if (!(ratio >= 0.0 && ratio < 1.0)) return kNaN;
    try {
      return steady_state(params.with_ratio(ratio)).s_m;
    } catch (const StabilityError&) {
      return kNaN;
    }
  };
  try {
    const auto best = scan_and_refine(objective, grid, tolerance);
    return {best.argument, best.value};
  } catch (const DomainError&) {
    throw StabilityError("no stable ratio found on [0, 0.99]", kNaN);
  }
}

}  // namespace magsq
