#include "magsq/dispersive_system.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "magsq/errors.hpp"

namespace magsq {

namespace {

constexpr Complex I{0.0, 1.0};
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void require_rate(double value, const char* name) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw DomainError(std::string(name) + " must be positive");
  }
}

std::vector<double> linspace(double a, double b, std::size_t n) {
  std::vector<double> out(n);
  if (n == 1) {
    out[0] = a;
    return out;
  }
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  out.back() = b;
  return out;
}

}  // namespace

void DispersiveOmmParams::validate() const {
  require_rate(wavelength, "wavelength");
  require_rate(omega_b, "omega_b");
  require_rate(omega_m, "omega_m");
  require_rate(kappa_a, "kappa_a");
  require_rate(kappa_m, "kappa_m");
  require_rate(gamma_b, "gamma_b");
  require_rate(g0, "g0");
  if (!(g_m >= 0.0)) throw DomainError("g_m must be non-negative");
  if (!std::isfinite(delta_m)) throw DomainError("delta_m must be finite");
  if (!(temperature >= 0.0)) throw DomainError("temperature must be >= 0");
  rabi_frequency(magnon_drive);
}

EffectiveCouplings DispersiveOmmParams::couplings() const {
  return effective_couplings(drive, g0, kappa_a, omega_b);
}

DispersiveOmmParams DispersiveOmmParams::with_ratio(double ratio) const {
  DispersiveOmmParams out = *this;
  const auto* direct = std::get_if<DirectCouplings>(&drive);
  out.drive = DirectCouplings{direct ? direct->g_minus : couplings().minus, ratio};
  return out;
}

DispersiveOmmParams DispersiveOmmParams::with_rabi(Complex rabi) const {
  DispersiveOmmParams out = *this;
  out.magnon_drive = MagnonDriveSpec{rabi, std::nullopt};
  return out;
}

std::vector<std::string> DispersiveOmmParams::warnings() const {
  std::vector<std::string> out;
  if (std::abs(delta_m - omega_b) > 1e-6 * omega_b) {
    out.emplace_back("magnon drive detuning delta_m differs from omega_b; "
                     "the beam-splitter interaction is off resonance");
  }
  return out;
}

double ProtocolSchedule::interlude_for(const DispersiveOmmParams& params) const {
  return interlude.value_or(4.0 * std::numbers::pi / params.kappa_a);
}

std::vector<std::string> ProtocolSchedule::warnings(
    const DispersiveOmmParams& params) const {
  std::vector<std::string> out;
  const double tau = interlude_for(params);
  if (params.kappa_a * tau < 4.0 * std::numbers::pi * (1.0 - 1e-12)) {
    out.emplace_back("interlude shorter than 4pi/kappa_a; cavity photons may not "
                     "have decayed");
  }
  if (params.gamma_b * tau > 0.1) {
    out.emplace_back("interlude not short compared with 1/gamma_b; the "
                     "mechanical state degrades before step 2");
  }
  return out;
}

void ProtocolSchedule::validate() const {
  if (!std::isfinite(switch_off_phase)) {
    throw DomainError("switch-off phase must be finite");
  }
  if (interlude && !(*interlude >= 0.0)) {
    throw DomainError("interlude must be non-negative");
  }
  if (horizon && !(*horizon > 0.0)) throw DomainError("horizon must be positive");
  if (sample_count < 2) throw DomainError("sample_count must be at least 2");
}

Complex Step1Averages::mean_a(double omega_b, double t) const {
  return a_plus * std::exp(-I * omega_b * t) + a_minus * std::exp(I * omega_b * t);
}

Complex Step1Averages::mean_b(double omega_b, double t) const {
  return b_plus * std::exp(-2.0 * I * omega_b * t) + b_zero +
         b_minus * std::exp(2.0 * I * omega_b * t);
}

Step1Averages step1_averages(const DispersiveOmmParams& p) {
  p.validate();
  const auto a = sideband_amplitudes(p.drive, p.g0, p.kappa_a, p.omega_b);
  Step1Averages s;
  s.a_plus = a.plus;
  s.a_minus = a.minus;
  const double half_gamma = p.gamma_b / 2.0;
  s.b_plus = I * p.g0 * std::conj(a.minus) * a.plus / Complex(half_gamma, -p.omega_b);
  s.b_zero = I * p.g0 * (std::norm(a.minus) + std::norm(a.plus)) /
             Complex(half_gamma, p.omega_b);
  s.b_minus = I * p.g0 * std::conj(a.plus) * a.minus /
              Complex(half_gamma, 3.0 * p.omega_b);
  return s;
}

namespace dispersive {

Matrix step1_drift(const DispersiveOmmParams& p, EffectiveCouplings g) {
  Matrix a = Matrix::Zero(4, 4);
  a(0, 0) = a(1, 1) = -p.kappa_a / 2.0;
  a(2, 2) = a(3, 3) = -p.gamma_b / 2.0;
  a(0, 3) = g.plus - g.minus;
  a(1, 2) = g.plus + g.minus;
  a(2, 1) = g.plus - g.minus;
  a(3, 0) = g.plus + g.minus;
  return a;
}

Matrix step1_diffusion(const DispersiveOmmParams& p) {
  const double n_b = thermal_occupancy(p.omega_b, p.temperature);
  Vector diag(4);
  diag << p.kappa_a / 2.0, p.kappa_a / 2.0, p.gamma_b * (n_b + 0.5),
      p.gamma_b * (n_b + 0.5);
  return diag.asDiagonal();
}

Matrix step2_diffusion(const DispersiveOmmParams& p) {
  const double n_m = thermal_occupancy(p.omega_m, p.temperature);
  const double n_b = thermal_occupancy(p.omega_b, p.temperature);
  Vector diag(4);
  diag << p.kappa_m * (n_m + 0.5), p.kappa_m * (n_m + 0.5),
      p.gamma_b * (n_b + 0.5), p.gamma_b * (n_b + 0.5);
  return diag.asDiagonal();
}

Matrix step2_drift_rwa(double kappa_m, double gamma_b, Complex coupling) {
  const double re = coupling.real();
  const double im = coupling.imag();
  Matrix a(4, 4);
  // clang-format off
  a << -kappa_m / 2.0, 0.0,            im,             re,
       0.0,            -kappa_m / 2.0, -re,            im,
       -im,            re,             -gamma_b / 2.0, 0.0,
       -re,            -im,            0.0,            -gamma_b / 2.0;
  // clang-format on
  return a;
}

Matrix step2_drift_full(double kappa_m, double gamma_b, double omega_b,
                        Complex coupling, double t) {
  const Complex rotating = coupling * std::exp(2.0 * I * omega_b * t);
  Eigen::Matrix2cd alpha, beta;
  alpha << -kappa_m / 2.0, -I * coupling,  //
      -I * std::conj(coupling), -gamma_b / 2.0;
  beta << 0.0, -I * rotating,  //
      -I * rotating, 0.0;
  return quadrature_drift(alpha, beta);
}

}  // namespace dispersive

Step1Report step1_steady(const DispersiveOmmParams& params) {
  params.validate();
  const auto g = params.couplings();
  if (!(g.plus < g.minus)) {
    std::ostringstream msg;
    msg << "step-1 drive requires G+ < G- for stability (G+/G- = "
        << g.plus / g.minus << ")";
    throw StabilityError(msg.str(), kNaN);
  }
  const Matrix a = dispersive::step1_drift(params, g);
  Step1Report r;
  r.couplings = g;
  r.margin = hurwitz_margin(a);
  r.state = GaussianState(Vector::Zero(4),
                          solve_lyapunov(a, dispersive::step1_diffusion(params)));
  r.bogoliubov = bogoliubov_params(g.plus, g.minus);
  r.s_b = squeezing_db(r.state.cov(2, 2));
  r.n_b = bogoliubov_occupancy(r.state.cov.block<2, 2>(2, 2), r.bogoliubov.r);
  return r;
}

SqueezingTrace step1_vs_ratio(const DispersiveOmmParams& params,
                              std::span<const double> ratios) {
  SqueezingTrace trace;
  trace.axis_name = "G+/G-";
  trace.quadratures = {"q"};
  trace.variances.resize(1);
  trace.squeezing.resize(1);
  trace.extra = {{"N_B", "", {}}, {"margin", "rad/s", {}}};
  for (const double ratio : ratios) {
    if (!(ratio >= 0.0)) throw DomainError("ratio grid values must be >= 0");
    trace.axis.push_back(ratio);
    bool ok = ratio < 1.0;
    Step1Report r;
    if (ok) {
      try {
        r = step1_steady(params.with_ratio(ratio));
      } catch (const StabilityError&) {
        ok = false;
      }
    }
    trace.stable.push_back(ok);
    trace.variances[0].push_back(ok ? r.state.cov(2, 2) : kNaN);
    trace.squeezing[0].push_back(ok ? r.s_b : kNaN);
    trace.extra[0].values.push_back(ok ? r.n_b : kNaN);
    trace.extra[1].values.push_back(ok ? r.margin : kNaN);
  }
  return trace;
}

InterludeResult interlude_evolve(const DispersiveOmmParams& p,
                                 const GaussianState& step1_state,
                                 const Step1Averages& averages,
                                 const ProtocolSchedule& schedule,
                                 const OdeOptions& options) {
  schedule.validate();
  if (step1_state.cov.rows() != 4) {
    throw DimensionError("interlude expects a two-mode optomechanical state");
  }
  InterludeResult out;
  out.duration = schedule.interlude_for(p);
  const double t_off = schedule.switch_off_phase / p.omega_b;
  out.mean_a_start = averages.mean_a(p.omega_b, t_off);
  out.mean_b_start = averages.mean_b(p.omega_b, t_off);

  if (out.duration == 0.0) {
    out.optomechanics = step1_state;
    out.mechanics = step1_state.marginal(1);
    out.mean_a_end = out.mean_a_start;
    out.mean_b_end = out.mean_b_start;
    return out;
  }

  // Undriven classical equations: cavity in the ω_a frame, mechanics in the lab.
  const double half_kappa = p.kappa_a / 2.0;
  const double half_gamma = p.gamma_b / 2.0;
  OdeRhs rhs = [&](double, const Vector& y, Vector& dy) {
    const Complex a(y[0], y[1]);
    const Complex b(y[2], y[3]);
    const Complex da = -half_kappa * a + I * p.g0 * a * (2.0 * b.real());
    const Complex db = -I * p.omega_b * b - half_gamma * b + I * p.g0 * std::norm(a);
    dy << da.real(), da.imag(), db.real(), db.imag();
  };
  Vector y0(4);
  y0 << out.mean_a_start.real(), out.mean_a_start.imag(), out.mean_b_start.real(),
      out.mean_b_start.imag();
  const std::vector<double> grid{0.0, out.duration};
  const auto means = DormandPrince(rhs, options).solve(y0, grid);
  out.mean_a_end = Complex(means.back()[0], means.back()[1]);
  out.mean_b_end = Complex(means.back()[2], means.back()[3]);

  Vector decay(4);
  decay << -half_kappa, -half_kappa, -half_gamma, -half_gamma;
  const MomentModel free_model(Matrix(decay.asDiagonal()),
                               dispersive::step1_diffusion(p));
  out.optomechanics = integrate_moments(free_model, step1_state, grid, options).back();
  out.mechanics = out.optomechanics.marginal(1);
  return out;
}

MeanFieldTrajectory::MeanFieldTrajectory(
    std::shared_ptr<const DenseTrajectory> dense, double g_m, double delta_m)
    : dense_(std::move(dense)), g_m_(g_m), delta_m_(delta_m) {
  if (!dense_ || dense_->empty()) throw DomainError("empty mean-field trajectory");
}

Complex MeanFieldTrajectory::mean_m(double t) const {
  return {dense_->component(t, 0), dense_->component(t, 1)};
}

Complex MeanFieldTrajectory::mean_b(double t) const {
  return {dense_->component(t, 2), dense_->component(t, 3)};
}

double MeanFieldTrajectory::effective_detuning(double t) const {
  return delta_m_ + g_m_ * 2.0 * mean_b(t).real();
}

MeanFieldTrajectory::Samples MeanFieldTrajectory::sample(
    std::span<const double> t_grid) const {
  Samples s;
  for (const double t : t_grid) {
    s.t.push_back(t);
    s.mean_m.push_back(mean_m(t));
    s.mean_b.push_back(mean_b(t));
    s.coupling.push_back(coupling(t));
  }
  return s;
}

std::vector<double> MeanFieldTrajectory::refined_grid(double t0, double t1,
                                                      double relative) const {
  if (!(t1 > t0)) throw DomainError("refined grid needs t1 > t0");
  if (!(relative > 0.0)) throw DomainError("relative threshold must be positive");
  // Start from the integrator's own steps inside [t0, t1].
  std::vector<double> grid{t0};
  for (const double t : dense_->step_times()) {
    if (t > t0 && t < t1) grid.push_back(t);
  }
  grid.push_back(t1);

  double peak = 0.0;
  for (const double t : grid) peak = std::max(peak, std::abs(mean_m(t)));
  if (peak == 0.0) return grid;
  const double limit = relative * peak;

  std::vector<double> out{grid.front()};
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double a = grid[i - 1];
    const double b = grid[i];
    // Bound the change over [a, b] by sampling its interior densely enough.
    const double change = std::abs(mean_m(b) - mean_m(a));
    const double mid_change = std::abs(mean_m(0.5 * (a + b)) - mean_m(a));
    const double estimate = std::max(change, 2.0 * mid_change);
    const auto pieces = static_cast<std::size_t>(std::ceil(2.0 * estimate / limit));
    const std::size_t n = std::max<std::size_t>(1, pieces);
    for (std::size_t k = 1; k <= n; ++k) {
      out.push_back(k == n ? b : a + (b - a) * static_cast<double>(k) / n);
    }
  }
  return out;
}

MeanFieldTrajectory step2_mean_field(const DispersiveOmmParams& p,
                                     Complex b_initial, double t_end,
                                     const OdeOptions& options) {
  p.validate();
  if (!(t_end > 0.0)) throw DomainError("mean-field horizon must be positive");
  const Complex rabi = rabi_frequency(p.magnon_drive);
  const double half_kappa = p.kappa_m / 2.0;
  const double half_gamma = p.gamma_b / 2.0;
  OdeRhs rhs = [&](double, const Vector& y, Vector& dy) {
    const Complex m(y[0], y[1]);
    const Complex b(y[2], y[3]);
    const Complex dm = -I * p.delta_m * m - half_kappa * m -
                       I * p.g_m * m * (2.0 * b.real()) - I * rabi;
    const Complex db = -I * p.omega_b * b - half_gamma * b - I * p.g_m * std::norm(m);
    dy << dm.real(), dm.imag(), db.real(), db.imag();
  };
  Vector y0(4);
  y0 << 0.0, 0.0, b_initial.real(), b_initial.imag();
  auto dense = std::make_shared<DenseTrajectory>();
  const std::vector<double> grid{0.0, t_end};
  DormandPrince(rhs, options).solve(y0, grid, dense.get());
  return MeanFieldTrajectory(std::move(dense), p.g_m, p.delta_m);
}

Matrix step2_initial_cov(const DispersiveOmmParams& p,
                         const Eigen::Matrix2d& mechanics) {
  const double n_m = thermal_occupancy(p.omega_m, p.temperature);
  Matrix v = Matrix::Zero(4, 4);
  v(0, 0) = v(1, 1) = n_m + 0.5;
  v.block<2, 2>(2, 2) = mechanics;
  return v;
}

namespace {

SqueezingTrace evolve_step2(const DispersiveOmmParams& p,
                            const MeanFieldTrajectory& trajectory,
                            const Matrix& initial_cov,
                            std::span<const double> t_grid,
                            const OdeOptions& options, bool full) {
  if (initial_cov.rows() != 4 || initial_cov.cols() != 4) {
    throw DimensionError("step-2 covariance must be 4x4");
  }
  if (t_grid.empty()) throw DomainError("empty time grid");
  if (t_grid.front() < 0.0 ||
      t_grid.back() > trajectory.t_end() * (1.0 + 1e-12)) {
    throw DomainError("time grid extends beyond the mean-field trajectory");
  }
  MomentModel::DriftFunction drift;
  if (full) {
    drift = [&](double t) {
      return dispersive::step2_drift_full(p.kappa_m, p.gamma_b, p.omega_b,
                                          trajectory.coupling(t), t);
    };
  } else {
    drift = [&](double t) {
      return dispersive::step2_drift_rwa(p.kappa_m, p.gamma_b,
                                         trajectory.coupling(t));
    };
  }
  const MomentModel model(drift, 4, dispersive::step2_diffusion(p));
  const auto states = integrate_moments(
      model, GaussianState(Vector::Zero(4), initial_cov), t_grid, options);

  SqueezingTrace trace;
  trace.axis_name = "t";
  trace.axis_unit = "s";
  trace.axis.assign(t_grid.begin(), t_grid.end());
  trace.quadratures = {"X_m", "Y_m", "q", "p"};
  trace.variances.assign(4, {});
  trace.squeezing.assign(4, {});
  trace.extra = {{"S_m_running_max", "dB", {}}, {"|G_m|/2pi", "Hz", {}}};
  double running = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < states.size(); ++i) {
    for (Eigen::Index k = 0; k < 4; ++k) {
      const double v = states[i].cov(k, k);
      trace.variances[k].push_back(v);
      trace.squeezing[k].push_back(squeezing_db(v));
    }
    running = std::max(running, trace.squeezing[1].back());
    trace.extra[0].values.push_back(running);
    trace.extra[1].values.push_back(to_hz(std::abs(trajectory.coupling(t_grid[i]))));
    trace.stable.push_back(true);
  }
  return trace;
}

std::pair<double, double> peak_of(const SqueezingTrace& trace) {
  const auto& s = trace.squeezing_of("Y_m");
  const auto it = std::max_element(s.begin(), s.end());
  return {*it, trace.axis[static_cast<std::size_t>(it - s.begin())]};
}

}  // namespace

SqueezingTrace step2_evolve_rwa(const DispersiveOmmParams& params,
                                const MeanFieldTrajectory& trajectory,
                                const Matrix& initial_cov,
                                std::span<const double> t_grid,
                                const OdeOptions& options) {
  return evolve_step2(params, trajectory, initial_cov, t_grid, options, false);
}

SqueezingTrace step2_evolve_full(const DispersiveOmmParams& params,
                                 const MeanFieldTrajectory& trajectory,
                                 const Matrix& initial_cov,
                                 std::span<const double> t_grid,
                                 const OdeOptions& options) {
  OdeOptions tight = options;
  tight.rtol = std::min(options.rtol, 1e-10);
  return evolve_step2(params, trajectory, initial_cov, t_grid, tight, true);
}

ProtocolResult run_protocol(const DispersiveOmmParams& params,
                            const ProtocolSchedule& schedule,
                            const ProtocolOptions& options) {
  params.validate();
  schedule.validate();
  ProtocolResult result;
  result.warnings = params.warnings();
  for (auto& w : schedule.warnings(params)) result.warnings.push_back(std::move(w));
  result.rabi = rabi_frequency(params.magnon_drive);

  result.step1 = step1_steady(params);
  result.averages = step1_averages(params);
  result.interlude = interlude_evolve(params, result.step1.state, result.averages,
                                      schedule, options.ode);
  const Matrix v0 = step2_initial_cov(params, result.interlude.mechanics.cov);
  const Complex b0 = result.interlude.mean_b_end;

  std::shared_ptr<const MeanFieldTrajectory> traj;
  if (schedule.horizon) {
    result.horizon = *schedule.horizon;
    traj = std::make_shared<const MeanFieldTrajectory>(
        step2_mean_field(params, b0, result.horizon, options.ode));
  } else {
    // Scan windows until the RWA squeezing peaks strictly inside one, then
    // keep three times the peak time.
    double window = 10.0 / params.kappa_m;
    const double cap = 1.0 / params.gamma_b;
    while (true) {
      traj = std::make_shared<const MeanFieldTrajectory>(
          step2_mean_field(params, b0, window, options.ode));
      const auto grid = linspace(0.0, window, 801);
      const auto scan = step2_evolve_rwa(params, *traj, v0, grid, options.ode);
      const auto [peak, t_peak] = peak_of(scan);
      if (t_peak > 0.0 && t_peak < 0.9 * window && peak > 0.0) {
        result.horizon = 3.0 * t_peak;
        break;
      }
      if (window >= cap) {
        result.horizon = window;
        result.warnings.emplace_back(
            "no interior magnon squeezing maximum found; horizon capped");
        break;
      }
      window = std::min(4.0 * window, cap);
    }
    if (result.horizon > traj->t_end()) {
      traj = std::make_shared<const MeanFieldTrajectory>(
          step2_mean_field(params, b0, result.horizon, options.ode));
    }
  }
  result.mean_field = traj;

  const auto grid = linspace(0.0, result.horizon, schedule.sample_count);
  result.rwa = step2_evolve_rwa(params, *traj, v0, grid, options.ode);
  std::tie(result.s_m_max, result.t_max) = peak_of(result.rwa);
  if (options.include_full) {
    result.full = step2_evolve_full(params, *traj, v0, grid, options.ode);
    result.s_m_max_full = peak_of(*result.full).first;
  }
  return result;
}

RabiCalibration calibrate_rabi(const DispersiveOmmParams& params,
                               const ProtocolSchedule& schedule,
                               double target_db, double tolerance_db) {
  if (!(tolerance_db > 0.0)) throw DomainError("tolerance must be positive");
  const Complex base = rabi_frequency(params.magnon_drive);
  const double phase = std::abs(base) > 0.0 ? std::arg(base) : 0.0;
  ProtocolOptions options;
  options.include_full = false;

  RabiCalibration cal;
  const auto evaluate = [&](double magnitude) {
    ++cal.evaluations;
    return run_protocol(params.with_rabi(std::polar(magnitude, phase)), schedule,
                        options)
        .s_m_max;
  };

  // |G_m| ≈ g′_m |Ω| / Δ_m; bracket |G_m| between 0.01 κ_m and 20 κ_m.
  if (!(params.g_m > 0.0)) throw DomainError("calibration requires g_m > 0");
  const double scale = std::abs(params.delta_m) / params.g_m;
  double lo = std::log(0.01 * params.kappa_m * scale);
  double hi = std::log(20.0 * params.kappa_m * scale);
  double s_lo = evaluate(std::exp(lo));
  double s_hi = evaluate(std::exp(hi));
  if (!(s_lo <= target_db && target_db <= s_hi)) {
    std::ostringstream msg;
    msg << "target " << target_db << " dB outside the reachable range [" << s_lo
        << ", " << s_hi << "] dB";
    throw DomainError(msg.str());
  }
  double mid = 0.5 * (lo + hi);
  double s_mid = s_lo;
  for (int iter = 0; iter < 80; ++iter) {
    mid = 0.5 * (lo + hi);
    s_mid = evaluate(std::exp(mid));
    if (std::abs(s_mid - target_db) < tolerance_db) break;
    (s_mid < target_db ? lo : hi) = mid;
  }
  cal.rabi = std::polar(std::exp(mid), phase);
  cal.s_m_max = s_mid;
  return cal;
}

}  // namespace magsq
