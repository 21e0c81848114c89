#pragma once

// Two-step protocol with a dispersive magnomechanical coupling:
//   1. two-tone optomechanical drive squeezes the mechanics (steady state),
//   2. the drive is switched off and the cavity empties during an interlude,
//   3. a red-detuned magnon drive activates a phonon–magnon beam splitter that
//      transfers the squeezing to the magnon mode.
//
// Step-1 quadratures: (X_a, Y_a, q, p). Step-2 quadratures: (X_m, Y_m, q, p).

#include <memory>
#include <optional>
#include <span>

#include "magsq/gaussian.hpp"
#include "magsq/ode.hpp"
#include "magsq/quantities.hpp"

namespace magsq {

/// |Ω| default: calibrated so that the RWA protocol at the default parameters
/// peaks at 2.3 dB of magnon squeezing.
inline constexpr double kDefaultRabiHz = 7.887e12;

struct DispersiveOmmParams {
  double wavelength = 1064e-9;
  double omega_b = from_hz(100e6);
  double omega_m = from_hz(10e9);
  double kappa_a = from_hz(2e6);
  double kappa_m = from_hz(1e6);
  double gamma_b = from_hz(100.0);
  double g0 = from_hz(1e3);
  double g_m = from_hz(10.0);  // bare dispersive coupling g′_m
  double delta_m = from_hz(100e6);
  double temperature = 0.01;
  CavityDrive drive = DirectCouplings{from_hz(0.3e6), 0.95};
  MagnonDriveSpec magnon_drive{Complex(from_hz(kDefaultRabiHz), 0.0), std::nullopt};

  void validate() const;
  EffectiveCouplings couplings() const;
  double cavity_frequency() const { return optical_frequency(wavelength); }
  DispersiveOmmParams with_ratio(double ratio) const;
  DispersiveOmmParams with_rabi(Complex rabi) const;
  /// Warnings for state-swap detuning (Δ_m ≠ ω_b).
  std::vector<std::string> warnings() const;
};

struct ProtocolSchedule {
  double switch_off_phase = 0.0;     // ω_b t′, rad
  std::optional<double> interlude;   // τ₀, s; default 4π/κ_a
  std::optional<double> horizon;     // step-2 duration, s; default from a scan
  std::size_t sample_count = 2001;

  double interlude_for(const DispersiveOmmParams& params) const;
  std::vector<std::string> warnings(const DispersiveOmmParams& params) const;
  void validate() const;
};

/// Periodic classical steady state of the two-tone-driven optomechanics.
/// Cavity amplitudes are in the frame rotating at ω_a; the mechanics is in
/// the lab frame.
struct Step1Averages {
  Complex a_plus, a_minus;
  Complex b_plus, b_zero, b_minus;

  Complex mean_a(double omega_b, double t) const;
  Complex mean_b(double omega_b, double t) const;
};

Step1Averages step1_averages(const DispersiveOmmParams& params);

struct Step1Report {
  GaussianState state;  // (X_a, Y_a, q, p)
  EffectiveCouplings couplings;
  BogoliubovParams bogoliubov;
  double s_b = 0.0;
  double n_b = 0.0;
  double margin = 0.0;
};

namespace dispersive {

Matrix step1_drift(const DispersiveOmmParams& params, EffectiveCouplings g);
Matrix step1_diffusion(const DispersiveOmmParams& params);
Matrix step2_diffusion(const DispersiveOmmParams& params);
/// Beam-splitter drift in the rotating-wave approximation.
Matrix step2_drift_rwa(double kappa_m, double gamma_b, Complex coupling);
/// Drift retaining the counter-rotating terms at 2ω_b; `t` is measured from
/// the start of step 2.
Matrix step2_drift_full(double kappa_m, double gamma_b, double omega_b,
                        Complex coupling, double t);

}  // namespace dispersive

Step1Report step1_steady(const DispersiveOmmParams& params);

/// Squeezing and N_B of step 1 over G₊/G₋ (quadrature "q"; extra "N_B").
SqueezingTrace step1_vs_ratio(const DispersiveOmmParams& params,
                              std::span<const double> ratios);

struct InterludeResult {
  GaussianState optomechanics;  // (X_a, Y_a, q, p) at the end of the interlude
  GaussianState mechanics;      // (q, p) marginal
  Complex mean_a_start, mean_a_end;
  Complex mean_b_start, mean_b_end;
  double duration = 0.0;
};

InterludeResult interlude_evolve(const DispersiveOmmParams& params,
                                 const GaussianState& step1_state,
                                 const Step1Averages& averages,
                                 const ProtocolSchedule& schedule,
                                 const OdeOptions& options = {});

/// Classical magnon and mechanical means during step 2, stored as a dense
/// interpolant. ⟨m⟩ is in the frame of the magnon drive; ⟨b⟩ in the lab frame.
class MeanFieldTrajectory {
 public:
  MeanFieldTrajectory(std::shared_ptr<const DenseTrajectory> dense,
                      double g_m, double delta_m);

  double t_end() const { return dense_->t_end(); }
  Complex mean_m(double t) const;
  Complex mean_b(double t) const;
  /// G_m(t) = g′_m ⟨m⟩_t.
  Complex coupling(double t) const { return g_m_ * mean_m(t); }
  /// Δ̃_m = Δ_m + g′_m (⟨b⟩ + ⟨b⟩*).
  double effective_detuning(double t) const;
  const DenseTrajectory& dense() const { return *dense_; }

  struct Samples {
    std::vector<double> t;
    std::vector<Complex> mean_m, mean_b, coupling;
  };
  Samples sample(std::span<const double> t_grid) const;

  /// Grid on [t0, t1] refined until |Δ⟨m⟩| between neighbours is below
  /// `relative` · max|⟨m⟩|.
  std::vector<double> refined_grid(double t0, double t1,
                                   double relative = 1e-3) const;

 private:
  std::shared_ptr<const DenseTrajectory> dense_;
  double g_m_;
  double delta_m_;
};

MeanFieldTrajectory step2_mean_field(const DispersiveOmmParams& params,
                                     Complex b_initial, double t_end,
                                     const OdeOptions& options = {});

/// Initial step-2 covariance: thermal magnon ⊕ mechanical block.
Matrix step2_initial_cov(const DispersiveOmmParams& params,
                         const Eigen::Matrix2d& mechanics);

/// Quadratures "X_m", "Y_m", "q", "p"; extra "S_m_running_max" (dB) and
/// "|G_m|/2pi" (Hz).
SqueezingTrace step2_evolve_rwa(const DispersiveOmmParams& params,
                                const MeanFieldTrajectory& trajectory,
                                const Matrix& initial_cov,
                                std::span<const double> t_grid,
                                const OdeOptions& options = {});

/// Same outputs with the counter-rotating terms retained; rtol is tightened
/// to at most 1e-10.
SqueezingTrace step2_evolve_full(const DispersiveOmmParams& params,
                                 const MeanFieldTrajectory& trajectory,
                                 const Matrix& initial_cov,
                                 std::span<const double> t_grid,
                                 const OdeOptions& options = {});

struct ProtocolOptions {
  bool include_full = true;
  OdeOptions ode{};
};

struct ProtocolResult {
  Step1Report step1;
  Step1Averages averages;
  InterludeResult interlude;
  std::shared_ptr<const MeanFieldTrajectory> mean_field;
  double horizon = 0.0;
  SqueezingTrace rwa;
  std::optional<SqueezingTrace> full;
  double s_m_max = 0.0;  // RWA, dB
  double t_max = 0.0;    // s
  std::optional<double> s_m_max_full;
  Complex rabi;
  std::vector<std::string> warnings;
};

ProtocolResult run_protocol(const DispersiveOmmParams& params,
                            const ProtocolSchedule& schedule,
                            const ProtocolOptions& options = {});

struct RabiCalibration {
  Complex rabi;
  double s_m_max = 0.0;
  int evaluations = 0;
};

/// Scale |Ω| (phase kept) until the RWA protocol peaks at `target_db`.
RabiCalibration calibrate_rabi(const DispersiveOmmParams& params,
                               const ProtocolSchedule& schedule,
                               double target_db, double tolerance_db = 1e-3);

}  // namespace magsq
