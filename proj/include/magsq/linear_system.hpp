#pragma once

// Cavity–phonon–magnon system with a beam-splitter magnomechanical coupling
// and a two-tone cavity drive, in the rotating-wave approximation.
// Quadrature order: (X_a, Y_a, q, p, X_m, Y_m).

#include <span>

#include "magsq/gaussian.hpp"
#include "magsq/quantities.hpp"

namespace magsq {

struct LinearOmmParams {
  double wavelength = 1064e-9;
  double omega_b = from_hz(10e9);
  double omega_m = from_hz(10e9);
  double kappa_a = from_hz(100e6);
  double kappa_m = from_hz(1e6);
  double gamma_b = from_hz(1e4);
  double g0 = from_hz(100e3);
  double g_m = from_hz(10e6);
  double temperature = 0.01;
  CavityDrive drive = DirectCouplings{from_hz(15e6), 0.76};

  /// Throws DomainError/ConfigError for non-physical rates or a detuned magnon.
  void validate() const;
  EffectiveCouplings couplings() const;
  double cavity_frequency() const { return optical_frequency(wavelength); }
  /// Copy with direct couplings G₋ (unchanged magnitude) and G₊ = ratio·G₋.
  LinearOmmParams with_ratio(double ratio) const;
};

namespace linear {

inline constexpr Eigen::Index kXa = 0, kYa = 1, kQ = 2, kP = 3, kXm = 4, kYm = 5;

/// Drift matrix for the given coupling magnitudes; performs no stability check.
Matrix drift_matrix(const LinearOmmParams& params, EffectiveCouplings g);

/// Diagonal diffusion matrix with N_a = 0 and thermal phonon/magnon baths.
Matrix diffusion_matrix(const LinearOmmParams& params);

}  // namespace linear

/// Constant-drift moment model. Throws StabilityError when G₊ ≥ G₋; RWA
/// validity concerns land in `MomentModel::warnings`.
MomentModel build_model(const LinearOmmParams& params);

struct SteadyReport {
  GaussianState state;
  EffectiveCouplings couplings;
  BogoliubovParams bogoliubov;
  double s_b = 0.0;     // dB, mechanical q quadrature
  double s_m = 0.0;     // dB, magnon Y quadrature
  double n_b = 0.0;     // Bogoliubov occupancy
  double margin = 0.0;  // largest real part of the drift spectrum, rad/s
};

SteadyReport steady_state(const LinearOmmParams& params);

/// Steady squeezing and N_B over G₊/G₋ at fixed G₋. Quadratures "q" and
/// "Y_m"; extra series "N_B" and "margin". Points with ratio ≥ 1 or an
/// unstable drift are kept with NaN values and `stable = false`.
SqueezingTrace squeezing_vs_ratio(const LinearOmmParams& params,
                                  std::span<const double> ratios);

struct RatioOptimum {
  double ratio = 0.0;
  double value = 0.0;  // dB
};

/// G₊/G₋ maximizing the steady magnon squeezing: scan with step 0.01 on
/// [0, 0.99], then golden-section refinement to `tolerance`.
RatioOptimum optimal_ratio(const LinearOmmParams& params, double tolerance = 1e-4);

}  // namespace magsq
