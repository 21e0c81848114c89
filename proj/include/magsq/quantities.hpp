#pragma once

// Physical constants and conversions between laboratory quantities
// (power, field, temperature) and model coefficients.
//
// Every angular frequency and rate is stored in rad/s. Helpers `from_hz` and
// `to_hz` convert from and to the ω/2π values quoted in laboratory units.

#include <complex>
#include <numbers>
#include <optional>
#include <variant>

namespace magsq {

using Complex = std::complex<double>;

/// CODATA 2018 values.
struct PhysicalConstants {
  static constexpr double hbar = 1.054571817e-34;  // J s
  static constexpr double kB = 1.380649e-23;       // J/K
  static constexpr double c = 299792458.0;         // m/s
};

constexpr double two_pi = 2.0 * std::numbers::pi;

/// ω from ω/2π.
constexpr double from_hz(double hz) noexcept { return two_pi * hz; }
/// ω/2π from ω.
constexpr double to_hz(double omega) noexcept { return omega / two_pi; }

/// Angular frequency of light with vacuum wavelength `wavelength` (m).
double optical_frequency(double wavelength);

/// A coherent drive tone. `frequency` is angular (rad/s), `power` in W.
struct DriveTone {
  double power = 0.0;
  double frequency = 0.0;
  double phase = 0.0;

  void validate() const;
};

enum class Sideband {
  stokes,       // ω₋ = ω_a − ω_b, red tone
  anti_stokes,  // ω₊ = ω_a + ω_b, blue tone
};

/// Microwave drive on the magnon mode. Supply exactly one of `rabi` or `field`.
struct MagnonDriveSpec {
  struct FieldDrive {
    double amplitude = 0.0;          // B_d, T
    double spin_count = 0.0;         // N
    double gyromagnetic_ratio = 0.0; // γ, rad/(s T)
    double phase = 0.0;              // φ₀, rad
  };

  std::optional<Complex> rabi;
  std::optional<FieldDrive> field;
};

/// Bose-Einstein occupancy [exp(ħω/k_B T) − 1]⁻¹. Exactly 0 at T = 0.
double thermal_occupancy(double frequency, double temperature);

/// Cavity drive rate E = √(κ_a P / ħω) e^{iφ}.
Complex drive_amplitude(const DriveTone& tone, double cavity_linewidth);

/// Intracavity sideband amplitude a_± = −iE/(κ_a/2 ∓ iω_b).
Complex sideband_amplitude(Complex drive, double kappa_a, double omega_b,
                           Sideband sideband);

/// Effective optomechanical coupling G_± = g₀ a_± for a drive tone.
Complex coupling_from_power(const DriveTone& tone, double g0, double kappa_a,
                            double omega_b, Sideband sideband);

/// Drive power (W) at `drive_frequency` producing |G| = `coupling`.
double power_from_coupling(double coupling, double g0, double kappa_a,
                           double omega_b, double drive_frequency);

/// Magnon Rabi frequency Ω = (√5/4) γ √N B_d e^{iφ₀}, or the direct value.
Complex rabi_frequency(const MagnonDriveSpec& spec);

/// Two-tone cavity drive given either as optical tones or directly as
/// coupling magnitudes (G₋ and the ratio G₊/G₋).
struct DirectCouplings {
  double g_minus = 0.0;
  double ratio = 0.0;
};

struct TwoToneDrive {
  DriveTone stokes;
  DriveTone anti_stokes;
};

using CavityDrive = std::variant<DirectCouplings, TwoToneDrive>;

/// Intracavity sideband amplitudes a₊ (blue) and a₋ (red).
struct SidebandAmplitudes {
  Complex plus;
  Complex minus;
};

/// Resolve a cavity drive to intracavity amplitudes. Direct couplings map to
/// real positive amplitudes G_±/g₀.
SidebandAmplitudes sideband_amplitudes(const CavityDrive& drive, double g0,
                                       double kappa_a, double omega_b);

/// Real positive coupling magnitudes |G₊|, |G₋|.
struct EffectiveCouplings {
  double plus = 0.0;
  double minus = 0.0;
};

EffectiveCouplings effective_couplings(const CavityDrive& drive, double g0,
                                       double kappa_a, double omega_b);

}  // namespace magsq
