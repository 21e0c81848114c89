#include "magsq/quantities.hpp"

#include <cmath>
#include <string>

#include "magsq/errors.hpp"

namespace magsq {

namespace {

constexpr Complex I{0.0, 1.0};

void require_positive(double value, const char* name) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw DomainError(std::string(name) + " must be positive and finite");
  }
}

}  // namespace

double optical_frequency(double wavelength) {
  require_positive(wavelength, "wavelength");
  return two_pi * PhysicalConstants::c / wavelength;
}

void DriveTone::validate() const {
  if (!(power >= 0.0) || !std::isfinite(power)) {
    throw DomainError("drive power must be non-negative");
  }
  require_positive(frequency, "drive frequency");
}

double thermal_occupancy(double frequency, double temperature) {
  require_positive(frequency, "mode frequency");
  if (!(temperature >= 0.0)) {
    throw DomainError("temperature must be non-negative");
  }
  if (temperature == 0.0) return 0.0;
  const double x = PhysicalConstants::hbar * frequency /
                   (PhysicalConstants::kB * temperature);
  return 1.0 / std::expm1(x);
}

Complex drive_amplitude(const DriveTone& tone, double cavity_linewidth) {
  tone.validate();
  require_positive(cavity_linewidth, "cavity linewidth");
  const double magnitude = std::sqrt(
      cavity_linewidth * tone.power / (PhysicalConstants::hbar * tone.frequency));
  return std::polar(magnitude, tone.phase);
}

Complex sideband_amplitude(Complex drive, double kappa_a, double omega_b,
                           Sideband sideband) {
  require_positive(kappa_a, "kappa_a");
  require_positive(omega_b, "omega_b");
  const double sign = sideband == Sideband::anti_stokes ? -1.0 : 1.0;
  return -I * drive / Complex(kappa_a / 2.0, sign * omega_b);
}

Complex coupling_from_power(const DriveTone& tone, double g0, double kappa_a,
                            double omega_b, Sideband sideband) {
  require_positive(g0, "g0");
  return g0 * sideband_amplitude(drive_amplitude(tone, kappa_a), kappa_a,
                                 omega_b, sideband);
}

double power_from_coupling(double coupling, double g0, double kappa_a,
                           double omega_b, double drive_frequency) {
  require_positive(g0, "g0");
  require_positive(kappa_a, "kappa_a");
  require_positive(omega_b, "omega_b");
  require_positive(drive_frequency, "drive frequency");
  // |G|² = g₀² κ_a P / (ħω (κ_a²/4 + ω_b²))
  const double photons = (coupling / g0) * (coupling / g0);
  return photons * (kappa_a * kappa_a / 4.0 + omega_b * omega_b) *
         PhysicalConstants::hbar * drive_frequency / kappa_a;
}

Complex rabi_frequency(const MagnonDriveSpec& spec) {
  if (spec.rabi.has_value() == spec.field.has_value()) {
    throw ConfigError(
        "magnon drive: supply exactly one of a Rabi frequency or a field "
        "specification");
  }
  if (spec.rabi) return *spec.rabi;

  const auto& f = *spec.field;
  require_positive(f.spin_count, "spin count");
  if (!(f.amplitude >= 0.0)) throw DomainError("field amplitude must be >= 0");
  const double magnitude = std::sqrt(5.0) / 4.0 * f.gyromagnetic_ratio *
                           std::sqrt(f.spin_count) * f.amplitude;
  return std::polar(magnitude, f.phase);
}

SidebandAmplitudes sideband_amplitudes(const CavityDrive& drive, double g0,
                                       double kappa_a, double omega_b) {
  require_positive(g0, "g0");
  if (const auto* direct = std::get_if<DirectCouplings>(&drive)) {
    if (!(direct->g_minus >= 0.0) || !(direct->ratio >= 0.0)) {
      throw DomainError("couplings must be non-negative");
    }
    return {direct->ratio * direct->g_minus / g0, direct->g_minus / g0};
  }
  const auto& tones = std::get<TwoToneDrive>(drive);
  return {sideband_amplitude(drive_amplitude(tones.anti_stokes, kappa_a),
                             kappa_a, omega_b, Sideband::anti_stokes),
          sideband_amplitude(drive_amplitude(tones.stokes, kappa_a), kappa_a,
                             omega_b, Sideband::stokes)};
}

EffectiveCouplings effective_couplings(const CavityDrive& drive, double g0,
                                       double kappa_a, double omega_b) {
  const auto a = sideband_amplitudes(drive, g0, kappa_a, omega_b);
  return {g0 * std::abs(a.plus), g0 * std::abs(a.minus)};
}

}  // namespace magsq
