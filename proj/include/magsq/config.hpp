#pragma once

// JSON parameter files.
//
// Frequencies and rates are given as ω/2π in Hz (keys ending in `_hz`),
// temperatures in K, powers in mW, phases in rad (or in units of π where the
// key ends in `_pi`). Missing keys take the defaults of the selected model.
//
//   {
//     "model": "linear" | "dispersive",
//     "wavelength_nm", "omega_b_hz", "omega_m_hz", "kappa_a_hz", "kappa_m_hz",
//     "gamma_b_hz", "g0_hz", "g_m_hz", "temperature_k",
//     "g_minus_hz", "ratio",                        // direct couplings, or
//     "drive": {"p_minus_mw", "p_plus_mw", "phase_minus", "phase_plus"},
//     // dispersive only:
//     "delta_m_hz",
//     "magnon_drive": {"rabi_hz", "phase"} |
//                     {"field_t", "spin_count", "gyromagnetic_hz_per_t", "phase"},
//     "schedule": {"switch_off_phase_pi", "interlude_s", "horizon_s", "sample_count"},
//     "tolerances": {"rtol", "atol"}
//   }

#include <filesystem>
#include <nlohmann/json.hpp>
#include <string>

#include "magsq/dispersive_system.hpp"
#include "magsq/errors.hpp"
#include "magsq/linear_system.hpp"
#include "magsq/ode.hpp"

namespace magsq {

/// Malformed configuration: unknown key, wrong type, conflicting sections.
class SchemaError : public ConfigError {
 public:
  SchemaError(const std::string& path, const std::string& what)
      : ConfigError(path + ": " + what), path_(path) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

enum class ModelKind { linear, dispersive };

struct Config {
  ModelKind kind = ModelKind::linear;
  LinearOmmParams linear;
  DispersiveOmmParams dispersive;
  ProtocolSchedule schedule;
  OdeOptions ode;
};

/// Parse and schema-check a configuration. Throws SchemaError for schema
/// violations; physical invariants are checked separately by check_physical.
Config parse_config(const nlohmann::json& document);
Config parse_config_file(const std::filesystem::path& path);

/// Throws DomainError/StabilityError/ConfigError when the parameters violate a
/// physical invariant (non-positive rates, G₊ ≥ G₋, detuned magnon, ...).
void check_physical(const Config& config);

/// Default document for a model kind.
nlohmann::json default_config(ModelKind kind);

/// Apply a value at a JSON pointer ("/temperature_k" or "temperature_k").
nlohmann::json with_value(const nlohmann::json& document, const std::string& path,
                          double value);

std::string to_string(ModelKind kind);

}  // namespace magsq
