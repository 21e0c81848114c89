#include "magsq/config.hpp"

#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

namespace magsq {

using nlohmann::json;

namespace {

const std::set<std::string> kCommonKeys = {
    "model",      "wavelength_nm", "omega_b_hz", "omega_m_hz",
    "kappa_a_hz", "kappa_m_hz",    "gamma_b_hz", "g0_hz",
    "g_m_hz",     "temperature_k", "g_minus_hz", "ratio",
    "drive",      "tolerances"};
const std::set<std::string> kDispersiveKeys = {"delta_m_hz", "magnon_drive",
                                               "schedule"};
const std::set<std::string> kDriveKeys = {"p_minus_mw", "p_plus_mw",
                                          "phase_minus", "phase_plus"};
const std::set<std::string> kMagnonKeys = {
    "rabi_hz", "field_t", "spin_count", "gyromagnetic_hz_per_t", "phase"};
const std::set<std::string> kScheduleKeys = {"switch_off_phase_pi", "interlude_s",
                                             "horizon_s", "sample_count"};
const std::set<std::string> kToleranceKeys = {"rtol", "atol"};

void check_keys(const json& object, const std::set<std::string>& allowed,
                const std::string& path) {
  if (!object.is_object()) throw SchemaError(path.empty() ? "/" : path, "expected an object");
  for (const auto& [key, value] : object.items()) {
    if (!allowed.contains(key)) throw SchemaError(path + "/" + key, "unknown key");
  }
}

/// Reads `key` into `target` (scaled) when present.
void read_number(const json& object, const std::string& key,
                 const std::string& path, double& target, double scale = 1.0) {
  const auto it = object.find(key);
  if (it == object.end()) return;
  if (!it->is_number()) throw SchemaError(path + "/" + key, "expected a number");
  target = it->get<double>() * scale;
}

std::optional<double> optional_number(const json& object, const std::string& key,
                                      const std::string& path) {
  const auto it = object.find(key);
  if (it == object.end()) return std::nullopt;
  if (!it->is_number()) throw SchemaError(path + "/" + key, "expected a number");
  return it->get<double>();
}

template <typename Params>
void read_common(const json& doc, Params& p) {
  double wavelength_nm = p.wavelength * 1e9;
  read_number(doc, "wavelength_nm", "", wavelength_nm);
  p.wavelength = wavelength_nm * 1e-9;
  read_number(doc, "omega_b_hz", "", p.omega_b, two_pi);
  read_number(doc, "omega_m_hz", "", p.omega_m, two_pi);
  read_number(doc, "kappa_a_hz", "", p.kappa_a, two_pi);
  read_number(doc, "kappa_m_hz", "", p.kappa_m, two_pi);
  read_number(doc, "gamma_b_hz", "", p.gamma_b, two_pi);
  read_number(doc, "g0_hz", "", p.g0, two_pi);
  read_number(doc, "g_m_hz", "", p.g_m, two_pi);
  read_number(doc, "temperature_k", "", p.temperature);

  const bool direct = doc.contains("g_minus_hz") || doc.contains("ratio");
  if (doc.contains("drive")) {
    if (direct) {
      throw SchemaError("/drive",
                        "give either drive powers or g_minus_hz/ratio, not both");
    }
    const json& d = doc.at("drive");
    check_keys(d, kDriveKeys, "/drive");
    if (!d.contains("p_minus_mw")) throw SchemaError("/drive/p_minus_mw", "required");
    double p_minus = 0.0, p_plus = 0.0, phase_minus = 0.0, phase_plus = 0.0;
    read_number(d, "p_minus_mw", "/drive", p_minus, 1e-3);
    read_number(d, "p_plus_mw", "/drive", p_plus, 1e-3);
    read_number(d, "phase_minus", "/drive", phase_minus);
    read_number(d, "phase_plus", "/drive", phase_plus);
    // Tone frequencies sit on the cavity sidebands ω_a ∓ ω_b.
    const double omega_a = p.wavelength > 0.0 ? optical_frequency(p.wavelength) : 0.0;
    p.drive = TwoToneDrive{{p_minus, omega_a - p.omega_b, phase_minus},
                           {p_plus, omega_a + p.omega_b, phase_plus}};
  } else if (direct) {
    auto couplings = std::get<DirectCouplings>(p.drive);
    read_number(doc, "g_minus_hz", "", couplings.g_minus, two_pi);
    read_number(doc, "ratio", "", couplings.ratio);
    p.drive = couplings;
  }
}

}  // namespace

std::string to_string(ModelKind kind) {
  return kind == ModelKind::linear ? "linear" : "dispersive";
}

Config parse_config(const json& document) {
  const json doc = document.is_null() ? json::object() : document;
  if (!doc.is_object()) throw SchemaError("/", "expected an object");

  Config config;
  if (const auto it = doc.find("model"); it != doc.end()) {
    if (!it->is_string()) throw SchemaError("/model", "expected a string");
    const auto name = it->get<std::string>();
    if (name == "linear") {
      config.kind = ModelKind::linear;
    } else if (name == "dispersive") {
      config.kind = ModelKind::dispersive;
    } else {
      throw SchemaError("/model", "expected \"linear\" or \"dispersive\"");
    }
  }

  auto allowed = kCommonKeys;
  if (config.kind == ModelKind::dispersive) allowed.insert(kDispersiveKeys.begin(), kDispersiveKeys.end());
  check_keys(doc, allowed, "");

  if (doc.contains("tolerances")) {
    const json& t = doc.at("tolerances");
    check_keys(t, kToleranceKeys, "/tolerances");
    read_number(t, "rtol", "/tolerances", config.ode.rtol);
    read_number(t, "atol", "/tolerances", config.ode.atol);
  }

  if (config.kind == ModelKind::linear) {
    read_common(doc, config.linear);
    return config;
  }

  auto& p = config.dispersive;
  read_common(doc, p);
  p.delta_m = p.omega_b;
  read_number(doc, "delta_m_hz", "", p.delta_m, two_pi);

  if (doc.contains("magnon_drive")) {
    const json& m = doc.at("magnon_drive");
    check_keys(m, kMagnonKeys, "/magnon_drive");
    MagnonDriveSpec spec;
    const double phase = optional_number(m, "phase", "/magnon_drive").value_or(0.0);
    if (const auto rabi = optional_number(m, "rabi_hz", "/magnon_drive")) {
      spec.rabi = std::polar(two_pi * *rabi, phase);
    }
    const auto field = optional_number(m, "field_t", "/magnon_drive");
    const auto spins = optional_number(m, "spin_count", "/magnon_drive");
    const auto gamma = optional_number(m, "gyromagnetic_hz_per_t", "/magnon_drive");
    if (field || spins || gamma) {
      if (!(field && spins && gamma)) {
        throw SchemaError("/magnon_drive",
                          "field drive needs field_t, spin_count and "
                          "gyromagnetic_hz_per_t");
      }
      spec.field = MagnonDriveSpec::FieldDrive{*field, *spins, two_pi * *gamma, phase};
    }
    p.magnon_drive = spec;
  }

  if (doc.contains("schedule")) {
    const json& s = doc.at("schedule");
    check_keys(s, kScheduleKeys, "/schedule");
    auto& sch = config.schedule;
    read_number(s, "switch_off_phase_pi", "/schedule", sch.switch_off_phase,
                std::numbers::pi);
    sch.interlude = optional_number(s, "interlude_s", "/schedule");
    sch.horizon = optional_number(s, "horizon_s", "/schedule");
    if (const auto it = s.find("sample_count"); it != s.end()) {
      if (!it->is_number_integer() || it->get<long long>() < 2) {
        throw SchemaError("/schedule/sample_count", "expected an integer >= 2");
      }
      sch.sample_count = it->get<std::size_t>();
    }
  }
  return config;
}

Config parse_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError(path.string(), "cannot open configuration file");
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();
  if (text.find_first_not_of(" \t\r\n") == std::string::npos) {
    return parse_config(json::object());
  }
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError(path.string(), std::string("invalid JSON: ") + e.what());
  }
  return parse_config(doc);
}

void check_physical(const Config& config) {
  if (!(config.ode.rtol > 0.0) || !(config.ode.atol >= 0.0)) {
    throw DomainError("integration tolerances must be positive");
  }
  const auto check_ratio = [](EffectiveCouplings g) {
    if (!(g.minus > 0.0)) throw DomainError("G- must be positive");
    if (!(g.plus < g.minus)) {
      std::ostringstream msg;
      msg << "stability requires G+ < G- (G+/G- = " << g.plus / g.minus << ")";
      throw StabilityError(msg.str(), std::numeric_limits<double>::quiet_NaN());
    }
  };
  if (config.kind == ModelKind::linear) {
    config.linear.validate();
    check_ratio(config.linear.couplings());
  } else {
    config.dispersive.validate();
    check_ratio(config.dispersive.couplings());
    config.schedule.validate();
  }
}

json default_config(ModelKind kind) {
  if (kind == ModelKind::linear) {
    const LinearOmmParams p;
    const auto d = std::get<DirectCouplings>(p.drive);
    return {{"model", "linear"},
            {"wavelength_nm", p.wavelength * 1e9},
            {"omega_b_hz", to_hz(p.omega_b)},
            {"omega_m_hz", to_hz(p.omega_m)},
            {"kappa_a_hz", to_hz(p.kappa_a)},
            {"kappa_m_hz", to_hz(p.kappa_m)},
            {"gamma_b_hz", to_hz(p.gamma_b)},
            {"g0_hz", to_hz(p.g0)},
            {"g_m_hz", to_hz(p.g_m)},
            {"temperature_k", p.temperature},
            {"g_minus_hz", to_hz(d.g_minus)},
            {"ratio", d.ratio}};
  }
  const DispersiveOmmParams p;
  const auto d = std::get<DirectCouplings>(p.drive);
  return {{"model", "dispersive"},
          {"wavelength_nm", p.wavelength * 1e9},
          {"omega_b_hz", to_hz(p.omega_b)},
          {"omega_m_hz", to_hz(p.omega_m)},
          {"kappa_a_hz", to_hz(p.kappa_a)},
          {"kappa_m_hz", to_hz(p.kappa_m)},
          {"gamma_b_hz", to_hz(p.gamma_b)},
          {"g0_hz", to_hz(p.g0)},
          {"g_m_hz", to_hz(p.g_m)},
          {"delta_m_hz", to_hz(p.delta_m)},
          {"temperature_k", p.temperature},
          {"g_minus_hz", to_hz(d.g_minus)},
          {"ratio", d.ratio},
          {"magnon_drive", {{"rabi_hz", kDefaultRabiHz}, {"phase", 0.0}}},
          {"schedule", {{"switch_off_phase_pi", 0.0}, {"sample_count", 2001}}}};
}

json with_value(const json& document, const std::string& path, double value) {
  json out = document.is_null() ? json::object() : document;
  const std::string pointer = path.starts_with("/") ? path : "/" + path;
  try {
    out[json::json_pointer(pointer)] = value;
  } catch (const json::exception& e) {
    throw SchemaError(pointer, std::string("invalid parameter path: ") + e.what());
  }
  return out;
}

}  // namespace magsq
