#include <catch2/catch_amalgamated.hpp>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "magsq/config.hpp"

using namespace magsq;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinRel;
using nlohmann::json;

namespace {

std::string schema_path(const json& doc) {
  try {
    parse_config(doc);
  } catch (const SchemaError& e) {
    return e.path();
  }
  return "<none>";
}

std::filesystem::path write_temp(const std::string& name, const std::string& text) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream(path) << text;
  return path;
}

}  // namespace

TEST_CASE("empty documents select the linear defaults") {
  for (const json& doc : {json(), json::object()}) {
    const Config c = parse_config(doc);
    CHECK(c.kind == ModelKind::linear);
    CHECK(c.linear.omega_b == LinearOmmParams{}.omega_b);
    CHECK(c.linear.couplings().minus == LinearOmmParams{}.couplings().minus);
    CHECK_NOTHROW(check_physical(c));
  }
}

TEST_CASE("default documents parse back to the built-in parameters") {
  const Config lin = parse_config(default_config(ModelKind::linear));
  CHECK_THAT(lin.linear.kappa_a, WithinRel(LinearOmmParams{}.kappa_a, 1e-14));
  CHECK_THAT(lin.linear.couplings().plus, WithinRel(LinearOmmParams{}.couplings().plus, 1e-14));
  CHECK_NOTHROW(check_physical(lin));

  const Config dis = parse_config(default_config(ModelKind::dispersive));
  CHECK(dis.kind == ModelKind::dispersive);
  CHECK_THAT(dis.dispersive.delta_m, WithinRel(DispersiveOmmParams{}.delta_m, 1e-14));
  CHECK_THAT(dis.dispersive.couplings().minus,
             WithinRel(DispersiveOmmParams{}.couplings().minus, 1e-14));
  CHECK(dis.schedule.sample_count == 2001);
  CHECK_NOTHROW(check_physical(dis));
}

TEST_CASE("units are converted on input") {
  const Config c = parse_config({{"model", "dispersive"},
                                 {"omega_b_hz", 50e6},
                                 {"wavelength_nm", 1550.0},
                                 {"temperature_k", 0.2},
                                 {"schedule", {{"switch_off_phase_pi", 0.5}}},
                                 {"tolerances", {{"rtol", 1e-7}}}});
  CHECK_THAT(c.dispersive.omega_b, WithinRel(2 * std::numbers::pi * 50e6, 1e-15));
  CHECK_THAT(c.dispersive.wavelength, WithinRel(1550e-9, 1e-15));
  CHECK(c.dispersive.temperature == 0.2);
  // The magnon detuning follows the mechanical frequency unless given.
  CHECK(c.dispersive.delta_m == c.dispersive.omega_b);
  CHECK_THAT(c.schedule.switch_off_phase, WithinRel(std::numbers::pi / 2, 1e-15));
  CHECK(c.ode.rtol == 1e-7);
}

TEST_CASE("schema violations report the offending path") {
  CHECK(schema_path({{"kappa", 1.0}}) == "/kappa");
  CHECK(schema_path({{"temperature_k", "cold"}}) == "/temperature_k");
  CHECK(schema_path({{"model", "quantum"}}) == "/model");
  CHECK(schema_path({{"model", 3}}) == "/model");
  CHECK(schema_path(json::array()) == "/");
  CHECK(schema_path({{"schedule", json::object()}}) == "/schedule");
  CHECK(schema_path({{"model", "dispersive"}, {"schedule", {{"sample_count", 1}}}}) ==
        "/schedule/sample_count");
  CHECK(schema_path({{"model", "dispersive"}, {"schedule", {{"sample_count", 10.5}}}}) ==
        "/schedule/sample_count");
  CHECK(schema_path({{"model", "dispersive"}, {"magnon_drive", {{"field_t", 1e-6}}}}) ==
        "/magnon_drive");
  CHECK(schema_path({{"tolerances", {{"rel", 1e-6}}}}) == "/tolerances/rel");
  CHECK(schema_path({{"drive", {{"p_plus_mw", 20.0}}}}) == "/drive/p_minus_mw");
}

TEST_CASE("drive powers and direct couplings are mutually exclusive") {
  const json doc = {{"drive", {{"p_minus_mw", 26.4}, {"p_plus_mw", 15.0}}}, {"ratio", 0.5}};
  CHECK(schema_path(doc) == "/drive");

  const Config c = parse_config({{"drive", {{"p_minus_mw", 26.41}, {"p_plus_mw", 15.0}}}});
  const auto g = c.linear.couplings();
  CHECK_THAT(g.minus, WithinRel(LinearOmmParams{}.couplings().minus, 0.01));
  CHECK(g.plus < g.minus);
}

TEST_CASE("physical checks run separately from the schema") {
  Config c = parse_config({{"ratio", 1.2}});
  CHECK_THROWS_AS(check_physical(c), StabilityError);
  CHECK_THROWS_WITH(check_physical(c), ContainsSubstring("G+ < G-"));
  c = parse_config({{"kappa_a_hz", -1.0}});
  CHECK_THROWS_AS(check_physical(c), DomainError);
  c = parse_config({{"tolerances", {{"rtol", 0.0}}}});
  CHECK_THROWS_AS(check_physical(c), DomainError);
  c = parse_config({{"model", "dispersive"}, {"schedule", {{"interlude_s", -1.0}}}});
  CHECK_THROWS_AS(check_physical(c), DomainError);
}

TEST_CASE("with_value patches a JSON pointer") {
  const json base = {{"temperature_k", 0.01}, {"drive", {{"p_minus_mw", 1.0}}}};
  CHECK(with_value(base, "temperature_k", 0.5)["temperature_k"] == 0.5);
  CHECK(with_value(base, "/drive/p_minus_mw", 2.0)["drive"]["p_minus_mw"] == 2.0);
  CHECK(with_value(json(), "ratio", 0.3)["ratio"] == 0.3);
  CHECK(base["temperature_k"] == 0.01);
  CHECK_THROWS_AS(with_value(base, "/temperature_k/x", 1.0), SchemaError);
}

TEST_CASE("configuration files") {
  CHECK(parse_config_file(write_temp("magsq_empty.json", "  \n")).kind == ModelKind::linear);
  CHECK_THROWS_AS(parse_config_file(write_temp("magsq_bad.json", "{\"ratio\": ")), SchemaError);
  CHECK_THROWS_AS(parse_config_file("/nonexistent/magsq.json"), SchemaError);
  const auto c = parse_config_file(write_temp("magsq_dis.json", "{\"model\": \"dispersive\"}"));
  CHECK(c.kind == ModelKind::dispersive);
  CHECK(to_string(c.kind) == "dispersive");
}
