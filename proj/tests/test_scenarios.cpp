#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "magsq/scenarios.hpp"
#include "oracles.hpp"

using namespace magsq;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;
using nlohmann::json;

namespace {

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

/// Trapezoid integral of a Wigner table.
double wigner_mass(const Table& t) {
  const std::size_t n = t.rows.size();
  Eigen::MatrixXd w(n, t.header.size() - 1);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 1; j < t.rows[i].size(); ++j) w(i, j - 1) = t.rows[i][j];
  }
  const double dq = std::stod(t.header[2]) - std::stod(t.header[1]);
  const double dp = t.rows[1][0] - t.rows[0][0];
  return oracle::trapezoid_2d(w, dq, dp);
}

std::filesystem::path fresh_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / name;
  std::filesystem::remove_all(dir);
  return dir;
}

}  // namespace

TEST_CASE("steady sweep over the ratio matches the linear model directly") {
  const std::vector<double> grid = {0.1, 0.5, 0.76, 0.9, 1.0, 1.1};
  const auto trace = sweep(json::object(), {"ratio", grid, SweepMetric::steady});
  const auto ref = squeezing_vs_ratio(LinearOmmParams{}, grid);
  REQUIRE(trace.size() == grid.size());
  CHECK(trace.stable == ref.stable);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!ref.stable[i]) {
      CHECK(std::isnan(trace.squeezing_of("Y_m")[i]));
      continue;
    }
    CHECK_THAT(trace.squeezing_of("Y_m")[i], WithinAbs(ref.squeezing_of("Y_m")[i], 1e-12));
    CHECK_THAT(trace.squeezing_of("q")[i], WithinAbs(ref.squeezing_of("q")[i], 1e-12));
  }
}

TEST_CASE("sweeping the temperature with the optimum metric") {
  const std::vector<double> temps = {0.01, 0.5, 1.0};
  const auto trace = sweep(json::object(), {"/temperature_k", temps, SweepMetric::optimum});
  CHECK(trace.axis_unit == "K");
  const auto& s_m = trace.squeezing_of("Y_m");
  CHECK(s_m[0] > s_m[1]);
  CHECK(s_m[1] > s_m[2]);
  CHECK(s_m[2] > 0.0);
  for (const double r : trace.extra_of("optimal_ratio")) CHECK((r > 0.5 && r < 1.0));
}

TEST_CASE("sweep argument checks") {
  const auto empty = sweep(json::object(), {"ratio", {}, SweepMetric::steady});
  CHECK(empty.size() == 0);
  CHECK_THROWS_AS(sweep(json::object(), {"kappa", {1.0}, SweepMetric::steady}), SchemaError);
  CHECK_THROWS_AS(sweep(json::object(), {"ratio", {0.1, 0.3, 0.2}, SweepMetric::steady}),
                  DomainError);
  CHECK_THROWS_AS(sweep(json::object(), {"ratio", {0.1, 0.1}, SweepMetric::steady}),
                  DomainError);
  CHECK_THROWS_AS(sweep(json::object(), {"ratio", {0.5}, SweepMetric::protocol}), ConfigError);
  CHECK_THROWS_AS(sweep(json{{"model", "dispersive"}}, {"ratio", {0.5}, SweepMetric::optimum}),
                  ConfigError);
  // Decreasing grids are allowed.
  CHECK(sweep(json::object(), {"ratio", {0.6, 0.4}, SweepMetric::steady}).size() == 2);
  CHECK_THROWS_AS(parse_metric("peak"), ConfigError);
}

TEST_CASE("dispersive sweeps") {
  const json doc = {{"model", "dispersive"}};
  const auto steady = sweep(doc, {"ratio", {0.9, 0.95}, SweepMetric::steady});
  CHECK(steady.quadratures == std::vector<std::string>{"q"});
  CHECK_THAT(steady.squeezing_of("q")[1], WithinAbs(13.0, 0.5));

  const json short_run = {{"model", "dispersive"},
                          {"schedule", {{"horizon_s", 6e-7}, {"sample_count", 61}}}};
  const auto protocol = sweep(short_run, {"/schedule/switch_off_phase_pi", {0.0, 0.5},
                                          SweepMetric::protocol});
  CHECK(protocol.stable == std::vector<bool>{true, true});
  CHECK(protocol.squeezing_of("Y_m")[0] > 0.0);
}

TEST_CASE("ratio grid") {
  const auto g = ratio_grid(0.02, 0.005, 0.76, 0.05);
  CHECK(g.front() == 0.0);
  CHECK_THAT(g.back(), WithinAbs(0.99, 1e-12));
  for (std::size_t i = 1; i < g.size(); ++i) CHECK(g[i] - g[i - 1] > 1e-9);
  CHECK(std::count_if(g.begin(), g.end(), [](double r) { return std::abs(r - 0.76) < 1e-12; }) == 1);
  const auto fine = std::count_if(g.begin(), g.end(), [](double r) { return r > 0.71 && r < 0.81; });
  CHECK(fine >= 19);
}

TEST_CASE("wigner window and table layout") {
  Eigen::Matrix2d cov;
  cov << 4.0, 0.0, 0.0, 0.1;
  const auto w = default_wigner_window(cov);
  CHECK_THAT(w.q_extent, WithinRel(10.0, 1e-15));
  CHECK_THAT(w.p_extent, WithinRel(5.0 * std::sqrt(0.5), 1e-15));

  GaussianState state(Vector::Zero(2), Matrix(cov));
  const Table t = wigner_table("w", state, 5, {2.0, 1.0});
  CHECK(t.header == std::vector<std::string>{"p\\q", "-2", "-1", "0", "1", "2"});
  REQUIRE(t.rows.size() == 5);
  CHECK(t.rows.front()[0] == -1.0);
  CHECK(t.rows.back()[0] == 1.0);
  CHECK(t.rows[2][3] == Catch::Approx(1.0 / (2 * M_PI * std::sqrt(cov.determinant()))));
}

TEST_CASE("scenario Wigner tables are normalised") {
  ScenarioSpec fig2{"fig2"};
  const auto r2 = run_scenario(fig2);
  CHECK_THAT(wigner_mass(r2.table("fig2c")), WithinAbs(1.0, 1e-4));
  CHECK_THAT(wigner_mass(r2.table("fig2d")), WithinAbs(1.0, 1e-4));
  CHECK(r2.table("fig2c").rows.size() == 201);
  const auto r5 = run_scenario(ScenarioSpec{"fig5"});
  CHECK_THAT(wigner_mass(r5.table("fig5b")), WithinAbs(1.0, 1e-4));
}

TEST_CASE("fig2 tables agree with the ratio optimum") {
  const auto r = run_scenario(ScenarioSpec{"fig2"});
  const Table& b = r.table("fig2b");
  CHECK(b.header == std::vector<std::string>{"G+/G-", "V_Ym", "S_m [dB]", "N_B", "stable"});
  double best = -1e9;
  for (const auto& row : b.rows) {
    if (row[4] == 1.0) best = std::max(best, row[2]);
  }
  CHECK(best <= *r.metric("S_m_max_dB") + 1e-9);
  CHECK(best > *r.metric("S_m_max_dB") - 0.01);
  CHECK_FALSE(r.metric("no such key").has_value());
  CHECK_THROWS_AS(r.table("fig9"), DomainError);
}

TEST_CASE("export naming, manifest and determinism") {
  const auto r = run_scenario(ScenarioSpec{"fig3"});
  const auto dir1 = fresh_dir("magsq_fig3_a");
  const auto dir2 = fresh_dir("magsq_fig3_b");
  const auto entries = export_result(r, dir1);
  std::vector<std::string> names;
  for (const auto& e : entries) names.push_back(e.file);
  CHECK(names == std::vector<std::string>{"fig3a.csv", "fig3a.svg", "fig3b.csv", "fig3b.svg"});
  for (const auto& e : entries) {
    const std::string bytes = slurp(dir1 / e.file);
    CHECK(e.bytes == bytes.size());
    CHECK(e.sha256 == sha256_hex(bytes));
  }
  const json manifest = json::parse(slurp(dir1 / "manifest.json"));
  CHECK(manifest["scenario"] == "fig3");
  CHECK(manifest["files"].size() == 4);

  export_result(run_scenario(ScenarioSpec{"fig3"}), dir2);
  for (const auto& name : {"fig3a.csv", "fig3a.svg", "fig3b.csv", "fig3b.svg", "manifest.json"}) {
    CHECK(slurp(dir1 / name) == slurp(dir2 / name));
  }
}

TEST_CASE("csv and digest helpers") {
  Table t{"t", {"a", "b [dB]"}, {{1.0, -0.0}, {0.1, std::nan("")}}};
  CHECK(to_csv(t) == "a,b [dB]\n1,0\n0.1,nan\n");
  CHECK(sha256_hex("abc") ==
        "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("scenario errors carry the scenario name") {
  CHECK_THROWS_AS(run_scenario(ScenarioSpec{"fig7"}), ConfigError);
  ScenarioSpec bad{"fig2"};
  bad.overrides = {{"kappa", 1.0}};
  CHECK_THROWS_AS(run_scenario(bad), SchemaError);
  CHECK_THROWS_WITH(run_scenario(bad), ContainsSubstring("fig2: "));
  ScenarioSpec unstable{"fig5"};
  unstable.overrides = {{"gamma_b_hz", -1.0}};
  CHECK_THROWS_AS(run_scenario(unstable), DomainError);
  ScenarioSpec custom{"custom"};
  CHECK_THROWS_AS(run_scenario(custom), ConfigError);
  custom.axis_path = "temperature_k";
  custom.axis_grid = {0.01, 0.1};
  const auto r = run_scenario(custom);
  CHECK(r.table("sweep").rows.size() == 2);
  CHECK(*r.metric("stable_points") == 2.0);
}

TEST_CASE("a ratio sweep over the fig2 axis reproduces the fig2 table") {
  const auto r = run_scenario(ScenarioSpec{"fig2"});
  const Table& a = r.table("fig2a");
  const Table& b = r.table("fig2b");
  std::vector<double> axis;
  for (const auto& row : a.rows) axis.push_back(row[0]);
  CHECK(axis.front() == 0.0);
  CHECK_THAT(axis.back(), WithinAbs(0.99, 1e-12));
  const auto trace = sweep(json::object(), {"/ratio", axis, SweepMetric::steady});
  for (std::size_t i = 0; i < axis.size(); ++i) {
    CHECK(a.rows[i][1] == trace.variance_of("q")[i]);
    CHECK(b.rows[i][1] == trace.variance_of("Y_m")[i]);
    CHECK(b.rows[i][3] == trace.extra_of("N_B")[i]);
  }
}
