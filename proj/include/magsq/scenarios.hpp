#pragma once

// Figure reproductions and parameter sweeps.
//
//   fig2  stationary S_b and S_m versus G₊/G₋, Wigner functions at ratio 0.76
//   fig3  S_m and N_B versus G₊/G₋ at T = 0.01, 0.5, 1.0 K
//   fig5  step-1 S_b and N_B versus G₊/G₋, mechanical Wigner function at 0.95
//   fig6  transient magnon squeezing for four switch-off phases, RWA and full
//
// Scenario outputs are plain tables (CSV) and SVG figures, written together
// with a manifest of SHA-256 hashes by export_result.

#include <filesystem>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "magsq/config.hpp"
#include "magsq/gaussian.hpp"

namespace magsq {

struct ScenarioSpec {
  std::string name;  // fig2 | fig3 | fig5 | fig6 | custom
  /// Patch merged over the model defaults before parsing.
  nlohmann::json overrides = nlohmann::json::object();
  std::filesystem::path output;
  double ratio_step = 0.02;
  double fine_step = 0.005;
  double fine_half_width = 0.05;
  std::size_t wigner_points = 201;
  std::optional<double> wigner_extent;
  std::optional<std::size_t> time_samples;
  /// custom only: sweep definition.
  std::optional<std::string> axis_path;
  std::vector<double> axis_grid;
  std::string metric = "steady";
};

struct Table {
  std::string name;
  std::vector<std::string> header;  // "column [unit]"
  std::vector<std::vector<double>> rows;
};

struct Figure {
  std::string name;
  std::string svg;
};

struct ScenarioResult {
  std::string name;
  std::vector<Table> tables;
  std::vector<Figure> figures;
  std::vector<std::pair<std::string, double>> summary;
  std::vector<std::string> warnings;
  double runtime_seconds = 0.0;  // reported, not exported

  std::optional<double> metric(const std::string& key) const;
  const Table& table(const std::string& table_name) const;
};

/// Scenario names accepted by run_scenario.
const std::vector<std::string>& scenario_names();

/// Throws ConfigError for unknown names; errors from the physics layer are
/// rethrown with the scenario name prepended.
ScenarioResult run_scenario(const ScenarioSpec& spec);

enum class SweepMetric {
  steady,   // steady state at the configured ratio
  optimum,  // linear model only: optimal ratio per point
  protocol  // dispersive model only: peak transient magnon squeezing (RWA)
};

SweepMetric parse_metric(const std::string& name);

struct AxisSpec {
  std::string path;  // JSON pointer into the configuration document
  std::vector<double> grid;
  SweepMetric metric = SweepMetric::steady;
};

/// One point per grid value; points whose drift is unstable are kept with
/// NaN values and `stable = false`. Unknown paths raise SchemaError.
SqueezingTrace sweep(const nlohmann::json& config, const AxisSpec& axis);

/// Ratio grid: `coarse` steps on [0, 0.99] merged with `fine` steps on
/// [center − half_width, center + half_width] ∩ [0, 0.99].
std::vector<double> ratio_grid(double coarse, double fine, double center,
                               double half_width);

struct WignerWindow {
  double q_extent = 0.0;
  double p_extent = 0.0;
};

/// Per-axis half-widths: 5 standard deviations of the marginal or of the
/// vacuum, whichever is larger.
WignerWindow default_wigner_window(const Eigen::Matrix2d& cov);

/// Wigner table of a single-mode state on points × points samples centred on
/// the mean: the header holds the q axis, the first column the p axis.
Table wigner_table(const std::string& name, const GaussianState& mode_state,
                   std::size_t points, WignerWindow window);

struct ManifestEntry {
  std::string file;
  std::string sha256;
  std::uintmax_t bytes = 0;
};

/// Write `<table>.csv`, `<figure>.svg` and manifest.json into `directory`.
/// Returns the entries of the data files in name order.
std::vector<ManifestEntry> export_result(const ScenarioResult& result,
                                         const std::filesystem::path& directory);

std::string to_csv(const Table& table);
std::string sha256_hex(const std::string& bytes);

}  // namespace magsq
