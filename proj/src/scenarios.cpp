#include "magsq/scenarios.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

#include "magsq/dispersive_system.hpp"
#include "magsq/errors.hpp"
#include "magsq/linear_system.hpp"
#include "magsq/parallel.hpp"
#include "magsq/plot.hpp"
#include "magsq/search.hpp"

namespace magsq {

using nlohmann::json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kPi = std::numbers::pi;
constexpr double kRatioMax = 0.99;
const char* const kColors[] = {"#1f4fbf", "#d6336c", "#2f9e44", "#f08c00"};

std::string fmt(const char* pattern, double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, value);
  return buf;
}

std::vector<double> linspace(double a, double b, std::size_t n) {
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = n == 1 ? a : a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  if (n > 1) out.back() = b;
  return out;
}

json model_document(const json& overrides, ModelKind kind) {
  json doc = overrides.is_null() ? json::object() : overrides;
  if (!doc.is_object()) throw SchemaError("/", "overrides must be an object");
  if (const auto it = doc.find("model"); it != doc.end()) {
    if (*it != to_string(kind)) {
      throw ConfigError("scenario requires the " + to_string(kind) + " model");
    }
  } else {
    doc["model"] = to_string(kind);
  }
  return doc;
}

std::string unit_of(const std::string& path) {
  const auto ends = [&](const std::string& suffix) {
    return path.size() >= suffix.size() &&
           path.compare(path.size() - suffix.size(), suffix.size(), suffix) == 0;
  };
  if (ends("_hz")) return "Hz";
  if (ends("_k")) return "K";
  if (ends("_mw")) return "mW";
  if (ends("_nm")) return "nm";
  if (ends("_s")) return "s";
  if (ends("_pi")) return "pi rad";
  return "";
}

std::vector<double> merge_grids(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  std::vector<double> out;
  for (const double v : values) {
    if (out.empty() || v - out.back() > 1e-9) out.push_back(v);
  }
  return out;
}

double max_finite(const std::vector<double>& v) {
  double best = -std::numeric_limits<double>::infinity();
  for (const double x : v) {
    if (std::isfinite(x)) best = std::max(best, x);
  }
  return best;
}

void add_wigner(ScenarioResult& result, const std::string& name,
                const GaussianState& mode, const ScenarioSpec& spec,
                const std::string& title, const std::string& x_label,
                const std::string& y_label) {
  WignerWindow window = default_wigner_window(mode.cov);
  if (spec.wigner_extent) window = {*spec.wigner_extent, *spec.wigner_extent};
  result.tables.push_back(wigner_table(name, mode, spec.wigner_points, window));
  result.figures.push_back(
      {name, render_wigner_svg(mode.cov, mode.mean, window.q_extent, window.p_extent,
                               title, x_label, y_label)});
}

Table columns_table(const std::string& name, const std::vector<std::string>& header,
                    const std::vector<const std::vector<double>*>& columns) {
  Table table{name, header, {}};
  const std::size_t n = columns.empty() ? 0 : columns.front()->size();
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> row;
    for (const auto* c : columns) row.push_back((*c)[i]);
    table.rows.push_back(std::move(row));
  }
  return table;
}

std::vector<double> stable_column(const SqueezingTrace& trace) {
  std::vector<double> out;
  for (const bool s : trace.stable) out.push_back(s ? 1.0 : 0.0);
  return out;
}

double stokes_power(double g, double g0, double kappa_a, double omega_b, double omega_a) {
  return power_from_coupling(g, g0, kappa_a, omega_b, omega_a - omega_b);
}

double anti_stokes_power(double g, double g0, double kappa_a, double omega_b,
                         double omega_a) {
  return power_from_coupling(g, g0, kappa_a, omega_b, omega_a + omega_b);
}

// fig2 -----------------------------------------------------------------------

ScenarioResult run_fig2(const ScenarioSpec& spec) {
  ScenarioResult result;
  const json doc = model_document(spec.overrides, ModelKind::linear);
  const Config cfg = parse_config(doc);
  const LinearOmmParams& p = cfg.linear;

  const RatioOptimum best = optimal_ratio(p);
  const auto grid = ratio_grid(spec.ratio_step, spec.fine_step, best.ratio,
                               spec.fine_half_width);
  const SqueezingTrace trace = sweep(doc, {"/ratio", grid, SweepMetric::steady});
  const auto stable = stable_column(trace);

  result.tables.push_back(columns_table(
      "fig2a", {"G+/G-", "V_q", "S_b [dB]", "stable"},
      {&trace.axis, &trace.variance_of("q"), &trace.squeezing_of("q"), &stable}));
  result.tables.push_back(columns_table(
      "fig2b", {"G+/G-", "V_Ym", "S_m [dB]", "N_B", "stable"},
      {&trace.axis, &trace.variance_of("Y_m"), &trace.squeezing_of("Y_m"),
       &trace.extra_of("N_B"), &stable}));

  result.figures.push_back(
      {"fig2a", render_svg({"Stationary mechanical squeezing", "G+/G-", "S_b (dB)",
                            {{"", trace.axis, trace.squeezing_of("q"), LineStyle::solid,
                              kColors[0]}},
                            std::pair{0.0, 1.0}, std::nullopt, 0.0})});
  result.figures.push_back(
      {"fig2b", render_svg({"Stationary magnon squeezing", "G+/G-", "S_m (dB)",
                            {{"", trace.axis, trace.squeezing_of("Y_m"), LineStyle::solid,
                              kColors[1]}},
                            std::pair{0.0, 1.0}, std::nullopt, 0.0})});

  const double wigner_ratio = 0.76;
  const SteadyReport at = steady_state(parse_config(with_value(doc, "/ratio", wigner_ratio)).linear);
  add_wigner(result, "fig2c", at.state.marginal(1), spec, "Mechanical Wigner function",
             "q", "p");
  add_wigner(result, "fig2d", at.state.marginal(2), spec, "Magnon Wigner function",
             "X_m", "Y_m");

  const SteadyReport opt = steady_state(p.with_ratio(best.ratio));
  const double g_minus = p.couplings().minus;
  result.summary = {
      {"optimal_ratio", best.ratio},
      {"S_m_max_dB", best.value},
      {"S_b_at_optimum_dB", opt.s_b},
      {"N_B_at_optimum", opt.n_b},
      {"margin_at_optimum_rad_per_s", opt.margin},
      {"S_b_grid_max_dB", max_finite(trace.squeezing_of("q"))},
      {"wigner_ratio", wigner_ratio},
      {"S_b_at_wigner_ratio_dB", at.s_b},
      {"S_m_at_wigner_ratio_dB", at.s_m},
      {"G_minus_over_2pi_Hz", to_hz(g_minus)},
      {"P_minus_mW", 1e3 * stokes_power(g_minus, p.g0, p.kappa_a, p.omega_b,
                                        p.cavity_frequency())},
  };
  result.warnings = build_model(p.with_ratio(best.ratio)).warnings;
  return result;
}

// fig3 -----------------------------------------------------------------------

ScenarioResult run_fig3(const ScenarioSpec& spec) {
  ScenarioResult result;
  const json doc = model_document(spec.overrides, ModelKind::linear);
  const std::vector<double> temperatures = {0.01, 0.5, 1.0};
  const std::vector<std::string> labels = {"0.01 K", "0.5 K", "1.0 K"};
  const LineStyle styles[] = {LineStyle::solid, LineStyle::dashed, LineStyle::dash_dot};

  std::vector<json> docs;
  std::vector<RatioOptimum> optima(temperatures.size());
  for (const double t : temperatures) docs.push_back(with_value(doc, "/temperature_k", t));
  parallel_for(temperatures.size(), [&](std::size_t i) {
    optima[i] = optimal_ratio(parse_config(docs[i]).linear);
  });

  std::vector<double> grid;
  for (const auto& o : optima) {
    const auto g = ratio_grid(spec.ratio_step, spec.fine_step, o.ratio, spec.fine_half_width);
    grid.insert(grid.end(), g.begin(), g.end());
  }
  grid = merge_grids(std::move(grid));

  std::vector<SqueezingTrace> traces;
  for (const auto& d : docs) traces.push_back(sweep(d, {"/ratio", grid, SweepMetric::steady}));

  std::vector<std::string> head_a = {"G+/G-"}, head_b = {"G+/G-"};
  std::vector<const std::vector<double>*> cols_a = {&grid}, cols_b = {&grid};
  LinePlot plot_a{"Stationary magnon squeezing", "G+/G-", "S_m (dB)", {}, std::pair{0.0, 1.0},
                  std::nullopt, 0.0};
  LinePlot plot_b{"Bogoliubov mode occupancy", "G+/G-", "N_B", {}, std::pair{0.0, 1.0},
                  std::nullopt, std::nullopt};
  for (std::size_t i = 0; i < temperatures.size(); ++i) {
    const std::string tag = "T=" + fmt("%g", temperatures[i]) + "K";
    head_a.push_back("S_m(" + tag + ") [dB]");
    head_b.push_back("N_B(" + tag + ")");
    cols_a.push_back(&traces[i].squeezing_of("Y_m"));
    cols_b.push_back(&traces[i].extra_of("N_B"));
    plot_a.series.push_back({"T = " + labels[i], grid, traces[i].squeezing_of("Y_m"),
                             styles[i], kColors[i]});
    plot_b.series.push_back({"T = " + labels[i], grid, traces[i].extra_of("N_B"), styles[i],
                             kColors[i]});
  }
  result.tables.push_back(columns_table("fig3a", head_a, cols_a));
  result.tables.push_back(columns_table("fig3b", head_b, cols_b));
  result.figures.push_back({"fig3a", render_svg(plot_a)});
  result.figures.push_back({"fig3b", render_svg(plot_b)});

  for (std::size_t i = 0; i < temperatures.size(); ++i) {
    const auto p = parse_config(docs[i]).linear;
    const SteadyReport r = steady_state(p.with_ratio(optima[i].ratio));
    const std::string tag = "T=" + fmt("%g", temperatures[i]) + "K/";
    result.summary.emplace_back(tag + "optimal_ratio", optima[i].ratio);
    result.summary.emplace_back(tag + "S_m_max_dB", optima[i].value);
    result.summary.emplace_back(tag + "N_B_at_optimum", r.n_b);
    result.summary.emplace_back(tag + "S_b_at_optimum_dB", r.s_b);
  }
  return result;
}

// fig5 -----------------------------------------------------------------------

ScenarioResult run_fig5(const ScenarioSpec& spec) {
  ScenarioResult result;
  const json doc = model_document(spec.overrides, ModelKind::dispersive);
  const Config cfg = parse_config(doc);
  const DispersiveOmmParams& p = cfg.dispersive;

  std::vector<double> coarse;
  for (int i = 0; i <= 99; ++i) coarse.push_back(0.01 * i);
  const auto objective = [&](double ratio) {
    try {
      return step1_steady(p.with_ratio(ratio)).s_b;
    } catch (const StabilityError&) {
      return kNaN;
    }
  };
  const Maximum best = scan_and_refine(objective, coarse, 1e-4);

  const auto grid = ratio_grid(spec.ratio_step, spec.fine_step, best.argument,
                               spec.fine_half_width);
  const SqueezingTrace trace = sweep(doc, {"/ratio", grid, SweepMetric::steady});
  const auto stable = stable_column(trace);
  result.tables.push_back(columns_table(
      "fig5a", {"G+/G-", "V_q", "S_b [dB]", "stable"},
      {&trace.axis, &trace.variance_of("q"), &trace.squeezing_of("q"), &stable}));
  result.figures.push_back(
      {"fig5a", render_svg({"Mechanical squeezing (step 1)", "G+/G-", "S_b (dB)",
                            {{"", trace.axis, trace.squeezing_of("q"), LineStyle::solid,
                              kColors[0]}},
                            std::pair{0.0, 1.0}, std::nullopt, 0.0})});

  const double wigner_ratio = 0.95;
  const Step1Report at = step1_steady(parse_config(with_value(doc, "/ratio", wigner_ratio)).dispersive);
  add_wigner(result, "fig5b", at.state.marginal(1), spec, "Mechanical Wigner function",
             "q", "p");

  result.tables.push_back(columns_table("fig5c", {"G+/G-", "N_B", "stable"},
                                        {&trace.axis, &trace.extra_of("N_B"), &stable}));
  result.figures.push_back(
      {"fig5c", render_svg({"Bogoliubov mode occupancy (step 1)", "G+/G-", "N_B",
                            {{"", trace.axis, trace.extra_of("N_B"), LineStyle::solid,
                              kColors[1]}},
                            std::pair{0.0, 1.0}, std::nullopt, std::nullopt})});

  const auto g = at.couplings;
  const double omega_a = p.cavity_frequency();
  result.summary = {
      {"S_b_max_dB", best.value},
      {"ratio_at_S_b_max", best.argument},
      {"ratio", wigner_ratio},
      {"S_b_dB", at.s_b},
      {"N_B", at.n_b},
      {"squeezing_parameter_r", at.bogoliubov.r},
      {"margin_rad_per_s", at.margin},
      {"G_minus_over_2pi_Hz", to_hz(g.minus)},
      {"P_minus_mW", 1e3 * stokes_power(g.minus, p.g0, p.kappa_a, p.omega_b, omega_a)},
      {"P_plus_mW", 1e3 * anti_stokes_power(g.plus, p.g0, p.kappa_a, p.omega_b, omega_a)},
  };
  return result;
}

// fig6 -----------------------------------------------------------------------

ScenarioResult run_fig6(const ScenarioSpec& spec) {
  ScenarioResult result;
  const json doc = model_document(spec.overrides, ModelKind::dispersive);
  const Config cfg = parse_config(doc);
  const DispersiveOmmParams& p = cfg.dispersive;

  const std::vector<std::pair<std::string, double>> panels = {
      {"fig6a", 0.5}, {"fig6b", 0.0}, {"fig6c", 0.2}, {"fig6d", 0.92}};
  std::vector<ProtocolResult> runs(panels.size());
  ProtocolOptions options;
  options.include_full = true;
  options.ode = cfg.ode;
  parallel_for(panels.size(), [&](std::size_t i) {
    ProtocolSchedule schedule = cfg.schedule;
    schedule.switch_off_phase = panels[i].second * kPi;
    if (spec.time_samples) schedule.sample_count = *spec.time_samples;
    runs[i] = run_protocol(p, schedule, options);
  });

  double s_max = -std::numeric_limits<double>::infinity();
  double s_min = std::numeric_limits<double>::infinity();
  double worst_gap = 0.0;
  for (std::size_t i = 0; i < panels.size(); ++i) {
    const auto& run = runs[i];
    const auto& [name, phase] = panels[i];
    std::vector<double> t_us;
    for (const double t : run.rwa.axis) t_us.push_back(t * 1e6);
    result.tables.push_back(columns_table(
        name,
        {"t [us]", "V_Ym(RWA)", "S_m(RWA) [dB]", "V_Ym(full)", "S_m(full) [dB]"},
        {&t_us, &run.rwa.variance_of("Y_m"), &run.rwa.squeezing_of("Y_m"),
         &run.full->variance_of("Y_m"), &run.full->squeezing_of("Y_m")}));
    const std::string title = "Transient magnon squeezing, switch-off phase " +
                              fmt("%g", phase) + " pi";
    result.figures.push_back(
        {name, render_svg({title, "t (us)", "S_m (dB)",
                           {{"RWA", t_us, run.rwa.squeezing_of("Y_m"), LineStyle::solid,
                             kColors[0]},
                            {"without RWA", t_us, run.full->squeezing_of("Y_m"),
                             LineStyle::dashed, kColors[1]}},
                           std::nullopt, std::nullopt, 0.0})});

    const std::string tag = "phase=" + fmt("%g", phase) + "pi/";
    result.summary.emplace_back(tag + "S_m_max_dB", run.s_m_max);
    result.summary.emplace_back(tag + "S_m_max_full_dB", *run.s_m_max_full);
    result.summary.emplace_back(tag + "t_max_us", run.t_max * 1e6);
    result.summary.emplace_back(tag + "Re_b0", run.interlude.mean_b_end.real());
    result.summary.emplace_back(tag + "Im_b0", run.interlude.mean_b_end.imag());
    s_max = std::max(s_max, run.s_m_max);
    s_min = std::min(s_min, run.s_m_max);
    worst_gap = std::max(worst_gap, std::abs(run.s_m_max - *run.s_m_max_full));
    for (const auto& w : run.warnings) {
      if (std::find(result.warnings.begin(), result.warnings.end(), w) == result.warnings.end()) {
        result.warnings.push_back(w);
      }
    }
  }
  const auto& first = runs.front();
  result.summary.insert(
      result.summary.begin(),
      {{"S_m_max_dB", s_max},
       {"phase_spread_dB", s_max - s_min},
       {"rwa_full_max_difference_dB", worst_gap},
       {"rabi_over_2pi_Hz", to_hz(std::abs(first.rabi))},
       {"S_b_step1_dB", first.step1.s_b},
       {"N_B_step1", first.step1.n_b},
       {"interlude_s", first.interlude.duration}});
  return result;
}

// custom ---------------------------------------------------------------------

ScenarioResult run_custom(const ScenarioSpec& spec) {
  if (!spec.axis_path) throw ConfigError("custom scenario requires an axis path");
  ScenarioResult result;
  const json doc = spec.overrides.is_null() ? json::object() : spec.overrides;
  const SqueezingTrace trace =
      sweep(doc, {*spec.axis_path, spec.axis_grid, parse_metric(spec.metric)});

  std::string axis_head = trace.axis_name;
  if (!trace.axis_unit.empty()) axis_head += " [" + trace.axis_unit + "]";
  std::vector<std::string> header = {axis_head};
  std::vector<const std::vector<double>*> cols = {&trace.axis};
  LinePlot plot{"Parameter sweep", axis_head, "squeezing (dB)", {}, std::nullopt,
                std::nullopt, 0.0};
  for (std::size_t q = 0; q < trace.quadratures.size(); ++q) {
    header.push_back("V_" + trace.quadratures[q]);
    header.push_back("S_" + trace.quadratures[q] + " [dB]");
    cols.push_back(&trace.variances[q]);
    cols.push_back(&trace.squeezing[q]);
    plot.series.push_back({"S_" + trace.quadratures[q], trace.axis, trace.squeezing[q],
                           q == 0 ? LineStyle::solid : LineStyle::dashed, kColors[q % 4]});
  }
  for (const auto& e : trace.extra) {
    header.push_back(e.unit.empty() ? e.name : e.name + " [" + e.unit + "]");
    cols.push_back(&e.values);
  }
  const auto stable = stable_column(trace);
  header.push_back("stable");
  cols.push_back(&stable);
  result.tables.push_back(columns_table("sweep", header, cols));
  result.figures.push_back({"sweep", render_svg(plot)});
  result.summary.emplace_back("points", static_cast<double>(trace.size()));
  result.summary.emplace_back(
      "stable_points",
      static_cast<double>(std::count(trace.stable.begin(), trace.stable.end(), true)));
  return result;
}

[[noreturn]] void rethrow_with_context(const std::string& name) {
  try {
    throw;
  } catch (const SchemaError& e) {
    throw SchemaError(e.path(), name + ": " + e.what());
  } catch (const StabilityError& e) {
    throw StabilityError(name + ": " + e.what(), e.margin());
  } catch (const IntegrationError& e) {
    throw IntegrationError(name + ": " + e.what(), e.time());
  } catch (const ConfigError& e) {
    throw ConfigError(name + ": " + e.what());
  } catch (const DomainError& e) {
    throw DomainError(name + ": " + e.what());
  } catch (const StateError& e) {
    throw StateError(name + ": " + e.what());
  } catch (const DegeneracyError& e) {
    throw DegeneracyError(name + ": " + e.what());
  } catch (const DimensionError& e) {
    throw DimensionError(name + ": " + e.what());
  }
}

}  // namespace

std::optional<double> ScenarioResult::metric(const std::string& key) const {
  for (const auto& [k, v] : summary) {
    if (k == key) return v;
  }
  return std::nullopt;
}

const Table& ScenarioResult::table(const std::string& table_name) const {
  for (const auto& t : tables) {
    if (t.name == table_name) return t;
  }
  throw DomainError("no table named " + table_name);
}

const std::vector<std::string>& scenario_names() {
  static const std::vector<std::string> names = {"fig2", "fig3", "fig5", "fig6", "custom"};
  return names;
}

ScenarioResult run_scenario(const ScenarioSpec& spec) {
  if (!(spec.ratio_step > 0.0) || !(spec.fine_step > 0.0) || !(spec.fine_half_width >= 0.0)) {
    throw ConfigError(spec.name + ": grid steps must be positive");
  }
  if (spec.wigner_points < 2) throw ConfigError(spec.name + ": wigner_points must be >= 2");
  if (spec.wigner_extent && !(*spec.wigner_extent > 0.0)) {
    throw ConfigError(spec.name + ": wigner extent must be positive");
  }
  const auto start = std::chrono::steady_clock::now();
  ScenarioResult result;
  try {
    if (spec.name == "fig2") {
      result = run_fig2(spec);
    } else if (spec.name == "fig3") {
      result = run_fig3(spec);
    } else if (spec.name == "fig5") {
      result = run_fig5(spec);
    } else if (spec.name == "fig6") {
      result = run_fig6(spec);
    } else if (spec.name == "custom") {
      result = run_custom(spec);
    } else {
      throw ConfigError("unknown scenario '" + spec.name +
                        "' (expected fig2, fig3, fig5, fig6 or custom)");
    }
  } catch (const Error&) {
    rethrow_with_context(spec.name);
  }
  result.name = spec.name;
  result.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

SweepMetric parse_metric(const std::string& name) {
  if (name == "steady") return SweepMetric::steady;
  if (name == "optimum") return SweepMetric::optimum;
  if (name == "protocol") return SweepMetric::protocol;
  throw ConfigError("unknown sweep metric '" + name + "' (expected steady, optimum or protocol)");
}

SqueezingTrace sweep(const json& config, const AxisSpec& axis) {
  const std::string pointer = axis.path.starts_with("/") ? axis.path : "/" + axis.path;
  // Schema-check the path before computing anything.
  const json probe = config.is_null() ? json::object() : config;
  const Config base = parse_config(with_value(probe, pointer, axis.grid.empty() ? 0.0 : axis.grid.front()));

  for (std::size_t i = 1; i < axis.grid.size(); ++i) {
    const double step = axis.grid[i] - axis.grid[i - 1];
    const double first = axis.grid[1] - axis.grid[0];
    if (!(step != 0.0) || (step > 0.0) != (first > 0.0)) {
      throw DomainError("sweep grid must be strictly monotone");
    }
  }

  const bool linear = base.kind == ModelKind::linear;
  if (axis.metric == SweepMetric::optimum && !linear) {
    throw ConfigError("the optimum metric applies to the linear model");
  }
  if (axis.metric == SweepMetric::protocol && linear) {
    throw ConfigError("the protocol metric applies to the dispersive model");
  }

  SqueezingTrace trace;
  trace.axis_name = pointer.substr(1);
  trace.axis_unit = unit_of(pointer);
  switch (axis.metric) {
    case SweepMetric::steady:
      if (linear) {
        trace.quadratures = {"q", "Y_m"};
      } else {
        trace.quadratures = {"q"};
      }
      trace.extra = {{"N_B", "", {}}, {"margin", "rad/s", {}}};
      break;
    case SweepMetric::optimum:
      trace.quadratures = {"q", "Y_m"};
      trace.extra = {{"optimal_ratio", "", {}}, {"N_B", "", {}}};
      break;
    case SweepMetric::protocol:
      trace.quadratures = {"Y_m"};
      trace.extra = {{"t_max", "s", {}}, {"horizon", "s", {}}};
      break;
  }
  const std::size_t nq = trace.quadratures.size();
  const std::size_t ne = trace.extra.size();
  const std::size_t n = axis.grid.size();

  struct Point {
    bool stable = false;
    std::vector<double> variances, extras;
  };
  std::vector<Point> points(n);
  parallel_for(n, [&](std::size_t i) {
    const Config cfg = parse_config(with_value(probe, pointer, axis.grid[i]));
    Point& pt = points[i];
    pt.variances.assign(nq, kNaN);
    pt.extras.assign(ne, kNaN);
    try {
      if (axis.metric == SweepMetric::steady && linear) {
        const SteadyReport r = steady_state(cfg.linear);
        pt.variances = {r.state.cov(linear::kQ, linear::kQ),
                        r.state.cov(linear::kYm, linear::kYm)};
        pt.extras = {r.n_b, r.margin};
      } else if (axis.metric == SweepMetric::steady) {
        const Step1Report r = step1_steady(cfg.dispersive);
        pt.variances = {r.state.cov(2, 2)};
        pt.extras = {r.n_b, r.margin};
      } else if (axis.metric == SweepMetric::optimum) {
        const RatioOptimum o = optimal_ratio(cfg.linear);
        const SteadyReport r = steady_state(cfg.linear.with_ratio(o.ratio));
        pt.variances = {r.state.cov(linear::kQ, linear::kQ),
                        r.state.cov(linear::kYm, linear::kYm)};
        pt.extras = {o.ratio, r.n_b};
      } else {
        ProtocolOptions options;
        options.include_full = false;
        options.ode = cfg.ode;
        const ProtocolResult r = run_protocol(cfg.dispersive, cfg.schedule, options);
        pt.variances = {variance_from_db(r.s_m_max)};
        pt.extras = {r.t_max, r.horizon};
      }
      pt.stable = true;
    } catch (const StabilityError&) {
      pt.variances.assign(nq, kNaN);
      pt.extras.assign(ne, kNaN);
    }
  });

  trace.variances.assign(nq, {});
  trace.squeezing.assign(nq, {});
  for (std::size_t i = 0; i < n; ++i) {
    trace.axis.push_back(axis.grid[i]);
    trace.stable.push_back(points[i].stable);
    for (std::size_t q = 0; q < nq; ++q) {
      const double v = points[i].variances[q];
      trace.variances[q].push_back(v);
      trace.squeezing[q].push_back(std::isfinite(v) ? squeezing_db(v) : kNaN);
    }
    for (std::size_t e = 0; e < ne; ++e) trace.extra[e].values.push_back(points[i].extras[e]);
  }
  return trace;
}

std::vector<double> ratio_grid(double coarse, double fine, double center,
                               double half_width) {
  if (!(coarse > 0.0) || !(fine > 0.0)) throw DomainError("grid steps must be positive");
  std::vector<double> values;
  // Integer multiples keep grid values reproducible across windows.
  for (long k = 0; k * coarse <= kRatioMax + 1e-12; ++k) values.push_back(k * coarse);
  values.push_back(kRatioMax);
  const double lo = std::max(0.0, center - half_width);
  const double hi = std::min(kRatioMax, center + half_width);
  for (long k = static_cast<long>(std::ceil(lo / fine - 1e-9));
       k * fine <= hi + 1e-12; ++k) {
    values.push_back(k * fine);
  }
  values.push_back(std::clamp(center, 0.0, kRatioMax));
  return merge_grids(std::move(values));
}

WignerWindow default_wigner_window(const Eigen::Matrix2d& cov) {
  const double vacuum = 5.0 * std::sqrt(0.5);
  return {std::max(vacuum, 5.0 * std::sqrt(std::max(cov(0, 0), 0.0))),
          std::max(vacuum, 5.0 * std::sqrt(std::max(cov(1, 1), 0.0)))};
}

Table wigner_table(const std::string& name, const GaussianState& mode_state,
                   std::size_t points, WignerWindow window) {
  if (mode_state.cov.rows() != 2) throw DimensionError("wigner_table expects a single mode");
  const double q0 = mode_state.mean(0), p0 = mode_state.mean(1);
  const auto q_axis = linspace(q0 - window.q_extent, q0 + window.q_extent, points);
  const auto p_axis = linspace(p0 - window.p_extent, p0 + window.p_extent, points);
  const Matrix w = wigner_grid(mode_state, 0, q_axis, p_axis);

  Table table;
  table.name = name;
  table.header.push_back("p\\q");
  for (const double q : q_axis) table.header.push_back(fmt("%.12g", q));
  for (std::size_t i = 0; i < points; ++i) {
    std::vector<double> row = {p_axis[i]};
    for (std::size_t j = 0; j < points; ++j) {
      row.push_back(w(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace magsq
