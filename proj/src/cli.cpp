#include "magsq/cli.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "magsq/config.hpp"
#include "magsq/dispersive_system.hpp"
#include "magsq/errors.hpp"
#include "magsq/linear_system.hpp"
#include "magsq/plot.hpp"
#include "magsq/scenarios.hpp"

namespace magsq {

using nlohmann::json;

namespace {

struct Options {
  std::string config_path;
  std::string out_dir;
  std::optional<double> rtol, atol;
  bool verbose = false;

  // sweep
  std::string param;
  std::vector<double> values;
  std::optional<double> from, to;
  std::size_t points = 21;
  std::string metric = "steady";

  // wigner
  std::string mode = "mechanics";
  std::size_t wigner_points = 201;
  std::optional<double> extent;

  // protocol
  bool no_full = false;

  // reproduce / validate
  std::string figure;
  std::string file;
};

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

json read_document(const std::string& path) {
  if (path.empty()) return json::object();
  std::ifstream in(path);
  if (!in) throw SchemaError(path, "cannot open configuration file");
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();
  if (text.find_first_not_of(" \t\r\n") == std::string::npos) return json::object();
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError(path, std::string("invalid JSON: ") + e.what());
  }
}

json load_document(const Options& o, const std::string& path) {
  json doc = read_document(path);
  if (!doc.is_object()) throw SchemaError("/", "expected an object");
  if (o.rtol) doc["tolerances"]["rtol"] = *o.rtol;
  if (o.atol) doc["tolerances"]["atol"] = *o.atol;
  return doc;
}

void print_warnings(const std::vector<std::string>& warnings, std::ostream& err) {
  for (const auto& w : warnings) err << "warning: " << w << "\n";
}

void print_summary(const ScenarioResult& result, std::ostream& out) {
  for (const auto& [key, value] : result.summary) out << key << " = " << fmt(value) << "\n";
}

void finish(const ScenarioResult& result, const Options& o, std::ostream& out,
            std::ostream& err) {
  print_summary(result, out);
  print_warnings(result.warnings, err);
  if (!o.out_dir.empty()) {
    const auto files = export_result(result, o.out_dir);
    if (o.verbose) {
      for (const auto& f : files) err << "wrote " << (std::filesystem::path(o.out_dir) / f.file).string() << "\n";
    }
  }
  if (o.verbose) err << "runtime: " << fmt(result.runtime_seconds) << " s\n";
}

int cmd_steady(const Options& o, std::ostream& out, std::ostream& err) {
  const Config cfg = parse_config(load_document(o, o.config_path));
  check_physical(cfg);
  if (cfg.kind == ModelKind::linear) {
    const SteadyReport r = steady_state(cfg.linear);
    out << "model = linear, G+/G- = " << fmt(r.couplings.plus / r.couplings.minus)
        << ", S_m = " << fmt(r.s_m) << " dB, S_b = " << fmt(r.s_b)
        << " dB, N_B = " << fmt(r.n_b) << ", margin = " << fmt(r.margin) << " rad/s\n";
    print_warnings(build_model(cfg.linear).warnings, err);
  } else {
    const Step1Report r = step1_steady(cfg.dispersive);
    out << "model = dispersive (step 1), G+/G- = "
        << fmt(r.couplings.plus / r.couplings.minus) << ", S_b = " << fmt(r.s_b)
        << " dB, N_B = " << fmt(r.n_b) << ", margin = " << fmt(r.margin) << " rad/s\n";
  }
  return kExitOk;
}

int cmd_protocol(const Options& o, std::ostream& out, std::ostream& err) {
  const Config cfg = parse_config(load_document(o, o.config_path));
  if (cfg.kind != ModelKind::dispersive) {
    throw ConfigError("protocol requires \"model\": \"dispersive\"");
  }
  check_physical(cfg);
  const auto start = std::chrono::steady_clock::now();
  ProtocolOptions options;
  options.include_full = !o.no_full;
  options.ode = cfg.ode;
  const ProtocolResult r = run_protocol(cfg.dispersive, cfg.schedule, options);

  ScenarioResult result;
  result.name = "protocol";
  result.summary = {{"S_b_step1_dB", r.step1.s_b},
                    {"N_B_step1", r.step1.n_b},
                    {"interlude_s", r.interlude.duration},
                    {"Re_b0", r.interlude.mean_b_end.real()},
                    {"Im_b0", r.interlude.mean_b_end.imag()},
                    {"rabi_over_2pi_Hz", to_hz(std::abs(r.rabi))},
                    {"horizon_s", r.horizon},
                    {"S_m_max_dB", r.s_m_max},
                    {"t_max_s", r.t_max}};
  if (r.s_m_max_full) result.summary.emplace_back("S_m_max_full_dB", *r.s_m_max_full);
  result.warnings = r.warnings;

  Table table{"protocol", {"t [s]", "V_Xm(RWA)", "V_Ym(RWA)", "S_m(RWA) [dB]", "|G_m|/2pi [Hz]"}, {}};
  if (r.full) {
    table.header.push_back("V_Ym(full)");
    table.header.push_back("S_m(full) [dB]");
  }
  for (std::size_t i = 0; i < r.rwa.size(); ++i) {
    std::vector<double> row = {r.rwa.axis[i], r.rwa.variance_of("X_m")[i],
                               r.rwa.variance_of("Y_m")[i], r.rwa.squeezing_of("Y_m")[i],
                               r.rwa.extra_of("|G_m|/2pi")[i]};
    if (r.full) {
      row.push_back(r.full->variance_of("Y_m")[i]);
      row.push_back(r.full->squeezing_of("Y_m")[i]);
    }
    table.rows.push_back(std::move(row));
  }
  result.tables.push_back(std::move(table));

  std::vector<double> t_us;
  for (const double t : r.rwa.axis) t_us.push_back(t * 1e6);
  LinePlot plot{"Transient magnon squeezing", "t (us)", "S_m (dB)", {}, std::nullopt,
                std::nullopt, 0.0};
  plot.series.push_back({"RWA", t_us, r.rwa.squeezing_of("Y_m"), LineStyle::solid, "#1f4fbf"});
  if (r.full) {
    plot.series.push_back(
        {"without RWA", t_us, r.full->squeezing_of("Y_m"), LineStyle::dashed, "#d6336c"});
  }
  result.figures.push_back({"protocol", render_svg(plot)});
  result.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  finish(result, o, out, err);
  return kExitOk;
}

int cmd_sweep(const Options& o, std::ostream& out, std::ostream& err) {
  const json doc = load_document(o, o.config_path);
  check_physical(parse_config(doc));
  ScenarioSpec spec;
  spec.name = "custom";
  spec.overrides = doc;
  spec.axis_path = o.param;
  spec.metric = o.metric;
  if (!o.values.empty()) {
    spec.axis_grid = o.values;
  } else {
    if (!o.from || !o.to) throw SchemaError("--values", "give --values or both --from and --to");
    if (o.points < 1) throw SchemaError("--points", "must be >= 1");
    for (std::size_t i = 0; i < o.points; ++i) {
      spec.axis_grid.push_back(o.points == 1 ? *o.from
                                             : *o.from + (*o.to - *o.from) * static_cast<double>(i) /
                                                             static_cast<double>(o.points - 1));
    }
  }
  const ScenarioResult result = run_scenario(spec);
  if (o.out_dir.empty()) {
    // Without -o the table itself is the output.
    out << to_csv(result.tables.front());
    print_warnings(result.warnings, err);
    return kExitOk;
  }
  finish(result, o, out, err);
  return kExitOk;
}

int cmd_wigner(const Options& o, std::ostream& out, std::ostream& err) {
  const Config cfg = parse_config(load_document(o, o.config_path));
  check_physical(cfg);
  GaussianState state;
  Eigen::Index mode = 1;
  if (cfg.kind == ModelKind::linear) {
    state = steady_state(cfg.linear).state;
    if (o.mode == "cavity") mode = 0;
    else if (o.mode == "mechanics") mode = 1;
    else if (o.mode == "magnon") mode = 2;
    else throw SchemaError("--mode", "expected cavity, mechanics or magnon");
  } else {
    state = step1_steady(cfg.dispersive).state;
    if (o.mode == "cavity") mode = 0;
    else if (o.mode == "mechanics") mode = 1;
    else throw SchemaError("--mode", "expected cavity or mechanics for the dispersive model");
  }
  if (o.wigner_points < 2) throw SchemaError("--points", "must be >= 2");
  const GaussianState marginal = state.marginal(mode);
  WignerWindow window = default_wigner_window(marginal.cov);
  if (o.extent) {
    if (!(*o.extent > 0.0)) throw SchemaError("--extent", "must be positive");
    window = {*o.extent, *o.extent};
  }
  ScenarioResult result;
  result.name = "wigner";
  result.tables.push_back(wigner_table("wigner", marginal, o.wigner_points, window));
  result.figures.push_back(
      {"wigner", render_wigner_svg(marginal.cov, marginal.mean, window.q_extent,
                                   window.p_extent, "Wigner function (" + o.mode + ")",
                                   mode == 2 ? "X_m" : "q", mode == 2 ? "Y_m" : "p")});
  result.summary = {{"V_11", marginal.cov(0, 0)},
                    {"V_12", marginal.cov(0, 1)},
                    {"V_22", marginal.cov(1, 1)},
                    {"q_extent", window.q_extent},
                    {"p_extent", window.p_extent}};
  finish(result, o, out, err);
  return kExitOk;
}

int cmd_reproduce(const Options& o, std::ostream& out, std::ostream& err) {
  ScenarioSpec spec;
  spec.name = o.figure;
  spec.overrides = load_document(o, o.config_path);
  spec.output = o.out_dir;
  const ScenarioResult result = run_scenario(spec);
  finish(result, o, out, err);
  return kExitOk;
}

int cmd_validate(const Options& o, std::ostream& out, std::ostream&) {
  const Config cfg = parse_config(load_document(o, o.file));
  check_physical(cfg);
  out << o.file << ": ok (" << to_string(cfg.kind) << " model)\n";
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Magnon squeezing in optomagnomechanics"};
  app.name("magsq");
  app.require_subcommand(1);
  app.fallthrough();

  const auto add_common = [&](CLI::App* sub, bool with_out) {
    sub->add_option("-c,--config", o.config_path, "JSON parameter file")->check(CLI::ExistingFile);
    sub->add_option("--rtol", o.rtol, "relative integration tolerance");
    sub->add_option("--atol", o.atol, "absolute integration tolerance");
    sub->add_flag("-v,--verbose", o.verbose, "print runtime and written files");
    if (with_out) sub->add_option("-o,--out", o.out_dir, "output directory");
  };

  auto* steady = app.add_subcommand("steady", "steady-state report");
  add_common(steady, false);

  auto* protocol = app.add_subcommand("protocol", "two-step dispersive protocol");
  add_common(protocol, true);
  protocol->add_flag("--no-full", o.no_full, "skip the evolution without the RWA");

  auto* sweep_cmd = app.add_subcommand("sweep", "one-parameter sweep");
  add_common(sweep_cmd, true);
  sweep_cmd->add_option("-p,--param", o.param, "configuration key or JSON pointer")->required();
  sweep_cmd->add_option("--values", o.values, "explicit grid values");
  sweep_cmd->add_option("--from", o.from, "first grid value");
  sweep_cmd->add_option("--to", o.to, "last grid value");
  sweep_cmd->add_option("--points", o.points, "number of grid points");
  sweep_cmd->add_option("--metric", o.metric, "steady, optimum or protocol")
      ->check(CLI::IsMember({"steady", "optimum", "protocol"}));

  auto* wigner = app.add_subcommand("wigner", "steady-state Wigner function");
  add_common(wigner, true);
  wigner->add_option("--mode", o.mode, "cavity, mechanics or magnon");
  wigner->add_option("--points", o.wigner_points, "grid points per axis");
  wigner->add_option("--extent", o.extent, "half-width of the window");

  auto* reproduce = app.add_subcommand("reproduce", "regenerate a figure");
  add_common(reproduce, true);
  reproduce->add_option("figure", o.figure, "fig2, fig3, fig5 or fig6")
      ->required()
      ->check(CLI::IsMember({"fig2", "fig3", "fig5", "fig6"}));

  auto* validate = app.add_subcommand("validate", "check a configuration file");
  validate->add_option("file", o.file, "JSON parameter file")->required()->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    err << app.help();
    return kExitUsage;
  }

  try {
    if (steady->parsed()) return cmd_steady(o, out, err);
    if (protocol->parsed()) return cmd_protocol(o, out, err);
    if (sweep_cmd->parsed()) return cmd_sweep(o, out, err);
    if (wigner->parsed()) return cmd_wigner(o, out, err);
    if (reproduce->parsed()) return cmd_reproduce(o, out, err);
    if (validate->parsed()) return cmd_validate(o, out, err);
  } catch (const SchemaError& e) {
    err << "error: schema violation at " << e.what() << "\n";
    return kExitUsage;
  } catch (const IntegrationError& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitPhysical;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  err << app.help();
  return kExitUsage;
}

}  // namespace magsq
