#include <catch2/catch_amalgamated.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "magsq/cli.hpp"
#include "magsq/scenarios.hpp"

using namespace magsq;
using Catch::Matchers::ContainsSubstring;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run cli(std::vector<std::string> args) {
  std::vector<const char*> argv = {"magsq"};
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path temp_file(const std::string& name, const std::string& text) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream(path) << text;
  return path;
}

std::filesystem::path fresh_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / name;
  std::filesystem::remove_all(dir);
  return dir;
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("steady prints a one-line summary") {
  const auto r = cli({"steady"});
  CHECK(r.code == kExitOk);
  CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 1);
  CHECK_THAT(r.out, ContainsSubstring("S_m = "));
  CHECK_THAT(r.out, ContainsSubstring("N_B = "));

  const auto d = cli({"steady", "-c", temp_file("magsq_cli_dis.json", "{\"model\": \"dispersive\"}").string()});
  CHECK(d.code == kExitOk);
  CHECK_THAT(d.out, ContainsSubstring("S_b = 13."));
}

TEST_CASE("usage errors exit with 2") {
  CHECK(cli({}).code == kExitUsage);
  CHECK(cli({"frobnicate"}).code == kExitUsage);
  CHECK(cli({"sweep"}).code == kExitUsage);
  CHECK(cli({"reproduce", "fig4"}).code == kExitUsage);
  CHECK(cli({"steady", "-c", "/nonexistent.json"}).code == kExitUsage);
  CHECK(cli({"sweep", "-p", "ratio"}).code == kExitUsage);
  CHECK(cli({"wigner", "--mode", "photon"}).code == kExitUsage);
}

TEST_CASE("schema violations exit with 2 and name the field") {
  const auto path = temp_file("magsq_cli_schema.json", "{\"temperature_k\": \"cold\"}");
  const auto r = cli({"validate", path.string()});
  CHECK(r.code == kExitUsage);
  CHECK_THAT(r.err, ContainsSubstring("/temperature_k"));
  const auto bad_json = temp_file("magsq_cli_bad.json", "{");
  CHECK(cli({"validate", bad_json.string()}).code == kExitUsage);
}

TEST_CASE("physical violations exit with 3") {
  const auto path = temp_file("magsq_cli_unstable.json", "{\"ratio\": 1.2}");
  const auto r = cli({"validate", path.string()});
  CHECK(r.code == kExitPhysical);
  CHECK_THAT(r.err, ContainsSubstring("stability"));
  CHECK(cli({"steady", "-c", path.string()}).code == kExitPhysical);
  const auto negative = temp_file("magsq_cli_negative.json", "{\"kappa_a_hz\": -2e6}");
  CHECK(cli({"validate", negative.string()}).code == kExitPhysical);
  CHECK(cli({"protocol"}).code == kExitPhysical);

  const auto ok = temp_file("magsq_cli_ok.json", "{\"model\": \"dispersive\"}");
  const auto v = cli({"validate", ok.string()});
  CHECK(v.code == kExitOk);
  CHECK_THAT(v.out, ContainsSubstring("dispersive"));
}

TEST_CASE("reproduce writes exactly what the scenario exports") {
  const auto via_cli = fresh_dir("magsq_cli_fig3");
  const auto direct = fresh_dir("magsq_direct_fig3");
  const auto r = cli({"reproduce", "fig3", "--out", via_cli.string()});
  REQUIRE(r.code == kExitOk);
  CHECK_THAT(r.out, ContainsSubstring("T=0.01K/N_B_at_optimum"));
  const auto entries = export_result(run_scenario(ScenarioSpec{"fig3"}), direct);
  for (const auto& e : entries) CHECK(slurp(via_cli / e.file) == slurp(direct / e.file));
  CHECK(slurp(via_cli / "manifest.json") == slurp(direct / "manifest.json"));
}

TEST_CASE("sweep and wigner subcommands") {
  const auto s = cli({"sweep", "-p", "ratio", "--values", "0.5", "0.76", "1.1"});
  CHECK(s.code == kExitOk);
  CHECK_THAT(s.out, ContainsSubstring("ratio,V_q,S_q [dB]"));
  CHECK_THAT(s.out, ContainsSubstring("\n1.1,nan"));
  const auto t = cli({"sweep", "-p", "/temperature_k", "--from", "0.01", "--to", "1", "--points", "3"});
  CHECK(t.code == kExitOk);
  CHECK(std::count(t.out.begin(), t.out.end(), '\n') == 4);

  const auto dir = fresh_dir("magsq_cli_wigner");
  const auto w = cli({"wigner", "--mode", "magnon", "--points", "11", "-o", dir.string()});
  CHECK(w.code == kExitOk);
  CHECK(std::filesystem::exists(dir / "wigner.csv"));
  CHECK(std::filesystem::exists(dir / "wigner.svg"));
}

TEST_CASE("protocol subcommand on a short horizon") {
  const auto cfg = temp_file(
      "magsq_cli_protocol.json",
      R"({"model": "dispersive", "schedule": {"horizon_s": 5e-7, "sample_count": 51}})");
  const auto dir = fresh_dir("magsq_cli_protocol");
  const auto r = cli({"protocol", "-c", cfg.string(), "--no-full", "-o", dir.string()});
  CHECK(r.code == kExitOk);
  CHECK_THAT(r.out, ContainsSubstring("S_m_max_dB = "));
  CHECK_THAT(slurp(dir / "protocol.csv"), !ContainsSubstring("full"));
}

TEST_CASE("installed executable honours the exit-code contract") {
  const char* exe = std::getenv("MAGSQ_CLI");
  if (exe == nullptr) SKIP("MAGSQ_CLI not set");
  const std::string quiet = " >/dev/null 2>&1";
  const auto status = [&](const std::string& args) {
    const int raw = std::system((std::string(exe) + " " + args + quiet).c_str());
    return WEXITSTATUS(raw);
  };
  CHECK(status("steady") == 0);
  CHECK(status("frobnicate") == 2);
  CHECK(status("validate " + temp_file("magsq_exe_bad.json", "{\"ratio\": 1.2}").string()) == 3);
}
