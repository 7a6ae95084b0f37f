#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <sstream>

#include <json.hpp>

#include "lastmile/cli.h"
#include "support.h"

using namespace lastmile;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run cli(std::vector<std::string> args) {
  args.insert(args.begin(), "lastmile");
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string data(const std::string& name) { return (support::data_dir() / name).string(); }

fs::path scratch_dir() {
  const auto dir = fs::temp_directory_path() / "lastmile_cli";
  fs::create_directories(dir);
  return dir;
}

std::string write(const std::string& name, const std::string& text) {
  const auto path = scratch_dir() / name;
  write_file_atomic(path, text);
  return path.string();
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("usage errors") {
  CHECK(cli({}).code == kExitUsage);
  CHECK(cli({"frobnicate"}).code == kExitUsage);
  CHECK(cli({"optimize"}).code == kExitUsage);
  CHECK(cli({"--dt", "-1", "simulate", data("fixture_scenario.json")}).code == kExitUsage);
  CHECK(cli({"--idm-model", "krauss", "simulate", data("fixture_scenario.json")}).code ==
        kExitUsage);
  const auto help = cli({"--help"});
  CHECK(help.code == kExitOk);
  CHECK(help.out.find("compare-exact") != std::string::npos);
  CHECK(cli({"--version"}).out.find(tool_version()) != std::string::npos);
}

TEST_CASE("parse errors") {
  const auto missing = cli({"optimize", "/nonexistent/scenario.json"});
  CHECK(missing.code == kExitParse);
  CHECK(missing.err.find("error [parse]") != std::string::npos);
  const auto no_net = write("lost_net.json",
                            R"({"network": "nowhere.json", "deliveries": [5], "vehicles": 1})");
  CHECK(cli({"optimize", no_net}).code == kExitParse);
  CHECK(cli({"pareto"}).code == kExitParse);
  const auto broken = write("broken.json", "{\"network\": ");
  CHECK(cli({"optimize", broken}).code == kExitParse);
  CHECK(cli({"--idm-params", broken, "simulate", data("fixture_scenario.json")}).code ==
        kExitParse);
}

TEST_CASE("validation errors") {
  const auto depot = write(
      "depot.json", "{\"network\": \"" + data("fixture_network.json") +
                        "\", \"deliveries\": [5, 0], \"vehicles\": 2}");
  const auto r = cli({"optimize", depot});
  CHECK(r.code == kExitValidation);
  CHECK(r.err.find("error [validation]") != std::string::npos);
  CHECK(cli({"--alpha", "1.5", "optimize", data("fixture_scenario.json")}).code ==
        kExitValidation);
  CHECK(cli({"simulate", "-k", "9", data("fixture_scenario.json")}).code == kExitValidation);
  CHECK(cli({"--network", data("fixture_network.json"), "gen-scenario", "-m", "50"}).code ==
        kExitValidation);
}

TEST_CASE("cap errors come before any work") {
  const auto r = cli({"--network", data("fixture_network.json"), "compare-exact", "-m", "12"});
  CHECK(r.code == kExitCap);
  CHECK(r.err.find("error [cap]") != std::string::npos);
  CHECK(cli({"--network", data("fixture_network.json"), "compare-exact", "-m", "5", "--cap",
             "4"})
            .code == kExitCap);
}

TEST_CASE("internal errors from the simulation guard") {
  // A dwell longer than the simulated-time cap never lets the run finish.
  const auto stall = write("stall.json", R"({"dwell": 1e6})");
  const auto r = cli({"--idm-params", stall, "--dt", "0.5", "simulate", "-k", "1",
                      data("fixture_scenario.json")});
  CHECK(r.code == kExitInternal);
  CHECK(r.err.find("error [internal]") != std::string::npos);
}

TEST_CASE("inputs are echoed to standard error") {
  const auto r = cli({"--seed", "77", "optimize", data("fixture_scenario.json")});
  CHECK(r.code == kExitOk);
  CHECK(r.err.find("command=optimize") != std::string::npos);
  CHECK(r.err.find("seed=77") != std::string::npos);
  CHECK(r.err.find(data("fixture_scenario.json")) != std::string::npos);
}

TEST_CASE("optimize matches the golden document") {
  const auto r = cli({"optimize", data("fixture_scenario.json")});
  REQUIRE(r.code == kExitOk);
  CHECK(r.out == read_file(fs::path(LASTMILE_GOLDEN_DIR) / "optimize_fixture.json"));
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["sweep"]["best_k"] == 2);
}

TEST_CASE("repeated runs are byte-identical") {
  const auto out = (scratch_dir() / "sim.json").string();
  auto once = [&] {
    const auto r = cli({"--threads", "3", "-o", out, "simulate", data("fixture_scenario.json")});
    REQUIRE(r.code == kExitOk);
    return read_file(out);
  };
  const auto a = once();
  const auto b = once();
  CHECK(a == b);
  CHECK(nlohmann::json::parse(a)["simulation"]["runs"].size() == 6);
}

TEST_CASE("simulate writes a trajectory table") {
  const auto traj = (scratch_dir() / "traj.csv").string();
  const auto r = cli({"--idm-model", "standard", "simulate", "-k", "2", "--trajectory", traj,
                      "--log-every", "100", data("fixture_scenario.json")});
  REQUIRE(r.code == kExitOk);
  const auto csv = read_file(traj);
  CHECK(csv.rfind("t,vehicle,edge,position_m,speed_mps\n", 0) == 0);
  CHECK(csv.find("0,0,0->") != std::string::npos);
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["simulation"]["idm"]["model"] == "standard");
}

TEST_CASE("compare-exact and pareto batches") {
  const auto net = data("fixture_network.json");
  const auto records = (scratch_dir() / "gaps.csv").string();
  const auto r = cli({"--network", net, "--seed", "3", "compare-exact", "-m", "3", "4", "-n", "5",
                      "--records", records, "--no-timings"});
  REQUIRE(r.code == kExitOk);
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["gap_study"].size() == 10);
  CHECK(doc["seed"] == 3);
  CHECK_FALSE(doc["gap_study"][0].contains("exact_wall_seconds"));
  CHECK(read_file(records).rfind("scenario,packages,", 0) == 0);

  const auto p = cli({"--network", net, "--threads", "2", "pareto", "-m", "4", "-N", "3", "-n",
                      "4"});
  REQUIRE(p.code == kExitOk);
  CHECK(std::count(p.out.begin(), p.out.end(), '\n') == 1 + 4 * 3);
  CHECK(p.out == cli({"--network", net, "pareto", "-m", "4", "-N", "3", "-n", "4"}).out);
}

TEST_CASE("gen-scenario files load back against their network") {
  const auto dir = scratch_dir() / "generated";
  fs::remove_all(dir);
  const auto r = cli({"--network", data("fixture_network.json"), "--seed", "9", "gen-scenario",
                      "-m", "5", "-N", "3", "-n", "3", "--out-dir", dir.string()});
  REQUIRE(r.code == kExitOk);
  for (const char* name : {"scenario_000.json", "scenario_001.json", "scenario_002.json"}) {
    const auto s = load_scenario(dir / name);
    CHECK(s.deliveries.size() == 5);
    CHECK(s.vehicles == 3);
    CHECK(s.seed == 9u);
    CHECK(cli({"optimize", (dir / name).string()}).code == kExitOk);
  }
  const auto single =
      cli({"--network", data("fixture_network.json"), "gen-scenario", "-m", "2"});
  CHECK(single.code == kExitOk);
  CHECK(parse_scenario(single.out).deliveries.size() == 2);
}

}  // TEST_SUITE
