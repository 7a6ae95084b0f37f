#include "lastmile/cli.h"

#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "lastmile/error.h"
#include "lastmile/fleet_optimizer.h"
#include "lastmile/microsim.h"
#include "lastmile/scenario_io.h"

namespace lastmile {

namespace fs = std::filesystem;

namespace {

struct GlobalOptions {
  std::string network;
  std::string output;
  std::uint64_t seed = 1;
  std::optional<double> alpha;
  double dt = 0.02;
  std::string idm_params;
  std::string idm_model;
  unsigned threads = 1;
};

int exit_code(ErrorCategory c) {
  switch (c) {
    case ErrorCategory::Parse: return kExitParse;
    case ErrorCategory::Validation: return kExitValidation;
    case ErrorCategory::Cap: return kExitCap;
    case ErrorCategory::Internal: return kExitInternal;
  }
  return kExitInternal;
}

class Runner {
 public:
  Runner(const GlobalOptions& g, std::ostream& out, std::ostream& err)
      : g_(g), out_(out), err_(err) {}

  void emit(const std::string& content) const {
    if (g_.output.empty()) {
      out_ << content;
    } else {
      write_file_atomic(g_.output, content);
    }
  }

  RoadNetwork network(const std::string& fallback = "") const {
    const auto path = g_.network.empty() ? fallback : g_.network;
    if (path.empty()) throw parse_error("no network file given (use --network)");
    return load_network(path);
  }

  IdmParams idm() const {
    IdmParams p = g_.idm_params.empty() ? IdmParams{} : load_idm_params(g_.idm_params);
    if (!g_.idm_model.empty()) p.model = *idm_model_from_string(g_.idm_model);
    return p;
  }

  SimOptions sim_options(int log_every = 0) const {
    SimOptions o;
    o.dt = g_.dt;
    o.log_every = log_every;
    return o;
  }

  // Loads the scenario together with the network it names.
  struct Loaded {
    Scenario scenario;
    RoadNetwork net;
    DeliverySet deliveries;
  };

  Loaded load(const std::string& scenario_path) const {
    auto s = load_scenario(scenario_path);
    if (g_.alpha) s.alpha = *g_.alpha;
    if (!(s.alpha >= 0.0 && s.alpha <= 1.0)) {
      throw validation_error("alpha must lie in [0, 1]");
    }
    auto net = network(network_path_for(s, scenario_path).string());
    auto deliveries = validate_scenario(s, net);
    return {std::move(s), std::move(net), std::move(deliveries)};
  }

  double alpha_or(double fallback) const {
    const double a = g_.alpha.value_or(fallback);
    if (!(a >= 0.0 && a <= 1.0)) throw validation_error("alpha must lie in [0, 1]");
    return a;
  }

  const GlobalOptions& global() const { return g_; }
  std::ostream& err() const { return err_; }

 private:
  const GlobalOptions& g_;
  std::ostream& out_;
  std::ostream& err_;
};

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Last-mile delivery fleet sizing, routing and microsimulation", "lastmile"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(tool_version()));

  GlobalOptions g;
  app.add_option("--network", g.network, "Road network file")->option_text("PATH");
  app.add_option("-o,--output", g.output, "Output file (default: standard output)");
  app.add_option("--seed", g.seed, "Seed for generated scenarios")->capture_default_str();
  app.add_option("--alpha", g.alpha, "Weight of the satisfaction cost in [0, 1]");
  app.add_option("--dt", g.dt, "Simulation time step, s")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  app.add_option("--idm-params", g.idm_params, "IDM parameter file");
  app.add_option("--idm-model", g.idm_model, "Car-following closure")
      ->check(CLI::IsMember({"paper-literal", "standard"}));
  app.add_option("--threads", g.threads, "Worker threads for batch work")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);

  std::string scenario_path;
  auto* optimize = app.add_subcommand("optimize", "Sweep fleet sizes for a scenario");
  optimize->add_option("scenario", scenario_path, "Scenario file")->required();

  int fleet_size = 0;
  std::string trajectory_path;
  int log_every = 50;
  auto* simulate_cmd =
      app.add_subcommand("simulate", "Compare planned costs with the microsimulation");
  simulate_cmd->add_option("scenario", scenario_path, "Scenario file")->required();
  simulate_cmd->add_option("-k,--fleet-size", fleet_size,
                           "Simulate one fleet size only (default: every size)");
  simulate_cmd->add_option("--trajectory", trajectory_path, "Write a trajectory CSV");
  simulate_cmd->add_option("--log-every", log_every, "Trajectory decimation, steps")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);

  std::vector<int> package_counts{3, 4, 5, 6};
  std::size_t count = 50;
  std::size_t cap = kDefaultExactCap;
  std::string records_path;
  bool no_timings = false;
  auto* compare = app.add_subcommand("compare-exact", "Greedy vs exact routing gap study");
  compare->add_option("-m,--packages", package_counts, "Package counts to study")
      ->capture_default_str();
  compare->add_option("-n,--count", count, "Scenarios per package count")->capture_default_str();
  compare->add_option("--cap", cap, "Largest instance the exact oracle accepts")
      ->capture_default_str();
  compare->add_option("--records", records_path, "Write per-scenario records as CSV");
  compare->add_flag("--no-timings", no_timings, "Omit wall-clock timings from the document");

  int packages = 6;
  int vehicles = 6;
  std::size_t batch_count = 40;
  auto* pareto = app.add_subcommand("pareto", "Batch sweeps and the Pareto table (CSV)");
  pareto->add_option("-m,--packages", packages, "Packages per scenario")->capture_default_str();
  pareto->add_option("-N,--vehicles", vehicles, "Available vehicles")->capture_default_str();
  pareto->add_option("-n,--count", batch_count, "Number of scenarios")->capture_default_str();

  int gen_packages = 6;
  int gen_vehicles = 0;
  std::size_t gen_count = 1;
  std::string out_dir;
  auto* gen = app.add_subcommand("gen-scenario", "Write random scenario files");
  gen->add_option("-m,--packages", gen_packages, "Packages per scenario")->capture_default_str();
  gen->add_option("-N,--vehicles", gen_vehicles, "Available vehicles (default: packages)");
  gen->add_option("-n,--count", gen_count, "Number of scenarios")->capture_default_str();
  gen->add_option("--out-dir", out_dir, "Directory for scenario_NNN.json files");

  std::vector<std::string> argv_store(args.begin(), args.end());
  if (argv_store.empty()) argv_store.emplace_back("lastmile");
  std::vector<char*> argv;
  for (auto& a : argv_store) argv.push_back(a.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  err << "lastmile " << tool_version() << ": command=" << app.get_subcommands().front()->get_name()
      << " network=" << (g.network.empty() ? "(from scenario)" : g.network)
      << " scenario=" << (scenario_path.empty() ? "-" : scenario_path)
      << " output=" << (g.output.empty() ? "(stdout)" : g.output) << " seed=" << g.seed
      << "\n";

  const Runner run(g, out, err);
  try {
    if (optimize->parsed()) {
      auto [scenario, net, deliveries] = run.load(scenario_path);
      ResultsDocument doc;
      doc.seed = scenario.seed;
      doc.sweep = sweep(net, deliveries, scenario.vehicles, scenario.alpha, {g.threads});
      doc.scenario = std::move(scenario);
      run.emit(results_to_json(doc));
      err << "best fleet size: " << doc.sweep->best_k << "\n";
    } else if (simulate_cmd->parsed()) {
      auto [scenario, net, deliveries] = run.load(scenario_path);
      const auto params = run.idm();
      ResultsDocument doc;
      doc.seed = scenario.seed;
      doc.sweep = sweep(net, deliveries, scenario.vehicles, scenario.alpha, {g.threads});
      std::vector<int> sizes;
      if (fleet_size > 0) {
        sizes.push_back(fleet_size);
      } else {
        for (const auto& e : doc.sweep->evaluations) sizes.push_back(e.k);
      }
      const auto opts = run.sim_options(trajectory_path.empty() ? 0 : log_every);
      doc.simulations = simulate_sweep(net, deliveries, *doc.sweep, sizes, params, opts);
      doc.idm = params;
      doc.dt = g.dt;
      doc.scenario = std::move(scenario);
      if (!trajectory_path.empty()) {
        std::vector<TrajectorySample> all;
        for (const auto& r : doc.simulations) {
          all.insert(all.end(), r.measured.trajectory.begin(), r.measured.trajectory.end());
        }
        write_file_atomic(trajectory_path, trajectory_to_csv(all));
      }
      run.emit(results_to_json(doc));
    } else if (compare->parsed()) {
      for (int m : package_counts) {
        if (m < 1 || static_cast<std::size_t>(m) > cap) {
          throw cap_error("compare-exact: " + std::to_string(m) +
                          " packages exceeds the exact-oracle cap of " + std::to_string(cap));
        }
      }
      const auto net = run.network();
      ResultsDocument doc;
      doc.seed = g.seed;
      doc.include_timings = !no_timings;
      std::uint64_t offset = 0;
      for (int m : package_counts) {
        const auto scenarios = gen_scenarios(net, m, count, g.seed + offset++);
        std::vector<DeliverySet> sets;
        for (const auto& s : scenarios) sets.push_back(DeliverySet::from_nodes(net, s.deliveries));
        auto records = gap_study(net, sets, cap);
        for (auto& r : records) r.scenario += doc.gaps.size();
        doc.gaps.insert(doc.gaps.end(), records.begin(), records.end());
      }
      if (!records_path.empty()) write_file_atomic(records_path, gaps_to_csv(doc.gaps));
      run.emit(results_to_json(doc));
    } else if (pareto->parsed()) {
      const auto net = run.network();
      const auto scenarios = gen_scenarios(net, packages, batch_count, g.seed);
      std::vector<DeliverySet> sets;
      for (const auto& s : scenarios) sets.push_back(DeliverySet::from_nodes(net, s.deliveries));
      const auto batch = batch_sweep(net, sets, vehicles, run.alpha_or(0.5), {g.threads});
      run.emit(batch_to_csv(batch));
    } else if (gen->parsed()) {
      const auto net = run.network();
      const int n_vehicles = gen_vehicles > 0 ? gen_vehicles : gen_packages;
      std::string ref = g.network;
      if (!out_dir.empty()) {
        fs::create_directories(out_dir);
        ref = fs::relative(fs::absolute(g.network), fs::absolute(out_dir)).generic_string();
      } else if (!g.output.empty()) {
        const auto parent = fs::absolute(g.output).parent_path();
        ref = fs::relative(fs::absolute(g.network), parent).generic_string();
      }
      const auto scenarios =
          gen_scenarios(net, gen_packages, gen_count, g.seed, ref, n_vehicles, run.alpha_or(0.5));
      if (!out_dir.empty()) {
        for (std::size_t i = 0; i < scenarios.size(); ++i) {
          char name[32];
          std::snprintf(name, sizeof name, "scenario_%03zu.json", i);
          save_scenario(scenarios[i], fs::path(out_dir) / name);
        }
      } else {
        if (scenarios.size() != 1) {
          throw validation_error("gen-scenario: use --out-dir to write more than one scenario");
        }
        run.emit(scenario_to_json(scenarios.front()));
      }
    }
  } catch (const Error& e) {
    err << "error [" << to_string(e.category()) << "]: " << e.what() << "\n";
    return exit_code(e.category());
  } catch (const fs::filesystem_error& e) {
    err << "error [parse]: " << e.what() << "\n";
    return kExitParse;
  } catch (const std::exception& e) {
    err << "error [internal]: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitOk;
}

}  // namespace lastmile
