#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lastmile/clustering.h"
#include "lastmile/fleet_optimizer.h"
#include "lastmile/microsim.h"
#include "lastmile/road_network.h"

namespace lastmile {

struct Scenario {
  std::string network;  // path to the network file, as written in the scenario
  std::vector<NodeId> deliveries;  // package j goes to deliveries[j-1]
  int vehicles = 1;
  double alpha = 0.5;
  std::optional<std::uint64_t> seed;

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

// Network documents list either explicit nodes and edges or raw segments to
// be merged (see docs/formats.md).
RoadNetwork parse_network(const std::string& text, const std::string& origin = "network");
RoadNetwork load_network(const std::filesystem::path& path);
std::string network_to_json(const RoadNetwork& net);

Scenario parse_scenario(const std::string& text, const std::string& origin = "scenario");
Scenario load_scenario(const std::filesystem::path& path);
std::string scenario_to_json(const Scenario& s);
void save_scenario(const Scenario& s, const std::filesystem::path& path);

// Checks every Scenario invariant against `net` and returns the delivery set.
DeliverySet validate_scenario(const Scenario& s, const RoadNetwork& net);

// Resolves the scenario's network path relative to the scenario file.
std::filesystem::path network_path_for(const Scenario& s,
                                       const std::filesystem::path& scenario_file);

IdmParams parse_idm_params(const std::string& text, const std::string& origin = "idm");
IdmParams load_idm_params(const std::filesystem::path& path);
std::string idm_params_to_json(const IdmParams& p);

// Uniform sampling of `packages` distinct non-depot nodes per scenario, all
// drawn from one generator seeded with `seed`.
std::vector<Scenario> gen_scenarios(const RoadNetwork& net, int packages,
                                    std::size_t count, std::uint64_t seed,
                                    const std::string& network_ref = "",
                                    int vehicles = 1, double alpha = 0.5);

// Results document ------------------------------------------------------------

struct SimulationReport {
  int k = 0;
  SimResult measured;
  FleetEvaluation planned;
  Seconds measured_satisfaction = 0.0;
  Seconds measured_operating = 0.0;
  double planned_total = 0.0;   // normalized across the reported k values
  double measured_total = 0.0;
};

// Simulates the sweep's routes for each requested fleet size and normalizes
// planned and measured costs separately over those sizes.
std::vector<SimulationReport> simulate_sweep(const RoadNetwork& net,
                                             const DeliverySet& deliveries,
                                             const SweepResult& sweep,
                                             std::span<const int> fleet_sizes,
                                             const IdmParams& params,
                                             const SimOptions& options);

struct ResultsDocument {
  std::optional<Scenario> scenario;
  std::optional<std::uint64_t> seed;
  std::optional<SweepResult> sweep;
  std::vector<SimulationReport> simulations;
  std::optional<IdmParams> idm;
  double dt = 0.0;
  std::vector<GapRecord> gaps;
  bool include_timings = true;
};

std::string results_to_json(const ResultsDocument& doc);

std::string batch_to_csv(const BatchResult& batch);
std::string gaps_to_csv(std::span<const GapRecord> gaps);
std::string trajectory_to_csv(std::span<const TrajectorySample> samples);

std::string read_file(const std::filesystem::path& path);

// Writes to a sibling temporary file and renames it into place, so readers
// never observe a partial document.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

const char* tool_version();

}  // namespace lastmile
