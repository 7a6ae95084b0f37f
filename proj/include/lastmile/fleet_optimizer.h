#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "lastmile/clustering.h"
#include "lastmile/road_network.h"
#include "lastmile/routing.h"

namespace lastmile {

struct CostPoint {
  Seconds operating = 0.0;     // J_c, sum of round-trip times
  Seconds satisfaction = 0.0;  // J_s, mean delivery time
};

struct FleetEvaluation {
  int k = 0;
  std::vector<Route> routes;  // one per active vehicle, vehicle ids 0..k-1
  Seconds satisfaction = 0.0;
  Seconds operating = 0.0;
  double satisfaction_norm = 0.0;
  double operating_norm = 0.0;
  double total = 0.0;
  bool pareto = false;

  CostPoint point() const { return {operating, satisfaction}; }
};

struct SweepResult {
  double alpha = 0.5;
  int best_k = 0;
  ClusterTree tree;
  std::vector<FleetEvaluation> evaluations;  // k = 1..min(N, M)
};

// Routes every cluster of `partition` greedily and aggregates the mean
// delivery time and summed round trips. Normalized fields are left at zero.
FleetEvaluation evaluate(const RoadNetwork& net, const DeliverySet& deliveries,
                         const Partition& partition);

// Divides each component by its maximum over `evals` and fills in the
// weighted totals alpha * satisfaction + (1 - alpha) * operating.
void normalize(std::span<FleetEvaluation> evals, double alpha);

// Smallest k with the lowest total.
int best_fleet_size(std::span<const FleetEvaluation> evals);

// flags[e] is true iff no other point is at least as good in both components
// and strictly better in one.
std::vector<bool> pareto_frontier(std::span<const CostPoint> points);

struct SweepOptions {
  unsigned threads = 1;
};

SweepResult sweep(const RoadNetwork& net, const DeliverySet& deliveries,
                  int vehicles, double alpha, const SweepOptions& options = {});

// One row per (scenario, k) in a batch, normalized across the whole batch.
struct BatchRecord {
  std::size_t scenario = 0;
  int k = 0;
  Seconds satisfaction = 0.0;
  Seconds operating = 0.0;
  double satisfaction_norm = 0.0;
  double operating_norm = 0.0;
  double total = 0.0;
  bool pareto_in_scenario = false;
  bool pareto_in_batch = false;
};

struct BatchResult {
  double alpha = 0.5;
  std::vector<BatchRecord> records;  // ordered by (scenario, k)
  std::vector<double> mean_total;    // index k-1, averaged after normalizing
};

BatchResult batch_sweep(const RoadNetwork& net,
                        std::span<const DeliverySet> scenarios, int vehicles,
                        double alpha, const SweepOptions& options = {});

struct GapRecord {
  std::size_t scenario = 0;
  int packages = 0;
  Seconds greedy_time = 0.0;
  Seconds exact_time = 0.0;
  double gap = 0.0;  // (greedy - exact) / exact
  double greedy_wall_seconds = 0.0;
  double exact_wall_seconds = 0.0;
};

// Routes every scenario with a single vehicle both greedily and exactly.
// Runs sequentially so the wall-clock timings are comparable.
std::vector<GapRecord> gap_study(const RoadNetwork& net,
                                 std::span<const DeliverySet> scenarios,
                                 std::size_t cap = kDefaultExactCap);

}  // namespace lastmile
