#pragma once

#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "lastmile/clustering.h"
#include "lastmile/road_network.h"
#include "lastmile/routing.h"

namespace lastmile {

// Two closures of the car-following law.
//   PaperLiteral: a = a_max (1 - (v/v0)^delta - (s*/s)^2),
//                 s* = s0 + v theta + v delta ds / (2 sqrt(a_max a_min)),
//                 with ds the gap rate (leader speed - own speed).
//   Standard:     exponent 4 and s* = s0 + v theta + v dv / (2 sqrt(a_max a_min)),
//                 with dv = -ds the approach rate.
enum class IdmModel { PaperLiteral, Standard };

std::string_view to_string(IdmModel m);
std::optional<IdmModel> idm_model_from_string(std::string_view s);

struct IdmParams {
  double time_headway = 1.0;  // theta, s
  double delta = 0.06;
  double a_max = 5.0;         // m/s^2
  double a_min = 25.0;        // comfortable braking, m/s^2, positive
  double min_gap = 0.06;      // s0, m, measured between vehicle reference points
  double v_straight = 0.5;    // m/s
  double v_arc = 0.25;        // m/s
  double dwell = 3.0;         // s per delivery
  IdmModel model = IdmModel::PaperLiteral;

  double limit(Geometry g) const { return g == Geometry::Arc ? v_arc : v_straight; }
  void validate() const;
};

inline constexpr double kFreeRoad = std::numeric_limits<double>::infinity();

// Acceleration for a vehicle at speed v with desired speed v0. `gap` is the
// distance to the leader (kFreeRoad when there is none) and `gap_rate` the
// leader's speed minus the vehicle's own.
double idm_accel(double v, double v0, double gap, double gap_rate,
                 const IdmParams& params);

struct SimOptions {
  double dt = 0.02;
  int log_every = 0;           // trajectory decimation in steps; 0 disables
  double max_time = 100000.0;  // simulated seconds before declaring a fault
};

struct TrajectorySample {
  double t = 0.0;
  int vehicle = 0;
  NodeId edge_from = 0;
  NodeId edge_to = 0;
  double position = 0.0;
  double speed = 0.0;
};

struct SimResult {
  std::map<int, Seconds> delivery_times;  // package -> first arrival
  std::vector<Seconds> round_trips;       // one per route, input order
  std::vector<TrajectorySample> trajectory;

  // Diagnostics gathered every step.
  double min_leader_gap = kFreeRoad;  // smallest same-edge gap seen
  double max_speed_excess = 0.0;      // largest v - segment limit seen
  std::size_t steps = 0;
};

// Advances every route in lockstep with explicit Euler steps. Vehicles leave
// the depot together at rest; each serves a dwell at the first arrival at
// each of its packages' nodes and finishes on reaching the depot again.
SimResult simulate(const RoadNetwork& net, const DeliverySet& deliveries,
                   std::span<const Route> routes, const IdmParams& params,
                   const SimOptions& options = {});

}  // namespace lastmile
