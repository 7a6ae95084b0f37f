#include "lastmile/microsim.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "lastmile/error.h"

namespace lastmile {

std::string_view to_string(IdmModel m) {
  return m == IdmModel::Standard ? "standard" : "paper-literal";
}

std::optional<IdmModel> idm_model_from_string(std::string_view s) {
  if (s == "paper-literal") return IdmModel::PaperLiteral;
  if (s == "standard") return IdmModel::Standard;
  return std::nullopt;
}

void IdmParams::validate() const {
  const std::pair<const char*, double> fields[] = {
      {"time_headway", time_headway}, {"delta", delta},   {"a_max", a_max},
      {"a_min", a_min},               {"min_gap", min_gap}, {"v_straight", v_straight},
      {"v_arc", v_arc}};
  for (const auto& [name, value] : fields) {
    if (!(value > 0.0) || !std::isfinite(value)) {
      throw validation_error(std::string("IDM parameter ") + name +
                             " must be positive");
    }
  }
  if (!(dwell >= 0.0) || !std::isfinite(dwell)) {
    throw validation_error("IDM parameter dwell must be non-negative");
  }
  if (!(v_straight > v_arc)) {
    throw validation_error("straight-segment limit must exceed the arc limit");
  }
}

double idm_accel(double v, double v0, double gap, double gap_rate,
                 const IdmParams& p) {
  const bool literal = p.model == IdmModel::PaperLiteral;
  const double exponent = literal ? p.delta : 4.0;
  const double free_term = v > 0.0 ? std::pow(v / v0, exponent) : 0.0;
  double interaction = 0.0;
  if (std::isfinite(gap)) {
    const double rate = literal ? p.delta * gap_rate : -gap_rate;
    const double desired =
        p.min_gap + v * p.time_headway + v * rate / (2.0 * std::sqrt(p.a_max * p.a_min));
    interaction = (desired / gap) * (desired / gap);
  }
  return p.a_max * (1.0 - free_term - interaction);
}

namespace {

enum class Status { Driving, Dwelling, Done };

struct Vehicle {
  const Route* route = nullptr;
  std::vector<const Edge*> edges;
  std::map<NodeId, int> pending;  // undelivered node -> package
  std::size_t edge = 0;
  double pos = 0.0;
  double speed = 0.0;
  double resume_at = 0.0;
  Status status = Status::Driving;
};

struct Leader {
  std::size_t index = 0;
  double gap = kFreeRoad;
  double rate = 0.0;
};

// Nearest vehicle ahead on the same edge. Vehicles are points, so the gap is
// the distance between positions.
std::optional<Leader> find_leader(const std::vector<Vehicle>& fleet, std::size_t me) {
  const auto& self = fleet[me];
  const Edge* here = self.edges[self.edge];
  std::optional<Leader> best;
  for (std::size_t o = 0; o < fleet.size(); ++o) {
    const auto& other = fleet[o];
    if (o == me || other.status == Status::Done) continue;
    if (other.edges[other.edge] != here || !(other.pos > self.pos)) continue;
    const double gap = other.pos - self.pos;
    if (!best || gap < best->gap) best = Leader{o, gap, other.speed - self.speed};
  }
  return best;
}

}  // namespace

SimResult simulate(const RoadNetwork& net, const DeliverySet& deliveries,
                   std::span<const Route> routes, const IdmParams& params,
                   const SimOptions& options) {
  params.validate();
  if (!(options.dt > 0.0)) throw validation_error("time step must be positive");

  std::vector<Vehicle> fleet(routes.size());
  SimResult result;
  result.round_trips.assign(routes.size(), 0.0);
  for (std::size_t r = 0; r < routes.size(); ++r) {
    const auto& route = routes[r];
    if (route.path.size() < 2 || route.path.front() != net.depot() ||
        route.path.back() != net.depot()) {
      throw validation_error("route of vehicle " + std::to_string(route.vehicle) +
                             " must start and end at the depot");
    }
    auto& v = fleet[r];
    v.route = &route;
    for (std::size_t k = 0; k + 1 < route.path.size(); ++k) {
      const auto* e = net.find_edge(route.path[k], route.path[k + 1]);
      if (e == nullptr) {
        throw validation_error("route of vehicle " + std::to_string(route.vehicle) +
                               " uses a missing edge");
      }
      v.edges.push_back(e);
    }
    for (int j : route.sequence) {
      const NodeId node = deliveries.package(j).node;
      if (std::find(route.path.begin(), route.path.end(), node) == route.path.end()) {
        throw validation_error("route of vehicle " + std::to_string(route.vehicle) +
                               " never visits the node of package " + std::to_string(j));
      }
      v.pending.emplace(node, j);
    }
  }

  const double dt = options.dt;
  const auto max_steps = static_cast<std::size_t>(std::ceil(options.max_time / dt));
  std::vector<double> accel(fleet.size(), 0.0);
  std::vector<std::optional<Leader>> leaders(fleet.size());

  auto log = [&](double t) {
    for (std::size_t i = 0; i < fleet.size(); ++i) {
      const auto& v = fleet[i];
      if (v.status == Status::Done) continue;
      const auto* e = v.edges[v.edge];
      result.trajectory.push_back({t, v.route->vehicle, e->from, e->to, v.pos, v.speed});
    }
  };

  double t = 0.0;
  for (std::size_t step = 0;; ++step) {
    const bool running = std::any_of(fleet.begin(), fleet.end(),
                                     [](const auto& v) { return v.status != Status::Done; });
    if (!running) break;
    if (step >= max_steps) {
      throw internal_error("simulation did not finish within " +
                           std::to_string(options.max_time) + " s");
    }
    if (options.log_every > 0 && step % options.log_every == 0) log(t);

    for (auto& v : fleet) {
      if (v.status == Status::Dwelling && t >= v.resume_at) {
        v.status = Status::Driving;
        ++v.edge;
        v.pos = 0.0;
        v.speed = 0.0;
      }
    }

    // Accelerations come from the state at the start of the step.
    for (std::size_t i = 0; i < fleet.size(); ++i) {
      const auto& v = fleet[i];
      leaders[i].reset();
      if (v.status != Status::Driving) continue;
      leaders[i] = find_leader(fleet, i);
      const double v0 = params.limit(v.edges[v.edge]->geometry);
      accel[i] = leaders[i] ? idm_accel(v.speed, v0, leaders[i]->gap, leaders[i]->rate, params)
                            : idm_accel(v.speed, v0, kFreeRoad, 0.0, params);
    }
    for (std::size_t i = 0; i < fleet.size(); ++i) {
      auto& v = fleet[i];
      if (v.status != Status::Driving) continue;
      v.speed = std::max(0.0, v.speed + accel[i] * dt);
      double travel = v.speed * dt;
      double from_pos = v.pos;
      double elapsed = 0.0;  // time into the step at which from_pos was held
      while (v.status == Status::Driving) {
        const Edge* e = v.edges[v.edge];
        if (from_pos + travel < e->length) {
          v.pos = from_pos + travel;
          break;
        }
        const double arrive = t + elapsed + (e->length - from_pos) / v.speed;
        const double used = e->length - from_pos;
        travel -= used;
        elapsed = arrive - t;
        const NodeId node = e->to;
        if (v.edge + 1 == v.edges.size()) {
          v.status = Status::Done;
          v.pos = e->length;
          result.round_trips[i] = arrive;
          break;
        }
        if (auto it = v.pending.find(node); it != v.pending.end()) {
          result.delivery_times[it->second] = arrive;
          v.pending.erase(it);
          if (params.dwell > 0.0) {
            v.status = Status::Dwelling;
            v.pos = e->length;
            v.speed = 0.0;
            v.resume_at = arrive + params.dwell;
            break;
          }
        }
        ++v.edge;
        from_pos = 0.0;
        v.speed = std::min(v.speed, params.limit(v.edges[v.edge]->geometry));
        travel = std::min(travel, v.speed * (dt - elapsed));
      }
    }

    for (std::size_t i = 0; i < fleet.size(); ++i) {
      const auto& v = fleet[i];
      if (v.status == Status::Driving) {
        result.max_speed_excess = std::max(
            result.max_speed_excess, v.speed - params.limit(v.edges[v.edge]->geometry));
      }
      const auto& lead = leaders[i];
      if (!lead || v.status == Status::Done) continue;
      const auto& other = fleet[lead->index];
      if (other.status != Status::Done && other.edge < other.edges.size() &&
          other.edges[other.edge] == v.edges[v.edge]) {
        result.min_leader_gap = std::min(result.min_leader_gap, other.pos - v.pos);
      }
    }
    t += dt;
    ++result.steps;
  }
  if (options.log_every > 0) log(t);
  return result;
}

}  // namespace lastmile
