#include "lastmile/routing.h"

#include <algorithm>
#include <limits>
#include <numeric>
#include <string>

#include "lastmile/error.h"

namespace lastmile {

AssignmentMatrix::AssignmentMatrix(int vehicles, int packages)
    : vehicles_(vehicles), packages_(packages) {
  if (vehicles < 0 || packages < 0) {
    throw validation_error("assignment dimensions must be non-negative");
  }
  cells_.assign(static_cast<std::size_t>(vehicles) * packages, 0);
}

bool AssignmentMatrix::at(int i, int j) const {
  return cells_.at(static_cast<std::size_t>(i) * packages_ + (j - 1)) != 0;
}

void AssignmentMatrix::assign(int i, int j) {
  if (i < 0 || i >= vehicles_ || j < 1 || j > packages_) {
    throw validation_error("assignment (" + std::to_string(i) + ", " +
                           std::to_string(j) + ") out of range");
  }
  cells_[static_cast<std::size_t>(i) * packages_ + (j - 1)] = 1;
}

std::vector<int> AssignmentMatrix::packages_of(int i) const {
  std::vector<int> out;
  for (int j = 1; j <= packages_; ++j) {
    if (at(i, j)) out.push_back(j);
  }
  return out;
}

int AssignmentMatrix::column_sum(int j) const {
  int sum = 0;
  for (int i = 0; i < vehicles_; ++i) sum += at(i, j) ? 1 : 0;
  return sum;
}

bool AssignmentMatrix::columns_valid() const {
  for (int j = 1; j <= packages_; ++j) {
    if (column_sum(j) != 1) return false;
  }
  return true;
}

AssignmentMatrix assignment_from_clusters(const Partition& partition,
                                          int packages, int vehicles) {
  const int k = static_cast<int>(partition.size());
  if (vehicles < 0) vehicles = k;
  if (vehicles < k) {
    throw validation_error(std::to_string(k) + " clusters but only " +
                           std::to_string(vehicles) + " vehicles");
  }
  AssignmentMatrix a(vehicles, packages);
  for (int i = 0; i < k; ++i) {
    for (int j : partition[i]) {
      if (j >= 1 && j <= packages && a.column_sum(j) > 0) {
        throw validation_error("package " + std::to_string(j) +
                               " appears in two clusters");
      }
      a.assign(i, j);
    }
  }
  if (!a.columns_valid()) {
    throw validation_error("partition does not cover every package");
  }
  return a;
}

namespace {

void check_assigned(const RoadNetwork& net, std::span<const Delivery> assigned) {
  if (assigned.empty()) throw validation_error("vehicle has no deliveries");
  for (const auto& d : assigned) {
    if (!net.has_node(d.node)) {
      throw validation_error("package " + std::to_string(d.package) +
                             " targets unknown node " + std::to_string(d.node));
    }
    if (d.node == net.depot()) {
      throw validation_error("package " + std::to_string(d.package) +
                             " targets the depot");
    }
  }
}

void splice(std::vector<NodeId>& path, const Path& leg) {
  path.insert(path.end(), leg.nodes.begin() + 1, leg.nodes.end());
}

}  // namespace

Route assemble_route(const RoadNetwork& net, std::span<const Delivery> ordered,
                     int vehicle) {
  check_assigned(net, ordered);
  Route route;
  route.vehicle = vehicle;
  route.path.push_back(net.depot());
  for (const auto& d : ordered) {
    splice(route.path, shortest_path(net, route.path.back(), d.node));
    route.sequence.push_back(d.package);
  }
  splice(route.path, shortest_path(net, route.path.back(), net.depot()));

  // Walk the node path once, stamping each package at its node's first visit.
  std::map<NodeId, int> package_at;
  for (const auto& d : ordered) package_at.emplace(d.node, d.package);
  Seconds elapsed = 0.0;
  for (std::size_t k = 0; k < route.path.size(); ++k) {
    if (k > 0) elapsed += net.find_edge(route.path[k - 1], route.path[k])->cost();
    auto it = package_at.find(route.path[k]);
    if (it != package_at.end()) route.delivery_times.try_emplace(it->second, elapsed);
  }
  route.round_trip = elapsed;
  return route;
}

Route greedy_route(const RoadNetwork& net, std::span<const Delivery> assigned,
                   int vehicle, RouteStats* stats) {
  check_assigned(net, assigned);
  std::vector<Delivery> pending(assigned.begin(), assigned.end());
  std::sort(pending.begin(), pending.end(),
            [](const auto& a, const auto& b) { return a.package < b.package; });

  std::vector<Delivery> order;
  order.reserve(pending.size());
  NodeId at = net.depot();
  while (!pending.empty()) {
    std::size_t best = 0;
    Seconds best_cost = 0.0;
    for (std::size_t c = 0; c < pending.size(); ++c) {
      const auto cost = shortest_path(net, at, pending[c].node).cost;
      if (stats) ++stats->shortest_path_queries;
      // Candidates are scanned by ascending package index; only a strictly
      // cheaper one displaces the incumbent.
      if (c == 0 || (cost < best_cost && !costs_tied(cost, best_cost))) {
        best = c;
        best_cost = cost;
      }
    }
    at = pending[best].node;
    order.push_back(pending[best]);
    pending.erase(pending.begin() + static_cast<std::ptrdiff_t>(best));
  }
  if (stats) ++stats->shortest_path_queries;  // the leg home
  return assemble_route(net, order, vehicle);
}

Route exact_route(const RoadNetwork& net, std::span<const Delivery> assigned,
                  int vehicle, std::size_t cap) {
  check_assigned(net, assigned);
  if (assigned.size() > cap) {
    throw cap_error("exact routing supports at most " + std::to_string(cap) +
                    " deliveries per vehicle, got " +
                    std::to_string(assigned.size()));
  }
  std::vector<Delivery> stops(assigned.begin(), assigned.end());
  std::sort(stops.begin(), stops.end(),
            [](const auto& a, const auto& b) { return a.package < b.package; });
  const auto n = stops.size();

  // Leg costs between the depot (slot n) and every stop.
  std::vector<Seconds> leg((n + 1) * (n + 1), 0.0);
  auto node_of = [&](std::size_t s) { return s == n ? net.depot() : stops[s].node; };
  for (std::size_t a = 0; a <= n; ++a) {
    for (std::size_t b = 0; b <= n; ++b) {
      if (a != b) leg[a * (n + 1) + b] = shortest_path(net, node_of(a), node_of(b)).cost;
    }
  }

  // Permutations arrive in lexicographic order of package index, so keeping
  // the first strict improvement keeps the smallest sequence among ties.
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<std::size_t> best = perm;
  Seconds best_cost = std::numeric_limits<Seconds>::infinity();
  do {
    Seconds cost = leg[n * (n + 1) + perm[0]];
    for (std::size_t k = 1; k < n; ++k) cost += leg[perm[k - 1] * (n + 1) + perm[k]];
    cost += leg[perm[n - 1] * (n + 1) + n];
    if (cost < best_cost && !costs_tied(cost, best_cost)) {
      best_cost = cost;
      best = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));

  std::vector<Delivery> order;
  order.reserve(n);
  for (auto s : best) order.push_back(stops[s]);
  return assemble_route(net, order, vehicle);
}

}  // namespace lastmile
