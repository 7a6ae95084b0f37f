#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "lastmile/clustering.h"
#include "lastmile/road_network.h"

namespace lastmile {

// N x M binary vehicle-to-package assignment. Every package column sums to
// one; rows may be empty (idle vehicles).
class AssignmentMatrix {
 public:
  AssignmentMatrix(int vehicles, int packages);

  int vehicles() const { return vehicles_; }
  int packages() const { return packages_; }

  // Vehicle i is 0-based, package j is 1-based.
  bool at(int i, int j) const;
  void assign(int i, int j);

  std::vector<int> packages_of(int i) const;
  int column_sum(int j) const;
  bool columns_valid() const;

 private:
  int vehicles_;
  int packages_;
  std::vector<std::uint8_t> cells_;
};

// Vehicle i takes cluster i. `vehicles` defaults to the cluster count; extra
// rows stay empty.
AssignmentMatrix assignment_from_clusters(const Partition& partition,
                                          int packages, int vehicles = -1);

struct Route {
  int vehicle = 0;
  std::vector<int> sequence;  // package indices in delivery order
  std::vector<NodeId> path;   // depot ... depot
  Seconds round_trip = 0.0;
  std::map<int, Seconds> delivery_times;  // first arrival at the package node
};

struct RouteStats {
  std::uint64_t shortest_path_queries = 0;
};

// Builds the depot-to-depot route visiting `ordered` in that order, splicing
// shortest paths between consecutive stops. Delivery times come from the
// first visit of each package's node.
Route assemble_route(const RoadNetwork& net, std::span<const Delivery> ordered,
                     int vehicle = 0);

// Nearest-next construction: from the current node, go to the unvisited stop
// with the cheapest shortest path (lower package index on ties), then return
// to the depot.
Route greedy_route(const RoadNetwork& net, std::span<const Delivery> assigned,
                   int vehicle = 0, RouteStats* stats = nullptr);

inline constexpr std::size_t kDefaultExactCap = 9;

// Brute-force optimum over all visiting orders, legs composed from shortest
// paths. Ties go to the lexicographically smallest package sequence.
Route exact_route(const RoadNetwork& net, std::span<const Delivery> assigned,
                  int vehicle = 0, std::size_t cap = kDefaultExactCap);

}  // namespace lastmile
