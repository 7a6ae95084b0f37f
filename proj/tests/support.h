#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "lastmile/error.h"
#include "lastmile/road_network.h"
#include "lastmile/scenario_io.h"

namespace support {

inline std::filesystem::path data_dir() { return LASTMILE_DATA_DIR; }

inline const lastmile::RoadNetwork& fixture() {
  static const auto net = lastmile::load_network(data_dir() / "fixture_network.json");
  return net;
}

// Unit-speed triangle: 0->1 and 1->2 cost 1, 0->2 costs 3, with return edges.
inline lastmile::RoadNetwork triangle() {
  using lastmile::Geometry;
  return lastmile::RoadNetwork(
      {{0, {0, 0}, true}, {1, {1, 0}, false}, {2, {2, 0}, false}},
      {{0, 1, 1.0, 1.0, Geometry::Straight},
       {1, 2, 1.0, 1.0, Geometry::Straight},
       {0, 2, 3.0, 1.0, Geometry::Straight},
       {2, 0, 3.0, 1.0, Geometry::Straight},
       {1, 0, 1.0, 1.0, Geometry::Straight}});
}

// Nodes 0..n-1 on a line, one metre apart, unit-speed edges both ways.
inline lastmile::RoadNetwork line(int n) {
  std::vector<lastmile::Node> nodes;
  std::vector<lastmile::Edge> edges;
  for (int i = 0; i < n; ++i) nodes.push_back({i, {static_cast<double>(i), 0.0}, i == 0});
  for (int i = 0; i + 1 < n; ++i) {
    edges.push_back({i, i + 1, 1.0, 1.0, lastmile::Geometry::Straight});
    edges.push_back({i + 1, i, 1.0, 1.0, lastmile::Geometry::Straight});
  }
  return lastmile::RoadNetwork(std::move(nodes), std::move(edges));
}

// Category of the lastmile::Error thrown by f, if any.
template <class F>
std::optional<lastmile::ErrorCategory> category_of(F&& f) {
  try {
    f();
  } catch (const lastmile::Error& e) {
    return e.category();
  }
  return std::nullopt;
}

}  // namespace support
