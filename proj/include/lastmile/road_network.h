#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace lastmile {

using NodeId = std::int64_t;
using Seconds = double;
using Meters = double;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Vec2&, const Vec2&) = default;
};

double distance(const Vec2& a, const Vec2& b);

enum class Geometry { Straight, Arc };

std::string_view to_string(Geometry g);
std::optional<Geometry> geometry_from_string(std::string_view s);

struct Node {
  NodeId id = 0;
  Vec2 position;
  bool is_depot = false;
};

struct Edge {
  NodeId from = 0;
  NodeId to = 0;
  Meters length = 0.0;
  double speed_limit = 0.0;  // m/s
  Geometry geometry = Geometry::Straight;

  // Travel time in seconds, fixed at construction.
  Seconds cost() const { return length / speed_limit; }
};

struct Path {
  std::vector<NodeId> nodes;
  Seconds cost = 0.0;
};

// A raw road segment prior to node merging. Exactly one endpoint across all
// segments passed to build_network must be flagged as the depot.
struct RawSegment {
  Vec2 from;
  Vec2 to;
  Meters length = 0.0;
  double speed_limit = 0.0;
  Geometry geometry = Geometry::Straight;
  bool from_is_depot = false;
  bool to_is_depot = false;
};

// Immutable directed road graph. Construction validates every invariant:
// unique ids, a single depot, positive lengths and limits, no parallel edges,
// and strong connectivity through the depot.
class RoadNetwork {
 public:
  RoadNetwork(std::vector<Node> nodes, std::vector<Edge> edges);

  const std::vector<Node>& nodes() const { return nodes_; }
  const std::vector<Edge>& edges() const { return edges_; }
  NodeId depot() const { return nodes_[depot_index_].id; }

  bool has_node(NodeId id) const { return index_.contains(id); }
  const Node& node(NodeId id) const;

  // Edges leaving `id`, sorted by target id.
  std::span<const Edge> out_edges(NodeId id) const;
  const Edge* find_edge(NodeId from, NodeId to) const;

  // Dense index in [0, nodes().size()) for a node id.
  std::size_t index_of(NodeId id) const;

 private:
  std::vector<Node> nodes_;
  std::vector<Edge> edges_;  // grouped by source index, then target id
  std::vector<std::size_t> edge_offsets_;
  std::unordered_map<NodeId, std::size_t> index_;
  std::size_t depot_index_ = 0;
};

// Unifies endpoints that lie within merge_tolerance of each other (transitive
// closure), placing each merged node at the centroid of its endpoints. Node
// ids are assigned 0, 1, ... in order of first endpoint appearance.
RoadNetwork build_network(std::span<const RawSegment> segments,
                          Meters merge_tolerance);

// Minimum-cost path by Dijkstra. Among equal-cost paths the lexicographically
// smallest node-id sequence wins.
Path shortest_path(const RoadNetwork& net, NodeId from, NodeId to);

// Sum of edge costs along `nodes`. Throws if a consecutive pair is not an edge.
Seconds path_cost(const RoadNetwork& net, std::span<const NodeId> nodes);

// Two travel times are treated as tied when they agree to this relative
// tolerance. Used by every deterministic tie-break in the planner.
bool costs_tied(Seconds a, Seconds b);

}  // namespace lastmile
