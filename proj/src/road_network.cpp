#include "lastmile/road_network.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <queue>
#include <string>

#include "lastmile/error.h"

namespace lastmile {

double distance(const Vec2& a, const Vec2& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

std::string_view to_string(Geometry g) {
  return g == Geometry::Arc ? "arc" : "straight";
}

std::optional<Geometry> geometry_from_string(std::string_view s) {
  if (s == "straight") return Geometry::Straight;
  if (s == "arc") return Geometry::Arc;
  return std::nullopt;
}

bool costs_tied(Seconds a, Seconds b) {
  if (a == b) return true;
  if (!std::isfinite(a) || !std::isfinite(b)) return false;
  const double scale = std::max({1.0, std::abs(a), std::abs(b)});
  return std::abs(a - b) <= 1e-9 * scale;
}

namespace {

std::string edge_name(NodeId from, NodeId to) {
  return "(" + std::to_string(from) + " -> " + std::to_string(to) + ")";
}

// Marks nodes reachable from `start` following adjacency `next`.
std::vector<bool> reachable(
    std::size_t n, std::size_t start,
    const std::function<void(std::size_t, std::vector<std::size_t>&)>& next) {
  std::vector<bool> seen(n, false);
  std::vector<std::size_t> stack{start};
  std::vector<std::size_t> succ;
  seen[start] = true;
  while (!stack.empty()) {
    const auto u = stack.back();
    stack.pop_back();
    succ.clear();
    next(u, succ);
    for (auto v : succ) {
      if (!seen[v]) {
        seen[v] = true;
        stack.push_back(v);
      }
    }
  }
  return seen;
}

}  // namespace

RoadNetwork::RoadNetwork(std::vector<Node> nodes, std::vector<Edge> edges)
    : nodes_(std::move(nodes)) {
  if (nodes_.empty()) throw validation_error("network has no nodes");

  std::size_t depots = 0;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const auto& n = nodes_[i];
    if (!index_.emplace(n.id, i).second) {
      throw validation_error("duplicate node id " + std::to_string(n.id));
    }
    if (n.is_depot) {
      ++depots;
      depot_index_ = i;
    }
  }
  if (depots == 0) throw validation_error("no depot node flagged");
  if (depots > 1) {
    throw validation_error("more than one depot node flagged (" +
                           std::to_string(depots) + ")");
  }

  for (const auto& e : edges) {
    const auto name = edge_name(e.from, e.to);
    if (!has_node(e.from) || !has_node(e.to)) {
      throw validation_error("edge " + name + " references an unknown node");
    }
    if (e.from == e.to) throw validation_error("edge " + name + " is a self-loop");
    if (!(e.length > 0.0) || !std::isfinite(e.length)) {
      throw validation_error("edge " + name + " has non-positive length");
    }
    if (!(e.speed_limit > 0.0) || !std::isfinite(e.speed_limit)) {
      throw validation_error("edge " + name + " has non-positive speed limit");
    }
  }

  std::sort(edges.begin(), edges.end(), [this](const Edge& a, const Edge& b) {
    const auto ia = index_.at(a.from), ib = index_.at(b.from);
    return ia != ib ? ia < ib : a.to < b.to;
  });
  for (std::size_t i = 1; i < edges.size(); ++i) {
    if (edges[i].from == edges[i - 1].from && edges[i].to == edges[i - 1].to) {
      throw validation_error("parallel edge " +
                             edge_name(edges[i].from, edges[i].to));
    }
  }
  edges_ = std::move(edges);

  edge_offsets_.assign(nodes_.size() + 1, 0);
  for (const auto& e : edges_) ++edge_offsets_[index_.at(e.from) + 1];
  std::partial_sum(edge_offsets_.begin(), edge_offsets_.end(),
                   edge_offsets_.begin());

  // Round trips from the depot must exist for every node.
  const auto n = nodes_.size();
  std::vector<std::vector<std::size_t>> rev(n);
  for (const auto& e : edges_) rev[index_.at(e.to)].push_back(index_.at(e.from));
  const auto fwd = reachable(n, depot_index_, [&](auto u, auto& out) {
    for (const auto& e : out_edges(nodes_[u].id)) out.push_back(index_.at(e.to));
  });
  const auto bwd = reachable(n, depot_index_, [&](auto u, auto& out) {
    out.insert(out.end(), rev[u].begin(), rev[u].end());
  });
  for (std::size_t i = 0; i < n; ++i) {
    if (!fwd[i]) {
      throw validation_error("network is disconnected: node " +
                             std::to_string(nodes_[i].id) +
                             " is unreachable from the depot");
    }
    if (!bwd[i]) {
      throw validation_error("network is disconnected: node " +
                             std::to_string(nodes_[i].id) +
                             " cannot reach the depot");
    }
  }
}

const Node& RoadNetwork::node(NodeId id) const { return nodes_[index_of(id)]; }

std::size_t RoadNetwork::index_of(NodeId id) const {
  auto it = index_.find(id);
  if (it == index_.end()) {
    throw validation_error("unknown node id " + std::to_string(id));
  }
  return it->second;
}

std::span<const Edge> RoadNetwork::out_edges(NodeId id) const {
  const auto i = index_of(id);
  return std::span<const Edge>(edges_).subspan(
      edge_offsets_[i], edge_offsets_[i + 1] - edge_offsets_[i]);
}

const Edge* RoadNetwork::find_edge(NodeId from, NodeId to) const {
  auto out = out_edges(from);
  auto it = std::lower_bound(out.begin(), out.end(), to,
                             [](const Edge& e, NodeId t) { return e.to < t; });
  return (it != out.end() && it->to == to) ? &*it : nullptr;
}

RoadNetwork build_network(std::span<const RawSegment> segments,
                          Meters merge_tolerance) {
  if (segments.empty()) throw validation_error("no road segments given");
  if (!(merge_tolerance >= 0.0)) {
    throw validation_error("merge tolerance must be non-negative");
  }

  // Endpoint 2s is the start of segment s, 2s+1 its end.
  const std::size_t count = segments.size() * 2;
  std::vector<Vec2> points(count);
  for (std::size_t s = 0; s < segments.size(); ++s) {
    points[2 * s] = segments[s].from;
    points[2 * s + 1] = segments[s].to;
  }

  std::vector<std::size_t> parent(count);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };

  // Sweep in x so only candidates inside the tolerance band are compared.
  std::vector<std::size_t> by_x(count);
  std::iota(by_x.begin(), by_x.end(), 0);
  std::sort(by_x.begin(), by_x.end(), [&](auto a, auto b) {
    return points[a].x != points[b].x ? points[a].x < points[b].x : a < b;
  });
  for (std::size_t a = 0; a < count; ++a) {
    const auto& pa = points[by_x[a]];
    for (std::size_t b = a + 1; b < count; ++b) {
      const auto& pb = points[by_x[b]];
      if (pb.x - pa.x > merge_tolerance) break;
      if (distance(pa, pb) <= merge_tolerance) {
        const auto ra = find(by_x[a]), rb = find(by_x[b]);
        if (ra != rb) parent[std::max(ra, rb)] = std::min(ra, rb);
      }
    }
  }

  std::vector<NodeId> node_of_root(count, -1);
  std::vector<Vec2> sum;
  std::vector<int> members;
  std::vector<NodeId> endpoint_node(count);
  for (std::size_t i = 0; i < count; ++i) {
    const auto r = find(i);
    if (node_of_root[r] < 0) {
      node_of_root[r] = static_cast<NodeId>(sum.size());
      sum.push_back({});
      members.push_back(0);
    }
    const auto id = node_of_root[r];
    endpoint_node[i] = id;
    sum[id].x += points[i].x;
    sum[id].y += points[i].y;
    ++members[id];
  }

  std::optional<NodeId> depot;
  for (std::size_t s = 0; s < segments.size(); ++s) {
    for (int end = 0; end < 2; ++end) {
      const bool flagged =
          end == 0 ? segments[s].from_is_depot : segments[s].to_is_depot;
      if (!flagged) continue;
      const auto id = endpoint_node[2 * s + end];
      if (depot && *depot != id) {
        throw validation_error(
            "depot flagged on endpoints that do not merge into one node "
            "(segment " + std::to_string(s) + ")");
      }
      depot = id;
    }
  }
  if (!depot) throw validation_error("no segment endpoint is flagged as depot");

  std::vector<Node> nodes(sum.size());
  for (std::size_t id = 0; id < sum.size(); ++id) {
    nodes[id].id = static_cast<NodeId>(id);
    nodes[id].position = {sum[id].x / members[id], sum[id].y / members[id]};
    nodes[id].is_depot = static_cast<NodeId>(id) == *depot;
  }

  std::vector<Edge> edges;
  edges.reserve(segments.size());
  for (std::size_t s = 0; s < segments.size(); ++s) {
    const auto& seg = segments[s];
    edges.push_back({endpoint_node[2 * s], endpoint_node[2 * s + 1], seg.length,
                     seg.speed_limit, seg.geometry});
  }
  return RoadNetwork(std::move(nodes), std::move(edges));
}

Path shortest_path(const RoadNetwork& net, NodeId from, NodeId to) {
  const auto src = net.index_of(from);
  const auto dst = net.index_of(to);
  if (src == dst) return Path{{from}, 0.0};

  const auto& nodes = net.nodes();
  const auto n = nodes.size();
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(n, inf);
  std::vector<bool> settled(n, false);

  using Item = std::pair<double, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
  dist[src] = 0.0;
  queue.emplace(0.0, src);
  while (!queue.empty()) {
    const auto [d, u] = queue.top();
    queue.pop();
    if (settled[u]) continue;
    // Everything that can lie on a tied route to the target is settled.
    if (settled[dst] && d > dist[dst] && !costs_tied(d, dist[dst])) break;
    settled[u] = true;
    for (const auto& e : net.out_edges(nodes[u].id)) {
      const auto v = net.index_of(e.to);
      const double nd = d + e.cost();
      if (nd < dist[v]) {
        dist[v] = nd;
        queue.emplace(nd, v);
      }
    }
  }

  // Edges on some minimum-cost route: dist[u] + c(u,v) ties dist[v].
  auto tight = [&](std::size_t u, const Edge& e) {
    const auto v = net.index_of(e.to);
    return settled[u] && settled[v] && costs_tied(dist[u] + e.cost(), dist[v]);
  };

  // Nodes from which the target is reachable over tight edges.
  std::vector<std::vector<std::size_t>> rev(n);
  for (std::size_t u = 0; u < n; ++u) {
    if (!settled[u]) continue;
    for (const auto& e : net.out_edges(nodes[u].id)) {
      if (tight(u, e)) rev[net.index_of(e.to)].push_back(u);
    }
  }
  std::vector<bool> leads(n, false);
  std::vector<std::size_t> stack{dst};
  leads[dst] = true;
  while (!stack.empty()) {
    const auto v = stack.back();
    stack.pop_back();
    for (auto u : rev[v]) {
      if (!leads[u]) {
        leads[u] = true;
        stack.push_back(u);
      }
    }
  }

  // Out-edges are sorted by target id, so the first admissible successor is
  // the lexicographically smallest continuation.
  Path path;
  path.nodes.push_back(from);
  auto cur = src;
  while (cur != dst) {
    if (path.nodes.size() > n) throw internal_error("shortest path walk cycled");
    bool advanced = false;
    for (const auto& e : net.out_edges(nodes[cur].id)) {
      const auto v = net.index_of(e.to);
      if (leads[v] && tight(cur, e)) {
        path.nodes.push_back(e.to);
        cur = v;
        advanced = true;
        break;
      }
    }
    if (!advanced) {
      throw internal_error("no route from " + std::to_string(from) + " to " +
                           std::to_string(to));
    }
  }
  path.cost = path_cost(net, path.nodes);
  return path;
}

Seconds path_cost(const RoadNetwork& net, std::span<const NodeId> nodes) {
  if (nodes.empty()) throw validation_error("path has no nodes");
  if (!net.has_node(nodes.front())) {
    throw validation_error("unknown node id " + std::to_string(nodes.front()));
  }
  Seconds total = 0.0;
  for (std::size_t k = 0; k + 1 < nodes.size(); ++k) {
    const auto* e = net.find_edge(nodes[k], nodes[k + 1]);
    if (e == nullptr) {
      throw validation_error("path uses missing edge " +
                             edge_name(nodes[k], nodes[k + 1]));
    }
    total += e->cost();
  }
  return total;
}

}  // namespace lastmile
