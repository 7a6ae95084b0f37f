#include "lastmile/clustering.h"

#include <algorithm>
#include <limits>
#include <numeric>
#include <string>
#include <unordered_set>

#include "lastmile/error.h"

namespace lastmile {

DeliverySet::DeliverySet(std::vector<Delivery> locations)
    : locations_(std::move(locations)) {
  std::sort(locations_.begin(), locations_.end(),
            [](const auto& a, const auto& b) { return a.package < b.package; });
  std::unordered_set<NodeId> seen;
  for (std::size_t i = 0; i < locations_.size(); ++i) {
    const auto& d = locations_[i];
    if (d.package != static_cast<int>(i) + 1) {
      throw validation_error("package indices must be exactly 1..M (found " +
                             std::to_string(d.package) + " at position " +
                             std::to_string(i + 1) + ")");
    }
    if (!seen.insert(d.node).second) {
      throw validation_error("node " + std::to_string(d.node) +
                             " is listed for more than one package");
    }
  }
}

DeliverySet DeliverySet::from_nodes(const RoadNetwork& net,
                                    const std::vector<NodeId>& nodes) {
  std::vector<Delivery> out;
  out.reserve(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const auto id = nodes[i];
    const auto entry = "delivery " + std::to_string(i + 1) + " (node " +
                       std::to_string(id) + ")";
    if (!net.has_node(id)) throw validation_error(entry + ": unknown node");
    if (id == net.depot()) throw validation_error(entry + ": is the depot");
    out.push_back({static_cast<int>(i) + 1, id, net.node(id).position});
  }
  return DeliverySet(std::move(out));
}

std::vector<Delivery> DeliverySet::select(const std::vector<int>& packages) const {
  std::vector<Delivery> out;
  out.reserve(packages.size());
  for (int j : packages) {
    if (j < 1 || j > static_cast<int>(locations_.size())) {
      throw validation_error("package index " + std::to_string(j) +
                             " out of range");
    }
    out.push_back(locations_[j - 1]);
  }
  return out;
}

ClusterTree build_tree(const DeliverySet& deliveries) {
  const auto m = static_cast<int>(deliveries.size());
  if (m == 0) throw validation_error("cannot cluster an empty delivery set");

  ClusterTree tree;
  tree.leaf_count = m;
  tree.merges.reserve(m - 1);

  // Active clusters are represented by their smallest leaf index, which makes
  // the lexicographic tie-break a plain (row, column) ordering.
  const auto& loc = deliveries.locations();
  std::vector<double> dist(static_cast<std::size_t>(m) * m, 0.0);
  auto at = [&](int a, int b) -> double& {
    return dist[static_cast<std::size_t>(a) * m + b];
  };
  for (int a = 0; a < m; ++a) {
    for (int b = a + 1; b < m; ++b) {
      at(a, b) = at(b, a) = distance(loc[a].position, loc[b].position);
    }
  }

  std::vector<bool> active(m, true);
  std::vector<int> cluster_id(m), cluster_size(m, 1);
  std::iota(cluster_id.begin(), cluster_id.end(), 0);

  // Nearest active neighbour with a larger representative, first on ties.
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<double> nn_dist(m, inf);
  std::vector<int> nn(m, -1);
  auto refresh = [&](int a) {
    nn_dist[a] = inf;
    nn[a] = -1;
    for (int b = a + 1; b < m; ++b) {
      if (active[b] && at(a, b) < nn_dist[a]) {
        nn_dist[a] = at(a, b);
        nn[a] = b;
      }
    }
  };
  for (int a = 0; a < m; ++a) refresh(a);

  for (int step = 0; step < m - 1; ++step) {
    int lo = -1;
    for (int a = 0; a < m; ++a) {
      if (active[a] && nn[a] >= 0 && (lo < 0 || nn_dist[a] < nn_dist[lo])) lo = a;
    }
    const int hi = nn[lo];

    tree.merges.push_back({cluster_id[lo], cluster_id[hi], nn_dist[lo],
                           cluster_size[lo] + cluster_size[hi]});
    cluster_id[lo] = m + step;
    cluster_size[lo] += cluster_size[hi];
    active[hi] = false;

    for (int k = 0; k < m; ++k) {
      if (active[k] && k != lo) at(lo, k) = at(k, lo) = std::max(at(lo, k), at(hi, k));
    }
    // Linkage distances only grow, so rows whose neighbour was untouched keep it.
    for (int k = 0; k < hi; ++k) {
      if (active[k] && (k == lo || nn[k] == lo || nn[k] == hi)) refresh(k);
    }
  }
  return tree;
}

Partition cut(const ClusterTree& tree, int k) {
  const int m = tree.leaf_count;
  if (k < 1 || k > m) {
    throw validation_error("cluster count " + std::to_string(k) +
                           " outside 1.." + std::to_string(m));
  }
  std::vector<int> parent(2 * m - 1);
  std::iota(parent.begin(), parent.end(), 0);
  for (int r = 0; r < m - k; ++r) {
    parent[tree.merges[r].left] = m + r;
    parent[tree.merges[r].right] = m + r;
  }
  auto root = [&](int c) {
    while (parent[c] != c) c = parent[c];
    return c;
  };

  Partition out;
  std::vector<int> slot(2 * m - 1, -1);
  for (int leaf = 0; leaf < m; ++leaf) {
    const int r = root(leaf);
    if (slot[r] < 0) {
      slot[r] = static_cast<int>(out.size());
      out.emplace_back();
    }
    out[slot[r]].push_back(leaf + 1);
  }
  return out;
}

}  // namespace lastmile
