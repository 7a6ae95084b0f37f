#pragma once

#include <vector>

#include "lastmile/road_network.h"

namespace lastmile {

// Package j (1-based) is delivered to `node`; `position` is that node's
// planar position, the space clustering works in.
struct Delivery {
  int package = 0;
  NodeId node = 0;
  Vec2 position;

  friend bool operator==(const Delivery&, const Delivery&) = default;
};

// Deliveries ordered by package index, with package indices exactly 1..M and
// distinct non-depot nodes.
class DeliverySet {
 public:
  DeliverySet() = default;
  explicit DeliverySet(std::vector<Delivery> locations);

  // Package j goes to nodes[j-1]; positions are looked up in `net`.
  static DeliverySet from_nodes(const RoadNetwork& net,
                                const std::vector<NodeId>& nodes);

  const std::vector<Delivery>& locations() const { return locations_; }
  std::size_t size() const { return locations_.size(); }
  const Delivery& package(int j) const { return locations_.at(j - 1); }

  // Deliveries for a subset of package indices, in the given order.
  std::vector<Delivery> select(const std::vector<int>& packages) const;

 private:
  std::vector<Delivery> locations_;
};

// A merge of two clusters. Leaves are clusters 0..M-1 (leaf i holds package
// i+1); merge r creates cluster M+r. `left` is the child holding the smaller
// package index.
struct Merge {
  int left = 0;
  int right = 0;
  double distance = 0.0;  // complete-linkage distance, meters
  int size = 0;

  friend bool operator==(const Merge&, const Merge&) = default;
};

struct ClusterTree {
  int leaf_count = 0;
  std::vector<Merge> merges;  // leaf_count - 1 entries, non-decreasing distance
};

using Partition = std::vector<std::vector<int>>;

// Complete-linkage agglomerative clustering on Euclidean positions. Among
// pairs at equal linkage distance, the pair whose sorted member lists compare
// lexicographically smallest merges first; for disjoint clusters that is the
// pair with the smallest (lower minimum, higher minimum) package indices.
ClusterTree build_tree(const DeliverySet& deliveries);

// Undo the last k-1 merges. Each cluster lists package indices ascending;
// clusters are ordered by their smallest package index.
Partition cut(const ClusterTree& tree, int k);

}  // namespace lastmile
