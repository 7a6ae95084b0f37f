#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "lastmile/routing.h"
#include "lastmile/scenario_io.h"
#include "support.h"

using namespace lastmile;
using support::category_of;

namespace {

std::vector<Delivery> at_nodes(const RoadNetwork& net, std::vector<NodeId> nodes) {
  return DeliverySet::from_nodes(net, nodes).locations();
}

// Cheapest tour over every visiting order, straight from shortest-path costs.
double brute_tour(const RoadNetwork& net, std::vector<Delivery> stops) {
  std::sort(stops.begin(), stops.end(),
            [](const auto& a, const auto& b) { return a.package < b.package; });
  double best = 1e300;
  do {
    double cost = 0.0;
    NodeId at = net.depot();
    for (const auto& s : stops) {
      cost += shortest_path(net, at, s.node).cost;
      at = s.node;
    }
    cost += shortest_path(net, at, net.depot()).cost;
    best = std::min(best, cost);
  } while (std::next_permutation(stops.begin(), stops.end(), [](const auto& a, const auto& b) {
    return a.package < b.package;
  }));
  return best;
}

}  // namespace

TEST_SUITE("routing") {

TEST_CASE("single delivery is out and back") {
  const auto net = support::line(4);
  const auto r = greedy_route(net, at_nodes(net, {3}));
  CHECK(r.path == std::vector<NodeId>{0, 1, 2, 3, 2, 1, 0});
  CHECK(r.sequence == std::vector<int>{1});
  CHECK(r.round_trip == 6.0);
  CHECK(r.delivery_times.at(1) == 3.0);
}

TEST_CASE("hand-traced nearest-next tour on a line") {
  const auto net = support::line(6);
  const auto r = greedy_route(net, at_nodes(net, {3, 1, 5}));
  CHECK(r.sequence == std::vector<int>{2, 1, 3});
  CHECK(r.round_trip == 10.0);
  CHECK(r.delivery_times == std::map<int, Seconds>{{1, 3.0}, {2, 1.0}, {3, 5.0}});
}

TEST_CASE("equidistant stops go to the lower package index") {
  RoadNetwork net({{0, {0, 0}, true}, {1, {1, 0}}, {2, {-1, 0}}},
                  {{0, 1, 1, 1, Geometry::Straight},
                   {1, 0, 1, 1, Geometry::Straight},
                   {0, 2, 1, 1, Geometry::Straight},
                   {2, 0, 1, 1, Geometry::Straight}});
  CHECK(greedy_route(net, at_nodes(net, {2, 1})).sequence == std::vector<int>{1, 2});
  CHECK(greedy_route(net, at_nodes(net, {1, 2})).sequence == std::vector<int>{1, 2});
  CHECK(exact_route(net, at_nodes(net, {2, 1})).sequence == std::vector<int>{1, 2});
}

TEST_CASE("delivery time is the first pass through the node") {
  const auto net = support::line(4);
  const auto stops = at_nodes(net, {3, 1});
  const auto r = assemble_route(net, stops, 2);
  CHECK(r.vehicle == 2);
  CHECK(r.sequence == std::vector<int>{1, 2});
  CHECK(r.path == std::vector<NodeId>{0, 1, 2, 3, 2, 1, 0});
  CHECK(r.delivery_times.at(2) == 1.0);
  CHECK(r.delivery_times.at(1) == 3.0);
}

TEST_CASE("fixture routes: exact is optimal and never worse than greedy") {
  const auto& net = support::fixture();
  const auto scenarios = gen_scenarios(net, 5, 25, 21);
  for (const auto& s : scenarios) {
    const auto stops = DeliverySet::from_nodes(net, s.deliveries).locations();
    const auto g = greedy_route(net, stops);
    const auto e = exact_route(net, stops);
    CHECK(e.round_trip == doctest::Approx(brute_tour(net, stops)).epsilon(1e-12));
    CHECK(e.round_trip <= g.round_trip + 1e-9);
    const std::vector<NodeId> path = g.path;
    CHECK(path_cost(net, path) == doctest::Approx(g.round_trip).epsilon(1e-12));
    CHECK(g.path.front() == net.depot());
    CHECK(g.path.back() == net.depot());
  }
}

TEST_CASE("greedy issues n(n+1)/2 + 1 shortest-path queries") {
  const auto& net = support::fixture();
  for (int n = 1; n <= 12; ++n) {
    const auto s = gen_scenarios(net, n, 1, 100 + n).front();
    RouteStats stats;
    greedy_route(net, DeliverySet::from_nodes(net, s.deliveries).locations(), 0, &stats);
    CHECK(stats.shortest_path_queries == static_cast<std::uint64_t>(n * (n + 1) / 2 + 1));
  }
}

TEST_CASE("exact routing refuses instances above the cap") {
  const auto& net = support::fixture();
  const auto s = gen_scenarios(net, 10, 1, 4).front();
  const auto stops = DeliverySet::from_nodes(net, s.deliveries).locations();
  CHECK(category_of([&] { exact_route(net, stops); }) == ErrorCategory::Cap);
  const std::vector<Delivery> four(stops.begin(), stops.begin() + 4);
  CHECK(category_of([&] { exact_route(net, four, 0, 3); }) == ErrorCategory::Cap);
  CHECK_FALSE(category_of([&] { exact_route(net, four, 0, 4); }).has_value());
  CHECK(category_of([&] { greedy_route(net, {}); }) == ErrorCategory::Validation);
}

TEST_CASE("assignment matrix from clusters") {
  const auto a = assignment_from_clusters({{1, 3}, {2}}, 3, 4);
  CHECK(a.vehicles() == 4);
  CHECK(a.columns_valid());
  CHECK(a.packages_of(0) == std::vector<int>{1, 3});
  CHECK(a.packages_of(1) == std::vector<int>{2});
  CHECK(a.packages_of(3).empty());
  CHECK(a.at(1, 2));
  CHECK_FALSE(a.at(0, 2));
  CHECK(category_of([] { assignment_from_clusters({{1, 2}, {2}}, 2); }) ==
        ErrorCategory::Validation);
  CHECK(category_of([] { assignment_from_clusters({{1}}, 2); }) == ErrorCategory::Validation);
  CHECK(category_of([] { assignment_from_clusters({{1}, {2}}, 2, 1); }) ==
        ErrorCategory::Validation);
  CHECK(category_of([] { assignment_from_clusters({{1, 4}}, 3); }) ==
        ErrorCategory::Validation);
}

}  // TEST_SUITE
