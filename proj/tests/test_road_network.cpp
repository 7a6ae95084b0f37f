#include <doctest.h>

#include <cmath>
#include <random>

#include "lastmile/road_network.h"
#include "oracles.h"
#include "support.h"

using namespace lastmile;
using support::category_of;

namespace {

Edge straight(NodeId a, NodeId b, double len, double v = 1.0) {
  return {a, b, len, v, Geometry::Straight};
}

RawSegment seg(Vec2 a, Vec2 b, bool from_depot = false) {
  return {a, b, distance(a, b), 0.5, Geometry::Straight, from_depot, false};
}

}  // namespace

TEST_SUITE("road_network") {

TEST_CASE("triangle takes the two cheap edges") {
  const auto net = support::triangle();
  const auto p = shortest_path(net, 0, 2);
  CHECK(p.nodes == std::vector<NodeId>{0, 1, 2});
  CHECK(p.cost == 2.0);
  CHECK(shortest_path(net, 2, 0).cost == 3.0);
}

TEST_CASE("path to self is the single node") {
  const auto p = shortest_path(support::triangle(), 1, 1);
  CHECK(p.nodes == std::vector<NodeId>{1});
  CHECK(p.cost == 0.0);
}

TEST_CASE("equal-cost paths resolve to the smallest id sequence") {
  // 0->1->3 and 0->2->3 both cost 2; so does 0->4->3 via ids that sort later.
  RoadNetwork net({{0, {0, 0}, true}, {1, {1, 1}}, {2, {1, -1}}, {3, {2, 0}}, {4, {1, 0}}},
                  {straight(0, 2, 1), straight(2, 3, 1), straight(0, 4, 1), straight(4, 3, 1),
                   straight(0, 1, 1), straight(1, 3, 1), straight(3, 0, 2)});
  CHECK(shortest_path(net, 0, 3).nodes == std::vector<NodeId>{0, 1, 3});
}

TEST_CASE("shortest paths agree with exhaustive enumeration") {
  std::mt19937_64 rng(7);
  for (int g = 0; g < 40; ++g) {
    const int n = 2 + g % 7;
    const auto net = oracle::random_graph(rng, n);
    for (const auto& a : net.nodes()) {
      for (const auto& b : net.nodes()) {
        const auto want = oracle::brute_shortest(net, a.id, b.id);
        const auto got = shortest_path(net, a.id, b.id);
        CHECK(got.cost == want.cost);
        CHECK(got.nodes == want.nodes);
      }
    }
  }
}

TEST_CASE("fixture distances satisfy the triangle inequality") {
  const auto& net = support::fixture();
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<std::size_t> pick(0, net.nodes().size() - 1);
  for (int i = 0; i < 200; ++i) {
    const auto a = net.nodes()[pick(rng)].id;
    const auto b = net.nodes()[pick(rng)].id;
    const auto c = net.nodes()[pick(rng)].id;
    CHECK(shortest_path(net, a, c).cost <=
          shortest_path(net, a, b).cost + shortest_path(net, b, c).cost + 1e-9);
  }
}

TEST_CASE("path cost sums edge travel times") {
  RoadNetwork net({{0, {0, 0}, true}, {1, {10, 0}}},
                  {straight(0, 1, 10.0, 0.5), straight(1, 0, 10.0, 0.25)});
  const std::vector<NodeId> out{0, 1}, round{0, 1, 0};
  CHECK(path_cost(net, out) == 20.0);
  CHECK(path_cost(net, round) == 60.0);
  const std::vector<NodeId> bad{0, 0};
  CHECK(category_of([&] { path_cost(net, bad); }) == ErrorCategory::Validation);
}

TEST_CASE("edges are stored by source then target") {
  const auto& net = support::fixture();
  CHECK(net.nodes().size() == 40);
  CHECK(net.edges().size() == 90);
  CHECK(net.depot() == 0);
  for (const auto& n : net.nodes()) {
    NodeId prev = -1;
    for (const auto& e : net.out_edges(n.id)) {
      CHECK(e.from == n.id);
      CHECK(e.to > prev);
      prev = e.to;
      CHECK(net.find_edge(e.from, e.to) == &e);
    }
  }
  CHECK(net.find_edge(0, 39) == nullptr);
}

TEST_CASE("constructor rejects malformed graphs") {
  const std::vector<Node> two{{0, {0, 0}, true}, {1, {1, 0}}};
  const auto ok = std::vector<Edge>{straight(0, 1, 1), straight(1, 0, 1)};
  auto rejects = [](std::vector<Node> n, std::vector<Edge> e) {
    return category_of([&] { RoadNetwork(std::move(n), std::move(e)); });
  };
  CHECK_FALSE(rejects(two, ok).has_value());
  CHECK(rejects({{0, {0, 0}, true}, {0, {1, 0}}}, ok) == ErrorCategory::Validation);
  CHECK(rejects({{0, {0, 0}, true}, {1, {1, 0}, true}}, ok) == ErrorCategory::Validation);
  CHECK(rejects({{0, {0, 0}}, {1, {1, 0}}}, ok) == ErrorCategory::Validation);
  CHECK(rejects(two, {straight(0, 1, 1), straight(1, 2, 1)}) == ErrorCategory::Validation);
  CHECK(rejects(two, {straight(0, 1, 1), straight(1, 0, 1), straight(1, 1, 1)}) ==
        ErrorCategory::Validation);
  CHECK(rejects(two, {straight(0, 1, 0), straight(1, 0, 1)}) == ErrorCategory::Validation);
  CHECK(rejects(two, {straight(0, 1, 1, NAN), straight(1, 0, 1)}) == ErrorCategory::Validation);
  CHECK(rejects(two, {straight(0, 1, 1, -1), straight(1, 0, 1)}) == ErrorCategory::Validation);
  CHECK(rejects(two, {straight(0, 1, 1), straight(0, 1, 2), straight(1, 0, 1)}) ==
        ErrorCategory::Validation);
  CHECK(rejects(two, {straight(0, 1, 1)}) == ErrorCategory::Validation);
  CHECK(rejects({{0, {0, 0}, true}, {1, {1, 0}}, {2, {2, 0}}}, ok) == ErrorCategory::Validation);
}

TEST_CASE("disconnection names the stranded node") {
  try {
    RoadNetwork({{0, {0, 0}, true}, {1, {1, 0}}, {7, {2, 0}}},
                {straight(0, 1, 1), straight(1, 0, 1), straight(7, 0, 1)});
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("node 7") != std::string::npos);
  }
}

TEST_CASE("segment endpoints merge by transitive closure") {
  // A square A-B-C-D with a spur E off A and F off B, each street both ways.
  // Junction B is jittered, C is a chain whose ends are 0.08 apart.
  const Vec2 a{0, 0}, d{0, 10}, e{-5, 0}, f{15, 0};
  const Vec2 b1{10, 0}, b2{10.03, 0.01}, b3{9.98, -0.02};
  const Vec2 c1{10, 10}, c2{10.04, 10}, c3{10.08, 10};
  std::vector<RawSegment> segs{
      seg(a, b1, true), seg(b2, a),  seg(b1, c1), seg(c2, b3), seg(c3, d), seg(d, c1),
      seg(d, a),        seg(a, d),   seg(a, e),   seg(e, a),   seg(b3, f), seg(f, b2)};
  const auto net = build_network(segs, 0.05);
  CHECK(net.nodes().size() == 6);
  CHECK(net.edges().size() == 12);
  CHECK(net.depot() == 0);
  CHECK(net.node(0).position == a);
  // B is node 1 (first seen as segment 0's end); C is node 2.
  const auto& b = net.node(1).position;
  CHECK(b.x == doctest::Approx((10 * 2 + 10.03 * 2 + 9.98 * 2) / 6));
  const auto& c = net.node(2).position;
  CHECK(c.x == doctest::Approx((10 * 2 + 10.04 + 10.08) / 4));
  CHECK(c.y == doctest::Approx(10.0));
  CHECK(net.find_edge(1, 2) != nullptr);
  CHECK(net.find_edge(2, 1) != nullptr);
}

TEST_CASE("zero tolerance merges only coincident endpoints") {
  const Vec2 p{0, 0}, q{1, 0}, q_off{1.001, 0};
  const std::vector<RawSegment> exact{seg(p, q, true), seg(q, p)};
  CHECK(build_network(exact, 0.0).nodes().size() == 2);
  const std::vector<RawSegment> apart{seg(p, q, true), seg(q_off, p)};
  CHECK(category_of([&] { build_network(apart, 0.0); }) == ErrorCategory::Validation);
  CHECK(build_network(apart, 0.001 + 1e-12).nodes().size() == 2);
}

TEST_CASE("depot flags must land on one node") {
  const Vec2 p{0, 0}, q{1, 0};
  std::vector<RawSegment> segs{seg(p, q, true), seg(q, p)};
  segs[1].from_is_depot = true;
  CHECK(category_of([&] { build_network(segs, 0.01); }) == ErrorCategory::Validation);
  segs[1].from_is_depot = false;
  segs[0].from_is_depot = false;
  CHECK(category_of([&] { build_network(segs, 0.01); }) == ErrorCategory::Validation);
  CHECK(category_of([&] { build_network({}, 0.01); }) == ErrorCategory::Validation);
  segs[0].from_is_depot = true;
  CHECK(category_of([&] { build_network(segs, -1.0); }) == ErrorCategory::Validation);
}

TEST_CASE("cost ties use a relative tolerance") {
  CHECK(costs_tied(1.0, 1.0 + 1e-12));
  CHECK(costs_tied(1e6, 1e6 + 1e-5));
  CHECK_FALSE(costs_tied(1.0, 1.0 + 1e-6));
  CHECK_FALSE(costs_tied(5.0, INFINITY));
  CHECK(costs_tied(INFINITY, INFINITY));
}

}  // TEST_SUITE
