#include "lastmile/scenario_io.h"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <random>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

#include "lastmile/error.h"

#ifndef LASTMILE_VERSION
#define LASTMILE_VERSION "dev"
#endif

namespace lastmile {

using Json = nlohmann::ordered_json;

const char* tool_version() { return LASTMILE_VERSION; }

namespace {

// Field accessors that report the document and JSON location on failure.
class Reader {
 public:
  explicit Reader(std::string origin) : origin_(std::move(origin)) {}

  Json parse(const std::string& text) const {
    try {
      return Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      throw parse_error(origin_ + ": " + e.what());
    }
  }

  const Json& field(const Json& obj, const std::string& key, const std::string& where) const {
    if (!obj.is_object()) throw parse_error(origin_ + ": " + where + ": expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) throw parse_error(origin_ + ": " + where + ": missing \"" + key + "\"");
    return *it;
  }

  double number(const Json& v, const std::string& where) const {
    if (!v.is_number()) throw parse_error(origin_ + ": " + where + ": expected a number");
    return v.get<double>();
  }

  std::int64_t integer(const Json& v, const std::string& where) const {
    if (!v.is_number_integer()) throw parse_error(origin_ + ": " + where + ": expected an integer");
    return v.get<std::int64_t>();
  }

  std::string string(const Json& v, const std::string& where) const {
    if (!v.is_string()) throw parse_error(origin_ + ": " + where + ": expected a string");
    return v.get<std::string>();
  }

  bool boolean(const Json& v, const std::string& where) const {
    if (!v.is_boolean()) throw parse_error(origin_ + ": " + where + ": expected true or false");
    return v.get<bool>();
  }

  const Json& array(const Json& v, const std::string& where) const {
    if (!v.is_array()) throw parse_error(origin_ + ": " + where + ": expected an array");
    return v;
  }

  Vec2 point(const Json& v, const std::string& where) const {
    if (!v.is_array() || v.size() != 2) {
      throw parse_error(origin_ + ": " + where + ": expected [x, y]");
    }
    return {number(v[0], where + "[0]"), number(v[1], where + "[1]")};
  }

  Geometry geometry(const Json& v, const std::string& where) const {
    auto g = geometry_from_string(string(v, where));
    if (!g) throw parse_error(origin_ + ": " + where + ": expected \"straight\" or \"arc\"");
    return *g;
  }

  // Validation failures raised while building domain objects get the
  // document name prefixed.
  template <class Fn>
  auto validated(Fn&& fn) const {
    try {
      return fn();
    } catch (const Error& e) {
      if (e.category() != ErrorCategory::Validation) throw;
      throw validation_error(origin_ + ": " + e.what());
    }
  }

  const std::string& origin() const { return origin_; }

 private:
  std::string origin_;
};

std::string at(const std::string& array, std::size_t i) {
  return array + "[" + std::to_string(i) + "]";
}

std::string fmt(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return ec == std::errc{} ? std::string(buf, end) : std::string("nan");
}

Json route_json(const Route& r) {
  Json times = Json::object();
  for (const auto& [j, t] : r.delivery_times) times[std::to_string(j)] = t;
  return Json{{"vehicle", r.vehicle},
              {"sequence", r.sequence},
              {"path", r.path},
              {"round_trip", r.round_trip},
              {"delivery_times", times}};
}

Json scenario_json(const Scenario& s) {
  Json j{{"network", s.network},
         {"deliveries", s.deliveries},
         {"vehicles", s.vehicles},
         {"alpha", s.alpha}};
  if (s.seed) j["seed"] = *s.seed;
  return j;
}

Json idm_json(const IdmParams& p) {
  return Json{{"model", std::string(to_string(p.model))},
              {"time_headway", p.time_headway},
              {"delta", p.delta},
              {"a_max", p.a_max},
              {"a_min", p.a_min},
              {"min_gap", p.min_gap},
              {"v_straight", p.v_straight},
              {"v_arc", p.v_arc},
              {"dwell", p.dwell}};
}

}  // namespace

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw parse_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  auto tmp = path;
  tmp += ".partial";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw parse_error("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw parse_error("failed writing " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw parse_error("cannot move output into place at " + path.string());
  }
}

// Network -------------------------------------------------------------------

RoadNetwork parse_network(const std::string& text, const std::string& origin) {
  const Reader rd(origin);
  const Json doc = rd.parse(text);
  if (!doc.is_object()) throw parse_error(origin + ": expected an object at top level");

  if (doc.contains("segments")) {
    const double tol = doc.contains("merge_tolerance")
                           ? rd.number(doc["merge_tolerance"], "merge_tolerance")
                           : 0.0;
    std::vector<RawSegment> segs;
    const auto& arr = rd.array(doc["segments"], "segments");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const auto w = at("segments", i);
      const auto& s = arr[i];
      RawSegment seg;
      seg.from = rd.point(rd.field(s, "from", w), w + ".from");
      seg.to = rd.point(rd.field(s, "to", w), w + ".to");
      seg.length = rd.number(rd.field(s, "length", w), w + ".length");
      seg.speed_limit = rd.number(rd.field(s, "speed_limit", w), w + ".speed_limit");
      seg.geometry = s.contains("geometry") ? rd.geometry(s["geometry"], w + ".geometry")
                                            : Geometry::Straight;
      if (s.contains("depot")) {
        const auto end = rd.string(s["depot"], w + ".depot");
        if (end == "from") seg.from_is_depot = true;
        else if (end == "to") seg.to_is_depot = true;
        else throw parse_error(origin + ": " + w + ".depot: expected \"from\" or \"to\"");
      }
      segs.push_back(seg);
    }
    return rd.validated([&] { return build_network(segs, tol); });
  }

  std::vector<Node> nodes;
  const auto& narr = rd.array(rd.field(doc, "nodes", "top level"), "nodes");
  for (std::size_t i = 0; i < narr.size(); ++i) {
    const auto w = at("nodes", i);
    const auto& n = narr[i];
    Node node;
    node.id = rd.integer(rd.field(n, "id", w), w + ".id");
    node.position = {rd.number(rd.field(n, "x", w), w + ".x"),
                     rd.number(rd.field(n, "y", w), w + ".y")};
    node.is_depot = n.contains("depot") && rd.boolean(n["depot"], w + ".depot");
    nodes.push_back(node);
  }
  std::vector<Edge> edges;
  const auto& earr = rd.array(rd.field(doc, "edges", "top level"), "edges");
  for (std::size_t i = 0; i < earr.size(); ++i) {
    const auto w = at("edges", i);
    const auto& e = earr[i];
    Edge edge;
    edge.from = rd.integer(rd.field(e, "from", w), w + ".from");
    edge.to = rd.integer(rd.field(e, "to", w), w + ".to");
    edge.length = rd.number(rd.field(e, "length", w), w + ".length");
    edge.speed_limit = rd.number(rd.field(e, "speed_limit", w), w + ".speed_limit");
    edge.geometry = e.contains("geometry") ? rd.geometry(e["geometry"], w + ".geometry")
                                           : Geometry::Straight;
    edges.push_back(edge);
  }
  return rd.validated([&] { return RoadNetwork(std::move(nodes), std::move(edges)); });
}

RoadNetwork load_network(const std::filesystem::path& path) {
  return parse_network(read_file(path), path.string());
}

std::string network_to_json(const RoadNetwork& net) {
  Json nodes = Json::array(), edges = Json::array();
  for (const auto& n : net.nodes()) {
    Json j{{"id", n.id}, {"x", n.position.x}, {"y", n.position.y}};
    if (n.is_depot) j["depot"] = true;
    nodes.push_back(j);
  }
  for (const auto& e : net.edges()) {
    edges.push_back({{"from", e.from},
                     {"to", e.to},
                     {"length", e.length},
                     {"speed_limit", e.speed_limit},
                     {"geometry", std::string(to_string(e.geometry))}});
  }
  return Json{{"nodes", nodes}, {"edges", edges}}.dump(2) + "\n";
}

// Scenario ------------------------------------------------------------------

Scenario parse_scenario(const std::string& text, const std::string& origin) {
  const Reader rd(origin);
  const Json doc = rd.parse(text);
  Scenario s;
  s.network = rd.string(rd.field(doc, "network", "top level"), "network");
  const auto& arr = rd.array(rd.field(doc, "deliveries", "top level"), "deliveries");
  for (std::size_t i = 0; i < arr.size(); ++i) {
    s.deliveries.push_back(rd.integer(arr[i], at("deliveries", i)));
  }
  s.vehicles = static_cast<int>(rd.integer(rd.field(doc, "vehicles", "top level"), "vehicles"));
  if (doc.contains("alpha")) s.alpha = rd.number(doc["alpha"], "alpha");
  if (doc.contains("seed") && !doc["seed"].is_null()) {
    if (!doc["seed"].is_number_unsigned()) {
      throw parse_error(origin + ": seed: expected a non-negative integer");
    }
    s.seed = doc["seed"].get<std::uint64_t>();
  }

  if (s.deliveries.empty()) throw validation_error(origin + ": deliveries: at least one is required");
  if (s.vehicles < 1) throw validation_error(origin + ": vehicles: must be at least 1");
  if (!(s.alpha >= 0.0 && s.alpha <= 1.0)) {
    throw validation_error(origin + ": alpha: must lie in [0, 1], got " + fmt(s.alpha));
  }
  std::unordered_set<NodeId> seen;
  for (std::size_t i = 0; i < s.deliveries.size(); ++i) {
    if (!seen.insert(s.deliveries[i]).second) {
      throw validation_error(origin + ": " + at("deliveries", i) + ": node " +
                             std::to_string(s.deliveries[i]) + " is a duplicate delivery");
    }
  }
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  return parse_scenario(read_file(path), path.string());
}

std::string scenario_to_json(const Scenario& s) { return scenario_json(s).dump(2) + "\n"; }

void save_scenario(const Scenario& s, const std::filesystem::path& path) {
  write_file_atomic(path, scenario_to_json(s));
}

DeliverySet validate_scenario(const Scenario& s, const RoadNetwork& net) {
  for (std::size_t i = 0; i < s.deliveries.size(); ++i) {
    const auto id = s.deliveries[i];
    const auto where = at("deliveries", i) + " (node " + std::to_string(id) + ")";
    if (!net.has_node(id)) throw validation_error(where + ": unknown node");
    if (id == net.depot()) throw validation_error(where + ": the depot cannot be a delivery");
  }
  return DeliverySet::from_nodes(net, s.deliveries);
}

std::filesystem::path network_path_for(const Scenario& s,
                                       const std::filesystem::path& scenario_file) {
  std::filesystem::path p(s.network);
  if (p.is_absolute()) return p;
  return scenario_file.parent_path() / p;
}

// IDM parameters ------------------------------------------------------------

IdmParams parse_idm_params(const std::string& text, const std::string& origin) {
  const Reader rd(origin);
  const Json doc = rd.parse(text);
  if (!doc.is_object()) throw parse_error(origin + ": expected an object at top level");
  IdmParams p;
  const std::pair<const char*, double*> fields[] = {
      {"time_headway", &p.time_headway}, {"delta", &p.delta},
      {"a_max", &p.a_max},               {"a_min", &p.a_min},
      {"min_gap", &p.min_gap},           {"v_straight", &p.v_straight},
      {"v_arc", &p.v_arc},               {"dwell", &p.dwell}};
  for (const auto& [key, slot] : fields) {
    if (doc.contains(key)) *slot = rd.number(doc[key], key);
  }
  if (doc.contains("model")) {
    auto m = idm_model_from_string(rd.string(doc["model"], "model"));
    if (!m) throw parse_error(origin + ": model: expected \"paper-literal\" or \"standard\"");
    p.model = *m;
  }
  rd.validated([&] {
    p.validate();
    return 0;
  });
  return p;
}

IdmParams load_idm_params(const std::filesystem::path& path) {
  return parse_idm_params(read_file(path), path.string());
}

std::string idm_params_to_json(const IdmParams& p) { return idm_json(p).dump(2) + "\n"; }

// Generation ----------------------------------------------------------------

std::vector<Scenario> gen_scenarios(const RoadNetwork& net, int packages,
                                    std::size_t count, std::uint64_t seed,
                                    const std::string& network_ref, int vehicles,
                                    double alpha) {
  std::vector<NodeId> candidates;
  for (const auto& n : net.nodes()) {
    if (!n.is_depot) candidates.push_back(n.id);
  }
  std::sort(candidates.begin(), candidates.end());
  if (packages < 1 || static_cast<std::size_t>(packages) > candidates.size()) {
    throw validation_error("cannot place " + std::to_string(packages) +
                           " packages on a network with " +
                           std::to_string(candidates.size()) + " non-depot nodes");
  }

  std::mt19937_64 rng(seed);
  std::vector<Scenario> out;
  out.reserve(count);
  for (std::size_t c = 0; c < count; ++c) {
    Scenario s;
    s.network = network_ref;
    s.vehicles = vehicles;
    s.alpha = alpha;
    s.seed = seed;
    std::sample(candidates.begin(), candidates.end(), std::back_inserter(s.deliveries),
                packages, rng);
    out.push_back(std::move(s));
  }
  return out;
}

// Results -------------------------------------------------------------------

std::vector<SimulationReport> simulate_sweep(const RoadNetwork& net,
                                             const DeliverySet& deliveries,
                                             const SweepResult& sweep,
                                             std::span<const int> fleet_sizes,
                                             const IdmParams& params,
                                             const SimOptions& options) {
  std::vector<SimulationReport> out;
  const int m = static_cast<int>(deliveries.size());
  for (int k : fleet_sizes) {
    if (k < 1 || k > static_cast<int>(sweep.evaluations.size())) {
      throw validation_error("fleet size " + std::to_string(k) + " outside 1.." +
                             std::to_string(sweep.evaluations.size()));
    }
    SimulationReport r;
    r.k = k;
    r.planned = sweep.evaluations[k - 1];
    r.measured = simulate(net, deliveries, r.planned.routes, params, options);
    Seconds sum = 0.0;
    for (const auto& [j, t] : r.measured.delivery_times) sum += t;
    r.measured_satisfaction = sum / m;
    for (auto t : r.measured.round_trips) r.measured_operating += t;
    out.push_back(std::move(r));
  }

  Seconds ps = 0, pc = 0, ms = 0, mc = 0;
  for (const auto& r : out) {
    ps = std::max(ps, r.planned.satisfaction);
    pc = std::max(pc, r.planned.operating);
    ms = std::max(ms, r.measured_satisfaction);
    mc = std::max(mc, r.measured_operating);
  }
  const double a = sweep.alpha;
  for (auto& r : out) {
    r.planned_total = a * r.planned.satisfaction / ps + (1 - a) * r.planned.operating / pc;
    r.measured_total = a * r.measured_satisfaction / ms + (1 - a) * r.measured_operating / mc;
  }
  return out;
}

std::string results_to_json(const ResultsDocument& doc) {
  Json j;
  j["tool"] = "lastmile";
  j["version"] = tool_version();
  j["seed"] = doc.seed ? Json(*doc.seed) : Json(nullptr);
  if (doc.scenario) j["scenario"] = scenario_json(*doc.scenario);

  if (doc.sweep) {
    const auto& s = *doc.sweep;
    Json merges = Json::array();
    for (const auto& m : s.tree.merges) {
      merges.push_back({{"left", m.left}, {"right", m.right}, {"distance", m.distance},
                        {"size", m.size}});
    }
    Json evals = Json::array();
    for (const auto& e : s.evaluations) {
      Json routes = Json::array();
      for (const auto& r : e.routes) routes.push_back(route_json(r));
      evals.push_back({{"k", e.k},
                       {"satisfaction_cost", e.satisfaction},
                       {"operating_cost", e.operating},
                       {"satisfaction_norm", e.satisfaction_norm},
                       {"operating_norm", e.operating_norm},
                       {"total", e.total},
                       {"pareto", e.pareto},
                       {"routes", routes}});
    }
    j["sweep"] = {{"alpha", s.alpha},
                  {"best_k", s.best_k},
                  {"tree", {{"leaves", s.tree.leaf_count}, {"merges", merges}}},
                  {"evaluations", evals}};
  }

  if (!doc.simulations.empty()) {
    Json runs = Json::array();
    for (const auto& r : doc.simulations) {
      Json times = Json::object();
      for (const auto& [pkg, t] : r.measured.delivery_times) times[std::to_string(pkg)] = t;
      runs.push_back({{"k", r.k},
                      {"planned",
                       {{"satisfaction_cost", r.planned.satisfaction},
                        {"operating_cost", r.planned.operating},
                        {"total", r.planned_total}}},
                      {"measured",
                       {{"satisfaction_cost", r.measured_satisfaction},
                        {"operating_cost", r.measured_operating},
                        {"total", r.measured_total},
                        {"round_trips", r.measured.round_trips},
                        {"delivery_times", times},
                        {"steps", r.measured.steps},
                        {"min_leader_gap", std::isfinite(r.measured.min_leader_gap)
                                               ? Json(r.measured.min_leader_gap)
                                               : Json(nullptr)},
                        {"max_speed_excess", r.measured.max_speed_excess}}}});
    }
    Json sim{{"dt", doc.dt}, {"runs", runs}};
    if (doc.idm) sim["idm"] = idm_json(*doc.idm);
    j["simulation"] = sim;
  }

  if (!doc.gaps.empty()) {
    Json gaps = Json::array();
    for (const auto& g : doc.gaps) {
      Json r{{"scenario", g.scenario},
             {"packages", g.packages},
             {"greedy_time", g.greedy_time},
             {"exact_time", g.exact_time},
             {"gap", g.gap}};
      if (doc.include_timings) {
        r["greedy_wall_seconds"] = g.greedy_wall_seconds;
        r["exact_wall_seconds"] = g.exact_wall_seconds;
      }
      gaps.push_back(r);
    }
    j["gap_study"] = gaps;
  }
  return j.dump(2) + "\n";
}

std::string batch_to_csv(const BatchResult& batch) {
  std::string out =
      "scenario,k,satisfaction_cost,operating_cost,satisfaction_norm,operating_norm,"
      "total,pareto_in_scenario,pareto_in_batch\n";
  for (const auto& r : batch.records) {
    out += std::to_string(r.scenario) + "," + std::to_string(r.k) + "," + fmt(r.satisfaction) +
           "," + fmt(r.operating) + "," + fmt(r.satisfaction_norm) + "," +
           fmt(r.operating_norm) + "," + fmt(r.total) + "," +
           (r.pareto_in_scenario ? "1" : "0") + "," + (r.pareto_in_batch ? "1" : "0") + "\n";
  }
  return out;
}

std::string gaps_to_csv(std::span<const GapRecord> gaps) {
  std::string out = "scenario,packages,greedy_time,exact_time,gap,greedy_wall_s,exact_wall_s\n";
  for (const auto& g : gaps) {
    out += std::to_string(g.scenario) + "," + std::to_string(g.packages) + "," +
           fmt(g.greedy_time) + "," + fmt(g.exact_time) + "," + fmt(g.gap) + "," +
           fmt(g.greedy_wall_seconds) + "," + fmt(g.exact_wall_seconds) + "\n";
  }
  return out;
}

std::string trajectory_to_csv(std::span<const TrajectorySample> samples) {
  std::string out = "t,vehicle,edge,position_m,speed_mps\n";
  for (const auto& s : samples) {
    out += fmt(s.t) + "," + std::to_string(s.vehicle) + "," + std::to_string(s.edge_from) +
           "->" + std::to_string(s.edge_to) + "," + fmt(s.position) + "," + fmt(s.speed) + "\n";
  }
  return out;
}

}  // namespace lastmile
