#include "lastmile/fleet_optimizer.h"

#include <algorithm>
#include <chrono>
#include <string>

#include "lastmile/error.h"
#include "parallel.h"

namespace lastmile {

namespace {

void check_alpha(double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw validation_error("alpha must lie in [0, 1], got " + std::to_string(alpha));
  }
}

double safe_ratio(double value, double max) { return max > 0.0 ? value / max : 0.0; }

}  // namespace

FleetEvaluation evaluate(const RoadNetwork& net, const DeliverySet& deliveries,
                         const Partition& partition) {
  const int m = static_cast<int>(deliveries.size());
  const auto assignment = assignment_from_clusters(partition, m);

  FleetEvaluation eval;
  eval.k = static_cast<int>(partition.size());
  Seconds delivery_sum = 0.0;
  for (int i = 0; i < assignment.vehicles(); ++i) {
    const auto packages = assignment.packages_of(i);
    if (packages.empty()) continue;
    const auto stops = deliveries.select(packages);
    auto route = greedy_route(net, stops, i);
    eval.operating += route.round_trip;
    for (const auto& [j, t] : route.delivery_times) delivery_sum += t;
    eval.routes.push_back(std::move(route));
  }
  eval.satisfaction = delivery_sum / m;
  return eval;
}

void normalize(std::span<FleetEvaluation> evals, double alpha) {
  check_alpha(alpha);
  Seconds max_s = 0.0, max_c = 0.0;
  for (const auto& e : evals) {
    max_s = std::max(max_s, e.satisfaction);
    max_c = std::max(max_c, e.operating);
  }
  for (auto& e : evals) {
    e.satisfaction_norm = safe_ratio(e.satisfaction, max_s);
    e.operating_norm = safe_ratio(e.operating, max_c);
    e.total = alpha * e.satisfaction_norm + (1.0 - alpha) * e.operating_norm;
  }
}

int best_fleet_size(std::span<const FleetEvaluation> evals) {
  if (evals.empty()) throw validation_error("no fleet evaluations");
  const auto* best = &evals.front();
  for (const auto& e : evals) {
    if (e.total < best->total) best = &e;
  }
  return best->k;
}

std::vector<bool> pareto_frontier(std::span<const CostPoint> points) {
  // Sort by operating cost, then satisfaction; a point is dominated iff an
  // earlier point in this order has satisfaction no worse and differs from it.
  std::vector<std::size_t> order(points.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](auto a, auto b) {
    if (points[a].operating != points[b].operating) {
      return points[a].operating < points[b].operating;
    }
    return points[a].satisfaction < points[b].satisfaction;
  });

  std::vector<bool> flags(points.size(), false);
  bool have_best = false;
  CostPoint best;  // earlier point with the lowest satisfaction
  for (auto i : order) {
    const auto& p = points[i];
    const bool dominated =
        have_best && best.satisfaction <= p.satisfaction &&
        (best.operating < p.operating || best.satisfaction < p.satisfaction);
    flags[i] = !dominated;
    if (!have_best || p.satisfaction < best.satisfaction) {
      best = p;
      have_best = true;
    }
  }
  return flags;
}

SweepResult sweep(const RoadNetwork& net, const DeliverySet& deliveries,
                  int vehicles, double alpha, const SweepOptions& options) {
  if (vehicles < 1) throw validation_error("at least one vehicle is required");
  if (deliveries.size() == 0) throw validation_error("at least one delivery is required");
  check_alpha(alpha);

  SweepResult result;
  result.alpha = alpha;
  result.tree = build_tree(deliveries);
  const int kmax = std::min(vehicles, static_cast<int>(deliveries.size()));
  result.evaluations.resize(kmax);
  detail::parallel_for(kmax, options.threads, [&](std::size_t idx) {
    const int k = static_cast<int>(idx) + 1;
    result.evaluations[idx] = evaluate(net, deliveries, cut(result.tree, k));
  });

  normalize(result.evaluations, alpha);
  result.best_k = best_fleet_size(result.evaluations);
  std::vector<CostPoint> points;
  for (const auto& e : result.evaluations) points.push_back(e.point());
  const auto flags = pareto_frontier(points);
  for (std::size_t i = 0; i < flags.size(); ++i) result.evaluations[i].pareto = flags[i];
  return result;
}

BatchResult batch_sweep(const RoadNetwork& net,
                        std::span<const DeliverySet> scenarios, int vehicles,
                        double alpha, const SweepOptions& options) {
  check_alpha(alpha);
  std::vector<SweepResult> sweeps(scenarios.size());
  detail::parallel_for(scenarios.size(), options.threads, [&](std::size_t s) {
    sweeps[s] = sweep(net, scenarios[s], vehicles, alpha);
  });

  BatchResult batch;
  batch.alpha = alpha;
  std::vector<FleetEvaluation> all;
  std::vector<CostPoint> points;
  for (std::size_t s = 0; s < sweeps.size(); ++s) {
    for (const auto& e : sweeps[s].evaluations) {
      BatchRecord r;
      r.scenario = s;
      r.k = e.k;
      r.satisfaction = e.satisfaction;
      r.operating = e.operating;
      r.pareto_in_scenario = e.pareto;
      batch.records.push_back(r);
      all.push_back(e);
      points.push_back(e.point());
    }
  }

  normalize(all, alpha);
  const auto flags = pareto_frontier(points);
  std::vector<double> sum;
  std::vector<int> count;
  for (std::size_t i = 0; i < batch.records.size(); ++i) {
    auto& r = batch.records[i];
    r.satisfaction_norm = all[i].satisfaction_norm;
    r.operating_norm = all[i].operating_norm;
    r.total = all[i].total;
    r.pareto_in_batch = flags[i];
    if (static_cast<int>(sum.size()) < r.k) {
      sum.resize(r.k, 0.0);
      count.resize(r.k, 0);
    }
    sum[r.k - 1] += r.total;
    ++count[r.k - 1];
  }
  for (std::size_t k = 0; k < sum.size(); ++k) {
    batch.mean_total.push_back(count[k] ? sum[k] / count[k] : 0.0);
  }
  return batch;
}

std::vector<GapRecord> gap_study(const RoadNetwork& net,
                                 std::span<const DeliverySet> scenarios,
                                 std::size_t cap) {
  using Clock = std::chrono::steady_clock;
  std::vector<GapRecord> out;
  out.reserve(scenarios.size());
  for (std::size_t s = 0; s < scenarios.size(); ++s) {
    const auto& stops = scenarios[s].locations();
    if (stops.size() > cap) {
      throw cap_error("scenario " + std::to_string(s) + " has " +
                      std::to_string(stops.size()) +
                      " packages, above the exact-oracle cap of " +
                      std::to_string(cap));
    }
    GapRecord r;
    r.scenario = s;
    r.packages = static_cast<int>(stops.size());

    auto t0 = Clock::now();
    r.greedy_time = greedy_route(net, stops).round_trip;
    auto t1 = Clock::now();
    r.exact_time = exact_route(net, stops, 0, cap).round_trip;
    auto t2 = Clock::now();

    // Equal-cost orders may sum their edges in a different order.
    r.gap = costs_tied(r.greedy_time, r.exact_time)
                ? 0.0
                : (r.greedy_time - r.exact_time) / r.exact_time;
    r.greedy_wall_seconds = std::chrono::duration<double>(t1 - t0).count();
    r.exact_wall_seconds = std::chrono::duration<double>(t2 - t1).count();
    out.push_back(r);
  }
  return out;
}

}  // namespace lastmile
