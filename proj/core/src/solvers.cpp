#include "sensorplace/solvers.hpp"

#include <limits>
#include <map>
#include <string>
#include <vector>

#include "sensorplace/errors.hpp"

namespace sensorplace {
namespace {

void check_inputs(const NetworkSystem& sys, const CostModel& costs,
                  const DistanceMap& dmap) {
  if (!sys.noiseless()) {
    throw ArgumentError("solver requires noiseless measurements (V = 0)");
  }
  costs.validate(sys.size());
  if (dmap.size() != sys.size() || dmap.source != sys.input_node) {
    throw ArgumentError("distance map does not belong to this system");
  }
}

}  // namespace

CovariancePair evaluate_noiseless(const NetworkSystem& sys,
                                  const Indicator& sensors,
                                  const DistanceMap& dmap,
                                  const DareOptions& opts) {
  if (sensors.none()) return dare_solve(sys, sensors, opts);
  return closed_form_covariance(sys, sensors, dmap);
}

SolveReport solve_gkfsp(const NetworkSystem& sys, const CostModel& costs,
                        const DistanceMap& dmap) {
  check_inputs(sys, costs, dmap);
  std::optional<int> best;
  for (int j = 0; j < sys.size(); ++j) {
    if (costs.placement_costs[j] > costs.placement_budget) continue;
    const auto& d = dmap.dist[j];
    if (!d) continue;
    if (!best || *d < *dmap.dist[*best]) best = j;
  }
  if (!best) {
    throw InfeasibleError("no reachable node fits the placement budget " +
                          std::to_string(costs.placement_budget));
  }
  SolveReport report;
  report.chosen = Indicator(sys.size());
  report.chosen.set(*best);
  const CovariancePair cov = closed_form_covariance(sys, report.chosen, dmap);
  report.objective = cov.trace_priori();
  report.objective_posteriori = cov.trace_posteriori();
  report.zeta = dmap.dist[*best];
  report.spent = costs.placement_costs[*best];
  return report;
}

SolveReport solve_gkfsa(const NetworkSystem& sys, const CostModel& costs,
                        const Indicator& placement, const DistanceMap& dmap) {
  check_inputs(sys, costs, dmap);
  if (placement.size() != sys.size()) throw ShapeError("placement length != n");
  if (placement.none()) throw ArgumentError("placement has no sensors");

  // Layers of placed sensors keyed by distance; unreachable sensors last.
  std::map<int, std::vector<int>> layers;
  constexpr int kUnreachableLayer = std::numeric_limits<int>::max();
  for (int j : placement.support()) {
    layers[dmap.dist[j].value_or(kUnreachableLayer)].push_back(j);
  }

  Indicator attack(sys.size());
  std::int64_t remaining = costs.attack_budget;
  for (const auto& [distance, nodes] : layers) {
    std::int64_t layer_cost = 0;
    for (int j : nodes) layer_cost += costs.attack_costs[j];
    if (layer_cost > remaining) break;
    remaining -= layer_cost;
    for (int j : nodes) attack.set(j);
  }

  const Indicator survivors = placement.minus(attack);
  SolveReport report;
  report.chosen = attack;
  report.spent = costs.attack_budget - remaining;
  report.zeta = placement_zeta(survivors, dmap);
  const CovariancePair cov = evaluate_noiseless(sys, survivors, dmap);
  report.objective = cov.trace_priori();
  report.objective_posteriori = cov.trace_posteriori();
  return report;
}

}  // namespace sensorplace
