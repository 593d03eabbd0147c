#include "sensorplace/resilient.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "sensorplace/errors.hpp"

namespace sensorplace {

KnapsackSolution knapsack_dp(const KnapsackInstance& inst) {
  const std::size_t items = inst.values.size();
  if (inst.sizes.size() != items) throw ShapeError("knapsack values/sizes lengths differ");
  if (inst.capacity < 0) throw ArgumentError("knapsack capacity must be >= 0");
  for (std::size_t i = 0; i < items; ++i) {
    if (inst.values[i] < 0 || inst.sizes[i] < 0) {
      throw ArgumentError("knapsack values and sizes must be >= 0");
    }
  }

  const auto cap = static_cast<std::size_t>(inst.capacity);
  const std::size_t width = cap + 1;
  // best[c]: optimum over the items seen so far with capacity c.
  // take[i * width + c]: item i strictly improves the optimum at capacity c.
  std::vector<std::int64_t> best(width, 0);
  std::vector<std::uint8_t> take(items * width, 0);
  for (std::size_t i = 0; i < items; ++i) {
    const auto size = inst.sizes[i];
    if (size > inst.capacity) continue;
    const auto s = static_cast<std::size_t>(size);
    for (std::size_t c = cap + 1; c-- > s;) {
      const std::int64_t with = best[c - s] + inst.values[i];
      if (with > best[c]) {
        best[c] = with;
        take[i * width + c] = 1;
      }
    }
  }

  KnapsackSolution sol;
  sol.pick = Indicator(static_cast<int>(items));
  sol.value = best[cap];
  std::size_t c = cap;
  for (std::size_t i = items; i-- > 0;) {
    if (take[i * width + c]) {
      sol.pick.set(static_cast<int>(i));
      c -= static_cast<std::size_t>(inst.sizes[i]);
      sol.used += inst.sizes[i];
    }
  }
  return sol;
}

bool is_feasible_placement(const Indicator& placement, const CostModel& costs) {
  if (placement.size() != static_cast<int>(costs.placement_costs.size())) {
    throw ShapeError("placement length != cost vector length");
  }
  return placement.cost(costs.placement_costs) <= costs.placement_budget &&
         placement.cost(costs.attack_costs) > costs.attack_budget;
}

SolveReport solve_rgkfsp(const NetworkSystem& sys, const CostModel& costs,
                         const DistanceMap& dmap) {
  if (!sys.noiseless()) {
    throw ArgumentError("solver requires noiseless measurements (V = 0)");
  }
  costs.validate(sys.size());
  if (dmap.size() != sys.size() || dmap.source != sys.input_node) {
    throw ArgumentError("distance map does not belong to this system");
  }
  const int n = sys.size();

  // Reachable nodes sorted by distance, ties by original index.
  std::vector<int> order;
  for (int j = 0; j < n; ++j) {
    if (dmap.reachable(j)) order.push_back(j);
  }
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return *dmap.dist[a] < *dmap.dist[b];
  });

  Indicator placement(n);
  KnapsackInstance prefix;
  prefix.capacity = costs.placement_budget;
  std::size_t next = 0;
  const int lmax = dmap.max_distance();
  for (int m = 0; m <= lmax; ++m) {
    while (next < order.size() && *dmap.dist[order[next]] == m) {
      prefix.values.push_back(costs.attack_costs[order[next]]);
      prefix.sizes.push_back(costs.placement_costs[order[next]]);
      ++next;
    }
    const KnapsackSolution sol = knapsack_dp(prefix);
    if (sol.value > costs.attack_budget) {
      for (int k : sol.pick.support()) placement.set(order[k]);
      break;
    }
  }

  SolveReport report;
  report.chosen = placement;
  report.spent = placement.cost(costs.placement_costs);
  if (placement.none()) {
    const CovariancePair cov = dare_solve(sys, placement);
    report.attack = Indicator(n);
    report.objective = cov.trace_priori();
    report.objective_posteriori = cov.trace_posteriori();
    return report;
  }
  const SolveReport worst = solve_gkfsa(sys, costs, placement, dmap);
  report.attack = worst.chosen;
  report.objective = worst.objective;
  report.objective_posteriori = worst.objective_posteriori;
  report.zeta = worst.zeta;
  return report;
}

int binary_length(std::int64_t k) {
  if (k < 1) throw ArgumentError("binary length needs k >= 1");
  int bits = 0;
  while (k > 0) {
    ++bits;
    k >>= 1;
  }
  return bits;
}

std::pair<NetworkSystem, CostModel> build_reduction_instance(
    const SubsetSumInstance& ss) {
  if (ss.target < 1) throw ArgumentError("subset-sum target must be >= 1");
  if (ss.sizes.empty()) throw ArgumentError("subset-sum set must be non-empty");
  for (auto s : ss.sizes) {
    if (s < 1) throw ArgumentError("subset-sum sizes must be >= 1");
  }
  const int items = static_cast<int>(ss.sizes.size());
  const int bits = binary_length(ss.target);
  const int n = items + bits;

  Matrix a = Matrix::Zero(n, n);
  for (int i = 0; i + 1 < n; ++i) {
    a(i, i + 1) = 1.0 / 3.0;
    a(i + 1, i) = 1.0 / 3.0;
  }
  for (int m = 1; m + 1 < n; ++m) a(m, m) = 1.0 / 3.0;
  a(0, 0) = 2.0 / 3.0;
  a(n - 1, n - 1) = 2.0 / 3.0;

  NetworkSystem sys{std::move(a), 0, 1.0, std::nullopt};

  CostModel costs;
  costs.placement_costs = ss.sizes;
  for (int i = 0; i < bits; ++i) {
    costs.placement_costs.push_back(std::int64_t{1} << i);
  }
  costs.attack_costs = costs.placement_costs;
  costs.placement_budget = ss.target;
  costs.attack_budget = ss.target - 1;
  return {std::move(sys), std::move(costs)};
}

}  // namespace sensorplace
