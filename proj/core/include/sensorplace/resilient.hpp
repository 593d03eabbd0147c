#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "sensorplace/graph.hpp"
#include "sensorplace/indicator.hpp"
#include "sensorplace/solvers.hpp"
#include "sensorplace/system.hpp"

namespace sensorplace {

/// 0/1 knapsack: maximize sum(values * pick) s.t. sum(sizes * pick) <= capacity.
struct KnapsackInstance {
  std::vector<std::int64_t> values;
  std::vector<std::int64_t> sizes;
  std::int64_t capacity = 0;
};

struct KnapsackSolution {
  Indicator pick;
  std::int64_t value = 0;
  std::int64_t used = 0;
};

/// Exact DP over capacities 0..K in O(|U| K) time. Backtracking excludes an
/// item whenever excluding it still attains the optimum, so zero-value items
/// are never picked and zero-size positive-value items always are.
KnapsackSolution knapsack_dp(const KnapsackInstance& inst);

/// Subset-sum instance: positive sizes and a positive target.
struct SubsetSumInstance {
  std::vector<std::int64_t> sizes;
  std::int64_t target = 1;
};

/// Within the placement budget, and no budget-feasible attack removes every
/// placed sensor (equivalently f . mu > F).
bool is_feasible_placement(const Indicator& placement, const CostModel& costs);

/// Resilient placement by layered knapsacks. Nodes are relabeled by distance
/// from the input (stable on ties); for m = 0..l_max the knapsack over all
/// nodes at distance <= m (values f, sizes h, capacity H) is solved, and the
/// first m whose optimum exceeds F fixes the placement. The report carries the
/// worst-case attack and its objective. Returns the empty placement when no
/// feasible placement exists.
SolveReport solve_rgkfsp(const NetworkSystem& sys, const CostModel& costs,
                         const DistanceMap& dmap);

/// Path-graph instance encoding a subset-sum question: |U| + b(K) nodes with
/// b(K) = floor(log2 K) + 1, weights 1/3 on path edges and interior self-loops,
/// 2/3 on the end self-loops, input at node 0 with unit variance,
/// h = f = (sizes..., 1, 2, 4, ...), H = K, F = K - 1.
std::pair<NetworkSystem, CostModel> build_reduction_instance(
    const SubsetSumInstance& ss);

/// floor(log2 k) + 1 for k >= 1.
int binary_length(std::int64_t k);

}  // namespace sensorplace
