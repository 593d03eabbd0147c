#include "sensorplace/oracle.hpp"

#include <bit>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>

#include "sensorplace/errors.hpp"
#include "sensorplace/graph.hpp"
#include "sensorplace/instance.hpp"

namespace sensorplace {
namespace {

// Lazily evaluated a priori trace for every sensor subset, keyed by bit mask.
class SubsetEvaluator {
 public:
  SubsetEvaluator(const NetworkSystem& sys, const OracleOptions& opts)
      : sys_(sys), opts_(opts) {
    if (opts.cross_check && sys.noiseless() && assumptions_hold(sys)) {
      dmap_ = bfs_distances(graph_from_matrix(sys.dynamics), sys.input_node);
    }
  }

  TraceValue operator()(std::uint64_t mask) {
    if (const auto it = memo_.find(mask); it != memo_.end()) return it->second;
    const Indicator sensors = Indicator::from_mask(sys_.size(), mask);
    const CovariancePair cov = dare_solve(sys_, sensors, opts_.dare);
    if (dmap_ && !sensors.none()) cross_check(sensors, cov);
    ++evaluated_;
    return memo_.emplace(mask, cov.trace_priori()).first->second;
  }

  std::size_t evaluated() const { return evaluated_; }

 private:
  void cross_check(const Indicator& sensors, const CovariancePair& cov) const {
    const CovariancePair closed = closed_form_covariance(sys_, sensors, *dmap_);
    if (cov.is_infinite() ||
        max_abs_diff(cov.priori(), closed.priori()) > opts_.cross_check_tol ||
        max_abs_diff(cov.posteriori(), closed.posteriori()) > opts_.cross_check_tol) {
      throw VerificationError("Riccati and closed-form covariances disagree for " +
                              sensors.to_string());
    }
  }

  const NetworkSystem& sys_;
  const OracleOptions& opts_;
  std::unordered_map<std::uint64_t, TraceValue> memo_;
  std::optional<DistanceMap> dmap_;
  std::size_t evaluated_ = 0;
};

// Keeps every candidate within tie_tol of the running optimum.
class Incumbent {
 public:
  Incumbent(bool maximize, double tie_tol) : maximize_(maximize), tie_tol_(tie_tol) {}

  void offer(TraceValue value, const Indicator& who) {
    if (!best_ || better(value, *best_)) {
      if (!best_ || !approx_equal(value, *best_, tie_tol_)) winners_.clear();
      best_ = value;
      winners_.push_back(who);
    } else if (approx_equal(value, *best_, tie_tol_)) {
      winners_.push_back(who);
    }
  }

  bool empty() const { return !best_.has_value(); }
  OracleResult finish(std::size_t evaluated) && {
    return OracleResult{std::move(winners_), best_.value_or(TraceValue::infinity()),
                        evaluated};
  }

 private:
  bool better(TraceValue a, TraceValue b) const { return maximize_ ? a > b : a < b; }

  bool maximize_;
  double tie_tol_;
  std::optional<TraceValue> best_;
  std::vector<Indicator> winners_;
};

void check_size(int n, int cap, const char* what) {
  if (n > cap || n > 62) {
    throw SizeError(std::string(what) + ": " + std::to_string(n) +
                    " nodes exceeds the enumeration cap of " + std::to_string(cap));
  }
}

std::int64_t mask_cost(std::uint64_t mask, const std::vector<std::int64_t>& costs) {
  std::int64_t total = 0;
  while (mask) {
    total += costs[std::countr_zero(mask)];
    mask &= mask - 1;
  }
  return total;
}

}  // namespace

OracleResult brute_gkfsp(const NetworkSystem& sys, const CostModel& costs,
                         const OracleOptions& opts) {
  const int n = sys.size();
  check_size(n, opts.max_nodes, "brute_gkfsp");
  costs.validate(n);
  SubsetEvaluator eval(sys, opts);
  Incumbent best(/*maximize=*/false, opts.tie_tol);

  // Gray-code walk: consecutive placements differ in one bit, so the cost is
  // updated incrementally.
  std::uint64_t prev = 0;
  std::int64_t cost = 0;
  bool nonempty_fits = false;
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t k = 0; k < total; ++k) {
    const std::uint64_t mask = k ^ (k >> 1);
    if (const std::uint64_t flip = mask ^ prev) {
      const int bit = std::countr_zero(flip);
      cost += (mask & flip) ? costs.placement_costs[bit] : -costs.placement_costs[bit];
    }
    prev = mask;
    if (cost > costs.placement_budget) continue;
    if (mask != 0) nonempty_fits = true;
    best.offer(eval(mask), Indicator::from_mask(n, mask));
  }
  if (!nonempty_fits) {
    throw InfeasibleError("no sensor fits the placement budget " +
                          std::to_string(costs.placement_budget));
  }
  return std::move(best).finish(eval.evaluated());
}

OracleResult brute_gkfsa(const NetworkSystem& sys, const CostModel& costs,
                         const Indicator& placement, const OracleOptions& opts) {
  const int n = sys.size();
  if (placement.size() != n) throw ShapeError("placement length != n");
  costs.validate(n);
  const std::vector<int> placed = placement.support();
  const int p = static_cast<int>(placed.size());
  check_size(p, opts.max_nodes, "brute_gkfsa");
  if (n > 62) throw SizeError("brute_gkfsa: too many nodes for bit masks");

  SubsetEvaluator eval(sys, opts);
  Incumbent best(/*maximize=*/true, opts.tie_tol);
  const std::uint64_t placed_mask = placement.mask();

  std::uint64_t prev = 0;
  std::uint64_t attack_mask = 0;
  std::int64_t cost = 0;
  for (std::uint64_t k = 0; k < (std::uint64_t{1} << p); ++k) {
    const std::uint64_t code = k ^ (k >> 1);
    if (const std::uint64_t flip = code ^ prev) {
      const int local = std::countr_zero(flip);
      const int node = placed[local];
      const bool on = (code & flip) != 0;
      cost += on ? costs.attack_costs[node] : -costs.attack_costs[node];
      attack_mask ^= std::uint64_t{1} << node;
    }
    prev = code;
    if (cost > costs.attack_budget) continue;
    best.offer(eval(placed_mask & ~attack_mask), Indicator::from_mask(n, attack_mask));
  }
  return std::move(best).finish(eval.evaluated());
}

OracleResult brute_rgkfsp(const NetworkSystem& sys, const CostModel& costs,
                          const OracleOptions& opts) {
  const int n = sys.size();
  check_size(n, opts.max_nodes_minmax, "brute_rgkfsp");
  costs.validate(n);
  SubsetEvaluator eval(sys, opts);
  Incumbent best(/*maximize=*/false, opts.tie_tol);

  std::uint64_t prev = 0;
  std::int64_t cost = 0;
  for (std::uint64_t k = 0; k < (std::uint64_t{1} << n); ++k) {
    const std::uint64_t mask = k ^ (k >> 1);
    if (const std::uint64_t flip = mask ^ prev) {
      const int bit = std::countr_zero(flip);
      cost += (mask & flip) ? costs.placement_costs[bit] : -costs.placement_costs[bit];
    }
    prev = mask;
    if (cost > costs.placement_budget) continue;

    // Worst case over every budget-feasible attack (submasks of mask).
    std::optional<TraceValue> worst;
    for (std::uint64_t attack = mask;; attack = (attack - 1) & mask) {
      if (mask_cost(attack, costs.attack_costs) <= costs.attack_budget) {
        const TraceValue v = eval(mask & ~attack);
        if (!worst || v > *worst) worst = v;
      }
      if (attack == 0) break;
    }
    best.offer(*worst, Indicator::from_mask(n, mask));
  }
  return std::move(best).finish(eval.evaluated());
}

}  // namespace sensorplace
