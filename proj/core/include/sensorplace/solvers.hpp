#pragma once

#include <cstdint>
#include <optional>

#include "sensorplace/graph.hpp"
#include "sensorplace/indicator.hpp"
#include "sensorplace/kalman.hpp"
#include "sensorplace/system.hpp"

namespace sensorplace {

/// Outcome of a placement or attack solver.
struct SolveReport {
  /// Placement (place, resilient) or attack (attack).
  Indicator chosen;
  /// For the resilient solver: the worst-case attack against `chosen`.
  std::optional<Indicator> attack;
  /// A priori trace of the evaluated sensor set.
  TraceValue objective;
  TraceValue objective_posteriori;
  /// Achieved distance from the input to the nearest (surviving) sensor;
  /// nullopt means unbounded (no sensor left).
  std::optional<int> zeta;
  /// Budget consumed by `chosen`.
  std::int64_t spent = 0;
};

/// Optimal single-sensor placement: the affordable node closest to the input
/// (lowest index on ties). Throws InfeasibleError when nothing is affordable.
SolveReport solve_gkfsp(const NetworkSystem& sys, const CostModel& costs,
                        const DistanceMap& dmap);

/// Optimal attack on `placement` by whole-layer greedy removal in order of
/// distance from the input. The objective is the covariance trace of the
/// survivors; with no survivors it is the no-measurement limit (Infinite
/// unless A is stable).
SolveReport solve_gkfsa(const NetworkSystem& sys, const CostModel& costs,
                        const Indicator& placement, const DistanceMap& dmap);

/// Noiseless covariance of a sensor set under the closed form, falling back
/// to the Riccati iteration when the set is empty.
CovariancePair evaluate_noiseless(const NetworkSystem& sys,
                                  const Indicator& sensors,
                                  const DistanceMap& dmap,
                                  const DareOptions& opts = {});

}  // namespace sensorplace
