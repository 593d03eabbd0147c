#pragma once

#include <cstddef>
#include <vector>

#include "sensorplace/indicator.hpp"
#include "sensorplace/kalman.hpp"
#include "sensorplace/system.hpp"

namespace sensorplace {

struct OracleOptions {
  int max_nodes = 14;         ///< cap for placement and attack enumeration
  int max_nodes_minmax = 10;  ///< cap for the resilient min-max enumeration
  DareOptions dare;
  /// On noiseless instances that satisfy the structural assumptions, compare
  /// every Riccati evaluation with the closed form; mismatch throws
  /// VerificationError.
  bool cross_check = true;
  double cross_check_tol = 1e-6;
  /// Objectives within this distance of the optimum are reported as optimal.
  double tie_tol = 1e-9;
};

struct OracleResult {
  std::vector<Indicator> optimal;  ///< every optimal indicator, enumeration order
  TraceValue objective;            ///< a priori trace at the optimum
  std::size_t evaluated_count = 0; ///< distinct sensor sets run through the DARE
};

/// min over h . mu <= H of trace Sigma(mu). Throws InfeasibleError when only
/// the empty placement fits the budget.
OracleResult brute_gkfsp(const NetworkSystem& sys, const CostModel& costs,
                         const OracleOptions& opts = {});

/// max over nu within supp(mu), f . nu <= F, of trace Sigma(mu \ nu).
OracleResult brute_gkfsa(const NetworkSystem& sys, const CostModel& costs,
                         const Indicator& placement,
                         const OracleOptions& opts = {});

/// min over h . mu <= H of max over attacks of trace Sigma(mu \ nu), with
/// Infinite above every finite value.
OracleResult brute_rgkfsp(const NetworkSystem& sys, const CostModel& costs,
                          const OracleOptions& opts = {});

}  // namespace sensorplace
