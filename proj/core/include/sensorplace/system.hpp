#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "sensorplace/indicator.hpp"
#include "sensorplace/linalg.hpp"

namespace sensorplace {

/// x[k+1] = A x[k] + e_{i0} w[k], y[k] = x[k] + v[k], with Var(w) = sigma_w^2
/// and Cov(v) = V. A sensor on node i measures coordinate i.
struct NetworkSystem {
  Matrix dynamics;
  int input_node = 0;
  double input_variance = 1.0;
  /// Full n x n noise covariance; empty means noiseless measurements.
  std::optional<Matrix> sensor_noise;

  int size() const { return static_cast<int>(dynamics.rows()); }
  /// True when V is absent or identically zero.
  bool noiseless() const;
  /// B = e_{i0}.
  Vector input_column() const;
  /// C(mu): one row e_i^T per placed sensor, ascending node order.
  Matrix measurement_matrix(const Indicator& placement) const;
  /// V(mu): principal submatrix of V on the placed sensors.
  Matrix noise_for(const Indicator& placement) const;
  NetworkSystem without_noise() const;

  /// Throws ShapeError / IndexError / ArgumentError when an invariant fails.
  void validate(double psd_tol = 1e-10) const;
};

/// Integer placement costs h with budget H, attack costs f with budget F.
struct CostModel {
  std::vector<std::int64_t> placement_costs;
  std::int64_t placement_budget = 0;
  std::vector<std::int64_t> attack_costs;
  std::int64_t attack_budget = 0;

  void validate(int node_count) const;
  static CostModel uniform(int node_count, std::int64_t placement_budget,
                           std::int64_t attack_budget);
};

}  // namespace sensorplace
