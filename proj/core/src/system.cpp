#include "sensorplace/system.hpp"

#include <string>

#include "sensorplace/errors.hpp"

namespace sensorplace {

bool NetworkSystem::noiseless() const {
  return !sensor_noise || sensor_noise->size() == 0 ||
         sensor_noise->cwiseAbs().maxCoeff() == 0.0;
}

Vector NetworkSystem::input_column() const {
  return Vector::Unit(size(), input_node);
}

Matrix NetworkSystem::measurement_matrix(const Indicator& placement) const {
  if (placement.size() != size()) throw ShapeError("placement length != n");
  const auto nodes = placement.support();
  Matrix c = Matrix::Zero(static_cast<Eigen::Index>(nodes.size()), size());
  for (std::size_t r = 0; r < nodes.size(); ++r) c(r, nodes[r]) = 1.0;
  return c;
}

Matrix NetworkSystem::noise_for(const Indicator& placement) const {
  const auto nodes = placement.support();
  const auto p = static_cast<Eigen::Index>(nodes.size());
  Matrix v = Matrix::Zero(p, p);
  if (noiseless()) return v;
  for (Eigen::Index r = 0; r < p; ++r) {
    for (Eigen::Index c = 0; c < p; ++c) v(r, c) = (*sensor_noise)(nodes[r], nodes[c]);
  }
  return v;
}

NetworkSystem NetworkSystem::without_noise() const {
  NetworkSystem out = *this;
  out.sensor_noise.reset();
  return out;
}

void NetworkSystem::validate(double psd_tol) const {
  if (dynamics.rows() != dynamics.cols()) {
    throw ShapeError("dynamics matrix must be square");
  }
  if (dynamics.rows() == 0) throw ShapeError("dynamics matrix is empty");
  if (!dynamics.allFinite()) throw ArgumentError("dynamics matrix has non-finite entries");
  if (input_node < 0 || input_node >= size()) {
    throw IndexError("input node " + std::to_string(input_node) + " out of range");
  }
  if (!(input_variance >= 0.0)) throw ArgumentError("input variance must be >= 0");
  if (sensor_noise) {
    const Matrix& v = *sensor_noise;
    if (v.rows() != size() || v.cols() != size()) {
      throw ShapeError("sensor noise covariance must be n x n");
    }
    if (max_abs_diff(v, v.transpose()) > psd_tol * (1.0 + v.cwiseAbs().maxCoeff())) {
      throw ArgumentError("sensor noise covariance is not symmetric");
    }
    if (min_symmetric_eigenvalue(v) < -psd_tol) {
      throw ArgumentError("sensor noise covariance is not positive semi-definite");
    }
  }
}

void CostModel::validate(int node_count) const {
  const auto n = static_cast<std::size_t>(node_count);
  if (placement_costs.size() != n) throw ShapeError("|h| != n");
  if (attack_costs.size() != n) throw ShapeError("|f| != n");
  for (auto c : placement_costs) {
    if (c < 0) throw ArgumentError("placement costs must be >= 0");
  }
  for (auto c : attack_costs) {
    if (c < 0) throw ArgumentError("attack costs must be >= 0");
  }
  if (placement_budget < 0) throw ArgumentError("placement budget must be >= 0");
  if (attack_budget < 0) throw ArgumentError("attack budget must be >= 0");
}

CostModel CostModel::uniform(int node_count, std::int64_t placement_budget,
                             std::int64_t attack_budget) {
  return CostModel{std::vector<std::int64_t>(node_count, 1), placement_budget,
                   std::vector<std::int64_t>(node_count, 1), attack_budget};
}

}  // namespace sensorplace
