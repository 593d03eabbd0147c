#pragma once

#include <compare>
#include <limits>
#include <optional>
#include <string>

#include "sensorplace/graph.hpp"
#include "sensorplace/indicator.hpp"
#include "sensorplace/linalg.hpp"
#include "sensorplace/system.hpp"

namespace sensorplace {

/// Nonnegative trace value extended with +infinity. Ordering is total:
/// every finite value is below infinity.
class TraceValue {
 public:
  constexpr TraceValue() = default;
  constexpr explicit TraceValue(double v) : value_(v) {}
  static constexpr TraceValue infinity() {
    TraceValue t;
    t.infinite_ = true;
    return t;
  }

  constexpr bool is_finite() const { return !infinite_; }
  /// The finite value, or +inf as a double.
  constexpr double value() const {
    return infinite_ ? std::numeric_limits<double>::infinity() : value_;
  }
  std::string to_string() const;

  friend constexpr std::partial_ordering operator<=>(const TraceValue& a,
                                                     const TraceValue& b) {
    if (a.infinite_ || b.infinite_) return a.infinite_ <=> b.infinite_;
    return a.value_ <=> b.value_;
  }
  friend constexpr bool operator==(const TraceValue& a, const TraceValue& b) {
    return (a <=> b) == 0;
  }

 private:
  double value_ = 0.0;
  bool infinite_ = false;
};

/// Equal within `tol`, or both infinite.
bool approx_equal(TraceValue a, TraceValue b, double tol);

/// Steady-state a priori (Sigma) and a posteriori (Sigma*) error covariances,
/// or the Infinite state when no finite limit exists.
class CovariancePair {
 public:
  CovariancePair(Matrix priori, Matrix posteriori);
  static CovariancePair infinite();

  bool is_infinite() const { return !priori_.has_value(); }
  const Matrix& priori() const;
  const Matrix& posteriori() const;
  TraceValue trace_priori() const;
  TraceValue trace_posteriori() const;

 private:
  CovariancePair() = default;
  std::optional<Matrix> priori_;
  std::optional<Matrix> posteriori_;
};

struct DareOptions {
  double conv_tol = 1e-10;
  long max_iter = 100000;
  double svd_tol = kDefaultSvdTol;
  double rank_tol = kDefaultRankTol;
};

/// Eigenvalues with modulus >= 1 - kUnitCircleTol count as not stable.
inline constexpr double kUnitCircleTol = 1e-9;

bool is_schur_stable(const Eigen::Ref<const Matrix>& a);

/// Steady-state covariances by fixed-point iteration of the Riccati
/// recursion from sigma_w^2 B B^T, stopping once the max-abs change is below
/// conv_tol * max(1, max|Sigma|). Returns Infinite when (A, C(mu)) fails the
/// PBH detectability test. Singular innovation covariances use the
/// pseudo-inverse. Throws DivergenceError when max_iter is exhausted.
CovariancePair dare_solve(const NetworkSystem& sys, const Indicator& placement,
                          const DareOptions& opts = {});

/// sigma_w^2 * sum_{m=0}^{last_power} A^m B B^T (A^T)^m; zero when
/// last_power < 0.
Matrix input_response_sum(const NetworkSystem& sys, int last_power);

/// Minimum distance from the input to a placed sensor; nullopt when no
/// placed sensor is reachable (or none is placed).
std::optional<int> placement_zeta(const Indicator& placement,
                                  const DistanceMap& dmap);

/// Noiseless steady state in closed form: Sigma sums input responses up to
/// zeta, Sigma* up to zeta - 1 (zero when zeta = 0).
CovariancePair closed_form_covariance(const NetworkSystem& sys,
                                      const Indicator& placement,
                                      const DistanceMap& dmap);

/// PBH: rank [A - lambda I; C(mu)] = n for every eigenvalue |lambda| >= 1.
bool check_detectable(const Eigen::Ref<const Matrix>& a,
                      const Indicator& placement,
                      double rank_tol = kDefaultRankTol);

/// PBH: rank [A - lambda I, sigma_w e_{i0}] = n for every eigenvalue
/// |lambda| >= 1.
bool check_stabilizable(const Eigen::Ref<const Matrix>& a, int input_node,
                        double input_variance,
                        double rank_tol = kDefaultRankTol);

}  // namespace sensorplace
