#pragma once

#include "sensorplace/indicator.hpp"
#include "sensorplace/kalman.hpp"
#include "sensorplace/linalg.hpp"
#include "sensorplace/system.hpp"

namespace sensorplace {

struct NoiseBoundOptions {
  DareOptions dare;
  double lyapunov_tol = 1e-12;
  long lyapunov_max_iter = 1000000;
};

/// Extra covariance incurred by running the noiseless steady-state filter
/// (gains K, L) on measurements with noise covariance V~.
///
/// With Sigma, Sigma* the noiseless steady covariances of the placement:
///   K = A Sigma C^T (C Sigma C^T)^+,  L = Sigma C^T (C Sigma C^T)^+,
///   E = (A - K C) E (A - K C)^T + K V~ K^T,
/// and the optimal noisy covariances obey
///   Sigma~ <= Sigma + E,  Sigma~* <= Sigma* + (I - L C) E.
struct NoiseBoundReport {
  Matrix noiseless_priori;      ///< Sigma
  Matrix noiseless_posteriori;  ///< Sigma*
  Matrix gain_k;                ///< n x p
  Matrix gain_l;                ///< n x p
  Matrix extra;                 ///< E
  Matrix extra_posteriori;      ///< (I - L C) E
  /// (I - L C) E (I - L C)^T + L V~ L^T: the a posteriori excess of the
  /// fixed-gain filter in Joseph form. Unlike (I - L C) E it is symmetric,
  /// and Sigma* plus this term bounds Sigma~* from above.
  Matrix extra_posteriori_joseph;
  double closed_loop_radius = 0.0;
  long lyapunov_iterations = 0;

  double trace_extra() const { return extra.trace(); }
  double trace_extra_posteriori() const { return extra_posteriori.trace(); }
  double bound_priori() const { return noiseless_priori.trace() + trace_extra(); }
  double bound_posteriori() const {
    return noiseless_posteriori.trace() + trace_extra_posteriori();
  }
  double bound_posteriori_joseph() const {
    return noiseless_posteriori.trace() + extra_posteriori_joseph.trace();
  }
};

/// Uses `sys.sensor_noise` as V~ (absent means V~ = 0, hence E = 0).
/// Throws ArgumentError when (A, C(mu)) is not detectable and
/// InstabilityError when A - K C is not Schur stable.
NoiseBoundReport compute_noise_bound(const NetworkSystem& sys,
                                     const Indicator& placement,
                                     const NoiseBoundOptions& opts = {});

/// Solution of X = F X F^T + Q by iterating from X = 0 until the max-abs
/// change drops below `tol * max(1, max|X|)`. Throws DivergenceError past `max_iter`.
Matrix lyapunov_fixed_point(const Eigen::Ref<const Matrix>& f,
                            const Eigen::Ref<const Matrix>& q, double tol,
                            long max_iter, long* iterations = nullptr);

/// sum_{m >= 0} F^m Q (F^T)^m, truncated once a term's max-abs entry drops
/// below `tol`.
Matrix lyapunov_series(const Eigen::Ref<const Matrix>& f,
                       const Eigen::Ref<const Matrix>& q, double tol,
                       long max_terms);

}  // namespace sensorplace
