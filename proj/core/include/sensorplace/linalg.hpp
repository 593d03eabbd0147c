#pragma once

#include <Eigen/Core>

namespace sensorplace {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

inline constexpr double kDefaultSvdTol = 1e-10;
inline constexpr double kDefaultRankTol = 1e-8;

/// Moore-Penrose pseudo-inverse via SVD. Singular values at or below
/// `svd_tol * sigma_max` are treated as zero; the zero matrix maps to the
/// zero matrix of transposed shape.
Matrix pseudo_inverse(const Eigen::Ref<const Matrix>& m,
                      double svd_tol = kDefaultSvdTol);

/// Numerical rank using singular values relative to the largest one.
int numerical_rank(const Eigen::Ref<const Eigen::MatrixXcd>& m,
                   double rank_tol = kDefaultRankTol);

/// Largest eigenvalue modulus of a square matrix.
double spectral_radius(const Eigen::Ref<const Matrix>& a);

/// Smallest eigenvalue of the symmetric part of `m`.
double min_symmetric_eigenvalue(const Eigen::Ref<const Matrix>& m);

inline Matrix symmetrize(const Eigen::Ref<const Matrix>& m) {
  return 0.5 * (m + m.transpose());
}

inline double max_abs_diff(const Eigen::Ref<const Matrix>& a,
                           const Eigen::Ref<const Matrix>& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace sensorplace
