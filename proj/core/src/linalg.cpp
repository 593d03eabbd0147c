#include "sensorplace/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace sensorplace {

Matrix pseudo_inverse(const Eigen::Ref<const Matrix>& m, double svd_tol) {
  if (m.size() == 0) return Matrix::Zero(m.cols(), m.rows());
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector& s = svd.singularValues();
  const double cutoff = svd_tol * s(0);
  Vector inv = Vector::Zero(s.size());
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > cutoff && s(i) > 0.0) inv(i) = 1.0 / s(i);
  }
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

int numerical_rank(const Eigen::Ref<const Eigen::MatrixXcd>& m,
                   double rank_tol) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  const Vector& s = svd.singularValues();
  if (s(0) == 0.0) return 0;
  int rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > rank_tol * s(0)) ++rank;
  }
  return rank;
}

double spectral_radius(const Eigen::Ref<const Matrix>& a) {
  if (a.size() == 0) return 0.0;
  Eigen::EigenSolver<Matrix> es(a, /*computeEigenvectors=*/false);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

double min_symmetric_eigenvalue(const Eigen::Ref<const Matrix>& m) {
  if (m.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(m),
                                           Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

}  // namespace sensorplace
