#include "sensorplace/kalman.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "sensorplace/errors.hpp"

namespace sensorplace {

std::string TraceValue::to_string() const {
  if (infinite_) return "inf";
  std::ostringstream os;
  os.precision(17);
  os << value_;
  return os.str();
}

bool approx_equal(TraceValue a, TraceValue b, double tol) {
  if (!a.is_finite() || !b.is_finite()) return a.is_finite() == b.is_finite();
  return std::abs(a.value() - b.value()) <= tol;
}

CovariancePair::CovariancePair(Matrix priori, Matrix posteriori)
    : priori_(std::move(priori)), posteriori_(std::move(posteriori)) {}

CovariancePair CovariancePair::infinite() { return CovariancePair(); }

const Matrix& CovariancePair::priori() const {
  if (!priori_) throw ArgumentError("covariance is infinite");
  return *priori_;
}

const Matrix& CovariancePair::posteriori() const {
  if (!posteriori_) throw ArgumentError("covariance is infinite");
  return *posteriori_;
}

TraceValue CovariancePair::trace_priori() const {
  return priori_ ? TraceValue(priori_->trace()) : TraceValue::infinity();
}

TraceValue CovariancePair::trace_posteriori() const {
  return posteriori_ ? TraceValue(posteriori_->trace()) : TraceValue::infinity();
}

bool is_schur_stable(const Eigen::Ref<const Matrix>& a) {
  return spectral_radius(a) < 1.0 - kUnitCircleTol;
}

namespace {

// Shared PBH loop: for each eigenvalue outside the open unit disk, `block`
// builds the test matrix whose rank must be n.
template <typename BlockFn>
bool pbh_test(const Eigen::Ref<const Matrix>& a, double rank_tol,
              BlockFn&& block) {
  if (a.rows() != a.cols()) throw ShapeError("PBH test needs a square matrix");
  const auto n = a.rows();
  if (n == 0) return true;
  Eigen::EigenSolver<Matrix> es(a, /*computeEigenvectors=*/false);
  const Eigen::VectorXcd lambdas = es.eigenvalues();
  for (Eigen::Index k = 0; k < lambdas.size(); ++k) {
    if (std::abs(lambdas(k)) < 1.0 - kUnitCircleTol) continue;
    const Eigen::MatrixXcd shifted =
        a.cast<std::complex<double>>() -
        lambdas(k) * Eigen::MatrixXcd::Identity(n, n);
    if (numerical_rank(block(shifted), rank_tol) < n) return false;
  }
  return true;
}

// Gain G = Sigma C^T (C Sigma C^T + V)^{-1}, with the pseudo-inverse when the
// innovation covariance is singular.
Matrix update_gain(const Matrix& sigma, const Matrix& c, const Matrix& v,
                   bool noisy, double svd_tol) {
  const Matrix sct = sigma * c.transpose();
  const Matrix s = symmetrize(c * sct + v);
  if (noisy) {
    Eigen::LLT<Matrix> llt(s);
    if (llt.info() == Eigen::Success) {
      return llt.solve(sct.transpose()).transpose();
    }
  }
  return sct * pseudo_inverse(s, svd_tol);
}

}  // namespace

bool check_detectable(const Eigen::Ref<const Matrix>& a,
                      const Indicator& placement, double rank_tol) {
  if (placement.size() != a.rows()) throw ShapeError("placement length != n");
  const auto nodes = placement.support();
  const auto n = a.rows();
  const auto p = static_cast<Eigen::Index>(nodes.size());
  return pbh_test(a, rank_tol, [&](const Eigen::MatrixXcd& shifted) {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n + p, n);
    m.topRows(n) = shifted;
    for (Eigen::Index r = 0; r < p; ++r) m(n + r, nodes[r]) = 1.0;
    return m;
  });
}

bool check_stabilizable(const Eigen::Ref<const Matrix>& a, int input_node,
                        double input_variance, double rank_tol) {
  const auto n = a.rows();
  if (input_node < 0 || input_node >= n) throw IndexError("input node out of range");
  const double sigma = std::sqrt(std::max(input_variance, 0.0));
  return pbh_test(a, rank_tol, [&](const Eigen::MatrixXcd& shifted) {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n + 1);
    m.leftCols(n) = shifted;
    m(input_node, n) = sigma;
    return m;
  });
}

CovariancePair dare_solve(const NetworkSystem& sys, const Indicator& placement,
                          const DareOptions& opts) {
  if (!(opts.conv_tol > 0.0)) throw ArgumentError("conv_tol must be > 0");
  const Matrix& a = sys.dynamics;
  if (a.rows() != a.cols()) throw ShapeError("dynamics matrix must be square");
  if (placement.size() != sys.size()) throw ShapeError("placement length != n");

  if (!check_detectable(a, placement, opts.rank_tol)) {
    return CovariancePair::infinite();
  }

  const Matrix c = sys.measurement_matrix(placement);
  const Matrix v = sys.noise_for(placement);
  const bool measured = c.rows() > 0;
  // V(mu) positive definite makes the innovation covariance invertible.
  const bool noisy =
      measured && !sys.noiseless() &&
      min_symmetric_eigenvalue(v) > 1e-12 * std::max(1.0, v.cwiseAbs().maxCoeff());
  const Vector b = sys.input_column();
  const Matrix process = sys.input_variance * b * b.transpose();

  auto posteriori_of = [&](const Matrix& sigma) -> Matrix {
    if (!measured) return sigma;
    const Matrix gain = update_gain(sigma, c, v, noisy, opts.svd_tol);
    return symmetrize(sigma - gain * c * sigma);
  };

  Matrix sigma = process;
  for (long iter = 1; iter <= opts.max_iter; ++iter) {
    Matrix next = symmetrize(a * posteriori_of(sigma) * a.transpose() + process);
    if (!next.allFinite()) {
      throw DivergenceError("Riccati iteration produced non-finite values",
                            std::move(sigma), iter);
    }
    const double change = max_abs_diff(next, sigma);
    sigma = std::move(next);
    // Relative once entries exceed 1: large covariances cannot resolve an
    // absolute change of conv_tol in double precision.
    if (change < opts.conv_tol * std::max(1.0, sigma.cwiseAbs().maxCoeff())) {
      Matrix post = posteriori_of(sigma);
      return CovariancePair(std::move(sigma), std::move(post));
    }
  }
  throw DivergenceError("Riccati iteration did not converge within " +
                            std::to_string(opts.max_iter) + " iterations",
                        std::move(sigma), opts.max_iter);
}

Matrix input_response_sum(const NetworkSystem& sys, int last_power) {
  const int n = sys.size();
  Matrix total = Matrix::Zero(n, n);
  Vector response = sys.input_column();
  for (int m = 0; m <= last_power; ++m) {
    if (m > 0) response = sys.dynamics * response;
    total += response * response.transpose();
  }
  return sys.input_variance * total;
}

std::optional<int> placement_zeta(const Indicator& placement,
                                  const DistanceMap& dmap) {
  if (placement.size() != dmap.size()) throw ShapeError("placement length != n");
  std::optional<int> best;
  for (int j : placement.support()) {
    const auto& d = dmap.dist[j];
    if (d && (!best || *d < *best)) best = *d;
  }
  return best;
}

CovariancePair closed_form_covariance(const NetworkSystem& sys,
                                      const Indicator& placement,
                                      const DistanceMap& dmap) {
  if (!sys.noiseless()) {
    throw ArgumentError("closed form requires noiseless measurements");
  }
  if (dmap.source != sys.input_node) {
    throw ArgumentError("distance map is not rooted at the input node");
  }
  if (placement.none()) throw ArgumentError("placement has no sensors");
  const auto zeta = placement_zeta(placement, dmap);
  if (!zeta) {
    throw ArgumentError("no placed sensor is reachable from the input node");
  }
  return CovariancePair(input_response_sum(sys, *zeta),
                        input_response_sum(sys, *zeta - 1));
}

}  // namespace sensorplace
