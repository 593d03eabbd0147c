#include "sensorplace/noise_bound.hpp"

#include <algorithm>
#include <string>

#include "sensorplace/errors.hpp"

namespace sensorplace {

Matrix lyapunov_fixed_point(const Eigen::Ref<const Matrix>& f,
                            const Eigen::Ref<const Matrix>& q, double tol,
                            long max_iter, long* iterations) {
  Matrix x = Matrix::Zero(q.rows(), q.cols());
  for (long it = 1; it <= max_iter; ++it) {
    Matrix next = symmetrize(f * x * f.transpose() + q);
    const double change = max_abs_diff(next, x);
    x = std::move(next);
    if (!x.allFinite()) {
      throw DivergenceError("Lyapunov iteration produced non-finite values", x, it);
    }
    if (change < tol * std::max(1.0, x.cwiseAbs().maxCoeff())) {
      if (iterations) *iterations = it;
      return x;
    }
  }
  throw DivergenceError("Lyapunov iteration did not converge", x, max_iter);
}

Matrix lyapunov_series(const Eigen::Ref<const Matrix>& f,
                       const Eigen::Ref<const Matrix>& q, double tol,
                       long max_terms) {
  Matrix term = q;
  Matrix total = q;
  for (long m = 1; m < max_terms; ++m) {
    term = f * term * f.transpose();
    total += term;
    if (term.cwiseAbs().maxCoeff() < tol) return symmetrize(total);
  }
  throw DivergenceError("Lyapunov series did not settle", total, max_terms);
}

NoiseBoundReport compute_noise_bound(const NetworkSystem& sys,
                                     const Indicator& placement,
                                     const NoiseBoundOptions& opts) {
  const CovariancePair noiseless =
      dare_solve(sys.without_noise(), placement, opts.dare);
  if (noiseless.is_infinite()) {
    throw ArgumentError("(A, C(mu)) is not detectable; no finite noiseless covariance");
  }
  const Matrix& a = sys.dynamics;
  const Matrix c = sys.measurement_matrix(placement);
  const Matrix v = sys.noise_for(placement);
  const Matrix& sigma = noiseless.priori();
  const int n = sys.size();

  NoiseBoundReport r;
  r.noiseless_priori = sigma;
  r.noiseless_posteriori = noiseless.posteriori();
  const Matrix sct = sigma * c.transpose();
  const Matrix innovation_pinv = pseudo_inverse(symmetrize(c * sct), opts.dare.svd_tol);
  r.gain_l = sct * innovation_pinv;
  r.gain_k = a * r.gain_l;

  const Matrix closed_loop = a - r.gain_k * c;
  r.closed_loop_radius = spectral_radius(closed_loop);
  if (!(r.closed_loop_radius < 1.0 - kUnitCircleTol)) {
    throw InstabilityError("A - K C is not stable (spectral radius " +
                               std::to_string(r.closed_loop_radius) + ")",
                           r.closed_loop_radius);
  }
  const Matrix injected = symmetrize(r.gain_k * v * r.gain_k.transpose());
  r.extra = lyapunov_fixed_point(closed_loop, injected, opts.lyapunov_tol,
                                 opts.lyapunov_max_iter, &r.lyapunov_iterations);
  const Matrix update = Matrix::Identity(n, n) - r.gain_l * c;
  r.extra_posteriori = update * r.extra;
  r.extra_posteriori_joseph = symmetrize(update * r.extra * update.transpose() +
                                         r.gain_l * v * r.gain_l.transpose());
  return r;
}

}  // namespace sensorplace
