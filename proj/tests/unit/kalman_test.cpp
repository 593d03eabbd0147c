#include "sensorplace/kalman.hpp"

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "sensorplace/errors.hpp"
#include "sensorplace/graph.hpp"
#include "sensorplace/instance.hpp"
#include "sensorplace/linalg.hpp"
#include "test_oracles.hpp"

namespace sensorplace {
namespace {

using testing::example1_sigma_mu4;
using testing::example1_system;

DistanceMap distances_of(const NetworkSystem& sys) {
  return bfs_distances(graph_from_matrix(sys.dynamics), sys.input_node);
}

Matrix diag2(double a, double b) {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

TEST(TraceValueTest, InfinityOrdersAboveFinite) {
  const TraceValue inf = TraceValue::infinity();
  EXPECT_LT(TraceValue(1e300), inf);
  EXPECT_GT(inf, TraceValue(0.0));
  EXPECT_EQ(inf, TraceValue::infinity());
  EXPECT_FALSE(inf.is_finite());
  EXPECT_EQ(inf.to_string(), "inf");
  EXPECT_TRUE(std::isinf(inf.value()));
  EXPECT_TRUE(approx_equal(inf, inf, 0.0));
  EXPECT_FALSE(approx_equal(inf, TraceValue(1.0), 1e9));
  EXPECT_TRUE(approx_equal(TraceValue(1.0), TraceValue(1.0 + 1e-12), 1e-9));
}

TEST(CovariancePairTest, InfiniteStateRejectsMatrixAccess) {
  const CovariancePair inf = CovariancePair::infinite();
  EXPECT_TRUE(inf.is_infinite());
  EXPECT_THROW(inf.priori(), ArgumentError);
  EXPECT_THROW(inf.posteriori(), ArgumentError);
  EXPECT_FALSE(inf.trace_priori().is_finite());
  EXPECT_FALSE(inf.trace_posteriori().is_finite());
}

TEST(DareSolveTest, Example1SensorOnInput) {
  const CovariancePair cov = dare_solve(example1_system(), Indicator::parse("0100"));
  Matrix bbt = Matrix::Zero(4, 4);
  bbt(1, 1) = 1.0;
  EXPECT_LT(max_abs_diff(cov.priori(), bbt), 1e-12);
  EXPECT_LT(cov.posteriori().cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_NEAR(cov.trace_priori().value(), 1.0, 1e-12);
}

TEST(DareSolveTest, Example1SensorOnX4) {
  const CovariancePair cov = dare_solve(example1_system(), Indicator::parse("0001"));
  EXPECT_LT(max_abs_diff(cov.priori(), example1_sigma_mu4()), 1e-9);
  EXPECT_NEAR(cov.trace_priori().value(), 9.4438, 1e-9);
  EXPECT_NEAR(cov.trace_posteriori().value(), 5.77, 1e-9);
}

TEST(DareSolveTest, StableWithoutSensorsIsGeometricSeries) {
  NetworkSystem sys;
  sys.dynamics = 0.5 * Matrix::Identity(2, 2);
  sys.input_node = 0;
  sys.input_variance = 1.0;
  const CovariancePair cov = dare_solve(sys, Indicator(2));
  ASSERT_FALSE(cov.is_infinite());
  EXPECT_NEAR(cov.priori()(0, 0), 4.0 / 3.0, 1e-9);
  EXPECT_EQ(cov.priori()(0, 1), 0.0);
  EXPECT_EQ(cov.priori()(1, 1), 0.0);
  EXPECT_LT(max_abs_diff(cov.priori(), cov.posteriori()), 1e-15);
}

TEST(DareSolveTest, UnstableWithoutSensorsIsInfinite) {
  EXPECT_TRUE(dare_solve(example1_system(), Indicator(4)).is_infinite());
}

TEST(DareSolveTest, UnobservedUnstableModeIsInfinite) {
  NetworkSystem sys;
  sys.dynamics = diag2(2.0, 0.5);
  sys.input_node = 0;
  EXPECT_TRUE(dare_solve(sys, Indicator::parse("01")).is_infinite());
  EXPECT_FALSE(dare_solve(sys, Indicator::parse("10")).is_infinite());
}

TEST(DareSolveTest, MatchesTextbookRecursionWithNoise) {
  NetworkSystem sys = example1_system();
  sys.sensor_noise = 0.05 * Matrix::Identity(4, 4);
  for (const char* bits : {"0001", "1000", "1001", "1111"}) {
    const Indicator mu = Indicator::parse(bits);
    const CovariancePair cov = dare_solve(sys, mu);
    const Matrix expected = testing::kalman_recursion(
        sys.dynamics, sys.measurement_matrix(mu), sys.noise_for(mu),
        sys.input_column(), sys.input_variance, 5000);
    EXPECT_LT(max_abs_diff(cov.priori(), expected), 1e-8) << bits;
  }
}

TEST(DareSolveTest, MatchesTextbookRecursionWithSingularNoise) {
  // V(mu) is PSD but singular: exercises the pseudo-inverse branch.
  NetworkSystem sys = example1_system();
  Matrix v = Matrix::Zero(4, 4);
  v(3, 3) = 0.2;
  sys.sensor_noise = v;
  const Indicator mu = Indicator::parse("1001");
  const CovariancePair cov = dare_solve(sys, mu);
  const Matrix expected = testing::kalman_recursion(
      sys.dynamics, sys.measurement_matrix(mu), sys.noise_for(mu),
      sys.input_column(), sys.input_variance, 5000);
  EXPECT_LT(max_abs_diff(cov.priori(), expected), 1e-8);
}

TEST(DareSolveTest, IterationCapRaisesDivergence) {
  DareOptions opts;
  opts.max_iter = 1;
  try {
    dare_solve(example1_system(), Indicator::parse("0001"), opts);
    FAIL() << "expected DivergenceError";
  } catch (const DivergenceError& e) {
    EXPECT_EQ(e.iterations(), 1);
    EXPECT_EQ(e.last_iterate().rows(), 4);
  }
}

TEST(DareSolveTest, RejectsBadArguments) {
  DareOptions opts;
  opts.conv_tol = 0.0;
  EXPECT_THROW(dare_solve(example1_system(), Indicator::parse("0001"), opts),
               ArgumentError);
  EXPECT_THROW(dare_solve(example1_system(), Indicator::parse("01")), ShapeError);
}

TEST(ClosedFormTest, Example1Placements) {
  const NetworkSystem sys = example1_system();
  const DistanceMap d = distances_of(sys);

  const CovariancePair mu4 = closed_form_covariance(sys, Indicator::parse("0001"), d);
  EXPECT_LT(max_abs_diff(mu4.priori(), example1_sigma_mu4()), 1e-9);
  EXPECT_NEAR(mu4.trace_posteriori().value(), 5.77, 1e-9);

  const CovariancePair mu2 = closed_form_covariance(sys, Indicator::parse("0100"), d);
  Matrix bbt = Matrix::Zero(4, 4);
  bbt(1, 1) = 1.0;
  EXPECT_EQ(mu2.priori(), bbt);
  EXPECT_EQ(mu2.posteriori(), Matrix::Zero(4, 4));
}

TEST(ClosedFormTest, SensorOnInputHasExactlyZeroPosteriori) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const NetworkSystem sys = generate_row_stochastic_instance(7, 3, seed).system;
    Indicator mu(7);
    mu.set(sys.input_node);
    mu.set((sys.input_node + 3) % 7);
    const CovariancePair cov = closed_form_covariance(sys, mu, distances_of(sys));
    EXPECT_EQ(cov.posteriori(), Matrix::Zero(7, 7));
  }
}

TEST(ClosedFormTest, Errors) {
  NetworkSystem sys = example1_system();
  const DistanceMap d = distances_of(sys);
  EXPECT_THROW(closed_form_covariance(sys, Indicator(4), d), ArgumentError);
  EXPECT_THROW(closed_form_covariance(sys, Indicator::parse("0001"),
                                      bfs_distances(graph_from_matrix(sys.dynamics), 0)),
               ArgumentError);
  sys.sensor_noise = Matrix::Identity(4, 4);
  EXPECT_THROW(closed_form_covariance(sys, Indicator::parse("0001"), d), ArgumentError);

  // Node 2 cannot be reached from the input node 0.
  NetworkSystem cut;
  cut.dynamics = Matrix::Zero(3, 3);
  cut.dynamics(1, 0) = 1.0;
  cut.dynamics(0, 1) = 1.0;
  cut.dynamics(2, 2) = 0.5;
  cut.input_node = 0;
  EXPECT_THROW(closed_form_covariance(cut, Indicator::parse("001"), distances_of(cut)),
               ArgumentError);
}

TEST(PlacementZetaTest, MinimumDistanceOrUnbounded) {
  const DistanceMap d = distances_of(example1_system());
  EXPECT_EQ(placement_zeta(Indicator::parse("1001"), d), 1);
  EXPECT_EQ(placement_zeta(Indicator::parse("0001"), d), 2);
  EXPECT_FALSE(placement_zeta(Indicator(4), d).has_value());
}

TEST(InputResponseSumTest, NegativePowerIsZero) {
  EXPECT_EQ(input_response_sum(example1_system(), -1), Matrix::Zero(4, 4));
  // One step: 1 + 2.1^2 + 0.6^2 = 5.77.
  EXPECT_NEAR(input_response_sum(example1_system(), 1).trace(), 5.77, 1e-12);
}

TEST(DetectabilityTest, Examples) {
  const Matrix a = example1_system().dynamics;
  for (int j = 0; j < 4; ++j) {
    Indicator mu(4);
    mu.set(j);
    EXPECT_TRUE(check_detectable(a, mu)) << "sensor " << j;
  }
  EXPECT_FALSE(check_detectable(a, Indicator(4)));
  EXPECT_TRUE(check_detectable(0.9 * Matrix::Identity(3, 3), Indicator(3)));
  EXPECT_FALSE(check_detectable(diag2(2.0, 0.5), Indicator::parse("01")));
  EXPECT_TRUE(check_detectable(diag2(2.0, 0.5), Indicator::parse("10")));
}

TEST(DetectabilityTest, ComplexUnstablePair) {
  // Rotation scaled by 1.2: complex eigenvalues outside the unit circle.
  Matrix a(3, 3);
  a << 1.2 * std::cos(0.7), -1.2 * std::sin(0.7), 0.0,
       1.2 * std::sin(0.7), 1.2 * std::cos(0.7), 0.0,
       0.0, 0.0, 0.3;
  EXPECT_TRUE(check_detectable(a, Indicator::parse("100")));
  EXPECT_FALSE(check_detectable(a, Indicator::parse("001")));
}

TEST(StabilizabilityTest, Examples) {
  const NetworkSystem sys = example1_system();
  EXPECT_TRUE(check_stabilizable(sys.dynamics, sys.input_node, sys.input_variance));
  EXPECT_TRUE(check_stabilizable(0.5 * Matrix::Identity(3, 3), 0, 0.0));
  EXPECT_FALSE(check_stabilizable(diag2(2.0, 2.0), 0, 1.0));
  EXPECT_FALSE(check_stabilizable(sys.dynamics, sys.input_node, 0.0));
  EXPECT_THROW(check_stabilizable(sys.dynamics, 7, 1.0), IndexError);
}

TEST(SchurStabilityTest, UnitCircleCountsAsUnstable) {
  EXPECT_TRUE(is_schur_stable(0.99 * Matrix::Identity(2, 2)));
  EXPECT_FALSE(is_schur_stable(Matrix::Identity(2, 2)));
}

TEST(PseudoInverseTest, IdentityAndZero) {
  EXPECT_LT(max_abs_diff(pseudo_inverse(Matrix::Identity(4, 4)),
                         Matrix::Identity(4, 4)),
            1e-14);
  const Matrix z = pseudo_inverse(Matrix::Zero(3, 2));
  EXPECT_EQ(z.rows(), 2);
  EXPECT_EQ(z.cols(), 3);
  EXPECT_EQ(z, Matrix::Zero(2, 3));
}

TEST(PseudoInverseTest, PenroseConditionsOnTallMatrix) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 20; ++trial) {
    Matrix m(5, 3);
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = normal(rng);
    const Matrix p = pseudo_inverse(m);
    EXPECT_LT(max_abs_diff(p * m, Matrix::Identity(3, 3)), 1e-10);
    EXPECT_LT(max_abs_diff(m * p * m, m), 1e-10);
    EXPECT_LT(max_abs_diff(p * m * p, p), 1e-10);
    EXPECT_LT(max_abs_diff((m * p).transpose(), m * p), 1e-10);
    EXPECT_LT(max_abs_diff((p * m).transpose(), p * m), 1e-10);
  }
}

TEST(PseudoInverseTest, SmallSingularValuesDropped) {
  const Matrix m = diag2(1.0, 1e-14);
  const Matrix p = pseudo_inverse(m);
  EXPECT_NEAR(p(0, 0), 1.0, 1e-15);
  EXPECT_EQ(p(1, 1), 0.0);
}

}  // namespace
}  // namespace sensorplace
