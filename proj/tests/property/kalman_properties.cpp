#include <gtest/gtest.h>

#include "property_support.hpp"
#include "sensorplace/graph.hpp"
#include "sensorplace/instance.hpp"
#include "sensorplace/kalman.hpp"
#include "sensorplace/linalg.hpp"

namespace sensorplace {
namespace {

using testing::Rng;

struct Sample {
  NetworkSystem sys;
  DistanceMap dmap;
};

Sample row_stochastic(std::uint64_t seed) {
  const int n = 4 + static_cast<int>(seed % 9);  // 4..12
  ProblemInstance inst =
      generate_row_stochastic_instance(n, static_cast<int>(seed % 5) * 2, seed);
  Sample s{inst.system, {}};
  s.dmap = bfs_distances(graph_from_matrix(s.sys.dynamics), s.sys.input_node);
  return s;
}

TEST(KalmanProperty, IterationMatchesClosedFormForEverySingleSensor) {
  double worst = 0.0;
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    const Sample s = row_stochastic(seed);
    const int n = s.sys.size();
    for (int j = 0; j < n; ++j) {
      const Indicator mu = Indicator::from_support(n, std::vector<int>{j});
      const CovariancePair it = dare_solve(s.sys, mu);
      const CovariancePair cf = closed_form_covariance(s.sys, mu, s.dmap);
      ASSERT_FALSE(it.is_infinite());
      worst = std::max({worst, max_abs_diff(it.priori(), cf.priori()),
                        max_abs_diff(it.posteriori(), cf.posteriori())});
    }
  }
  EXPECT_LT(worst, 1e-6);
}

TEST(KalmanProperty, PlacementsWithEqualZetaShareTheCovariance) {
  Rng rng(201);
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    const Sample s = row_stochastic(seed);
    const int n = s.sys.size();
    const Indicator a = testing::random_indicator(rng, n, 0.4);
    if (a.none()) continue;
    const int zeta = *placement_zeta(a, s.dmap);
    // A different placement with the same zeta: one node at that distance
    // plus arbitrary nodes that are farther away.
    Indicator b(n);
    for (int j = n - 1; j >= 0; --j) {
      if (*s.dmap.dist[j] == zeta) {
        b.set(j);
        break;
      }
    }
    for (int j = 0; j < n; ++j) {
      if (*s.dmap.dist[j] > zeta && rng() % 2) b.set(j);
    }
    ASSERT_EQ(placement_zeta(b, s.dmap), zeta);
    const CovariancePair ca = closed_form_covariance(s.sys, a, s.dmap);
    const CovariancePair cb = closed_form_covariance(s.sys, b, s.dmap);
    EXPECT_EQ(max_abs_diff(ca.priori(), cb.priori()), 0.0);
    EXPECT_EQ(max_abs_diff(ca.posteriori(), cb.posteriori()), 0.0);
    const CovariancePair da = dare_solve(s.sys, a);
    const CovariancePair db = dare_solve(s.sys, b);
    EXPECT_LT(max_abs_diff(da.priori(), db.priori()), 1e-6);
    EXPECT_LT(max_abs_diff(da.posteriori(), db.posteriori()), 1e-6);
  }
}

// Shared driver for the checks that apply to every finite Riccati output,
// with and without measurement noise.
template <typename Check>
void for_random_outputs(std::uint64_t rng_seed, Check check) {
  Rng rng(rng_seed);
  for (std::uint64_t seed = 1; seed <= 80; ++seed) {
    Sample s = row_stochastic(seed);
    const int n = s.sys.size();
    if (seed % 2 == 0) {
      s.sys.sensor_noise = (0.01 + 0.2 * (seed % 5)) * Matrix::Identity(n, n);
    }
    for (int k = 0; k < 3; ++k) {
      const Indicator mu = testing::random_indicator(rng, n, 0.3);
      const CovariancePair c = dare_solve(s.sys, mu);
      if (c.is_infinite()) continue;
      check(s.sys, mu, c);
    }
  }
}

TEST(KalmanProperty, PrioriIsPredictionOfPosteriori) {
  for_random_outputs(202, [](const NetworkSystem& sys, const Indicator&,
                             const CovariancePair& c) {
    const Matrix& a = sys.dynamics;
    const Vector b = sys.input_column();
    const Matrix predicted =
        a * c.posteriori() * a.transpose() + sys.input_variance * b * b.transpose();
    EXPECT_LT(max_abs_diff(c.priori(), predicted), 1e-8 * testing::scale_of(c.priori()));
  });
}

TEST(KalmanProperty, CovariancesAreSymmetricPsdAndUpdateShrinksThem) {
  for_random_outputs(203, [](const NetworkSystem&, const Indicator&,
                             const CovariancePair& c) {
    const double tol = 1e-8 * testing::scale_of(c.priori());
    EXPECT_EQ(max_abs_diff(c.priori(), c.priori().transpose()), 0.0);
    EXPECT_EQ(max_abs_diff(c.posteriori(), c.posteriori().transpose()), 0.0);
    EXPECT_GE(testing::min_eig(c.priori()), -tol);
    EXPECT_GE(testing::min_eig(c.posteriori()), -tol);
    EXPECT_GE(testing::min_eig(c.priori() - c.posteriori()), -tol);
  });
}

TEST(KalmanProperty, AddingASensorNeverIncreasesTheTrace) {
  Rng rng(204);
  int compared = 0;
  for (std::uint64_t seed = 1; seed <= 80; ++seed) {
    Sample s = row_stochastic(seed);
    const int n = s.sys.size();
    if (seed % 2 == 1) s.sys.sensor_noise = 0.1 * Matrix::Identity(n, n);
    Indicator mu = testing::random_indicator(rng, n, 0.2);
    TraceValue prev = dare_solve(s.sys, mu).trace_priori();
    for (int j : testing::random_permutation(rng, n)) {
      if (mu.test(j)) continue;
      mu.set(j);
      const TraceValue next = dare_solve(s.sys, mu).trace_priori();
      if (prev.is_finite()) {
        ASSERT_TRUE(next.is_finite());
        EXPECT_LE(next.value(), prev.value() + 1e-9 * std::max(1.0, prev.value()));
        ++compared;
      }
      prev = next;
    }
  }
  EXPECT_GT(compared, 200);
}

TEST(KalmanProperty, RankOneProjectionIdentity) {
  Rng rng(205);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 500; ++trial) {
    const int n = testing::uniform_int(rng, 1, 12);
    Vector psi(n);
    for (int i = 0; i < n; ++i) psi(i) = normal(rng) * std::pow(10.0, trial % 7 - 3);
    if (psi.norm() == 0.0) continue;
    const Matrix outer = psi * psi.transpose();
    const double value = (psi.transpose() * pseudo_inverse(outer) * psi)(0, 0);
    EXPECT_NEAR(value, 1.0, 1e-9);
  }
}

}  // namespace
}  // namespace sensorplace
