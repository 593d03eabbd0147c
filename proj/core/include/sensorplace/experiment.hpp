#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "sensorplace/indicator.hpp"
#include "sensorplace/kalman.hpp"

namespace sensorplace {

enum class Problem { kPlacement, kAttack, kResilient };

std::string_view problem_name(Problem p);  // "gkfsp" / "gkfsa" / "rgkfsp"
Problem parse_problem(std::string_view name);

struct ExperimentConfig {
  Problem problem = Problem::kPlacement;
  int realizations = 1;
  std::vector<double> sigma_v2{0.01, 0.1, 0.5};
  /// Realization r uses generator seed `seed + r`.
  std::uint64_t seed = 1;
  int nodes = 10;
  int edges = 15;
  double sigma_w2 = 0.1;
  /// Refuse brute force above this many nodes.
  int brute_force_cap = 10;
  int jobs = 1;
  /// Fixed placement attacked in the attack experiment; all nodes when unset.
  std::optional<Indicator> attack_placement;
  DareOptions dare;
};

/// One (realization, noise level) comparison between the noiseless algorithm
/// evaluated under noise (alg) and the noisy brute-force optimum (opt).
struct ExperimentRow {
  std::uint64_t seed = 0;
  Problem problem = Problem::kPlacement;
  double sigma_v2 = 0.0;
  TraceValue opt;
  TraceValue alg;
  /// Trace of the extra-covariance term E at the relevant sensor set;
  /// Infinite when the noiseless closed loop there is not stable.
  TraceValue bound;

  /// |alg - opt| (the algorithm can only lose), 0 when both are infinite.
  double gap() const;
  /// gap / opt.
  double suboptimality() const;
  bool within_bound(double tol) const;
};

/// Rows ordered by realization, then by noise level, regardless of `jobs`.
std::vector<ExperimentRow> gap_experiment(const ExperimentConfig& cfg);

/// Header `seed,problem,sigma_v2,opt,alg,bound,subopt`; infinite values as
/// `inf`.
void write_csv(std::ostream& out, std::span<const ExperimentRow> rows);

}  // namespace sensorplace
