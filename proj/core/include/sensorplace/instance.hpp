#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "sensorplace/graph.hpp"
#include "sensorplace/linalg.hpp"
#include "sensorplace/system.hpp"

namespace sensorplace {

struct InstanceMetadata {
  std::string name;
  std::optional<std::uint64_t> seed;
  std::string generator;
  int rejections = 0;

  friend bool operator==(const InstanceMetadata&, const InstanceMetadata&) = default;
};

/// The tuple (A, i0, sigma_w^2, V, h, H, f, F) plus provenance.
struct ProblemInstance {
  NetworkSystem system;
  CostModel costs;
  InstanceMetadata metadata;
};

bool structurally_equal(const ProblemInstance& a, const ProblemInstance& b);

/// Outcome of the structural checks the closed-form solvers rely on.
struct InstanceValidation {
  bool strongly_connected = false;
  bool distance_assumption = false;
  bool stabilizable = false;
  /// (A, e_j^T) detectable for every single node j, hence for every
  /// non-empty placement.
  bool detectable_every_sensor = false;

  bool assumptions_hold() const {
    return distance_assumption && stabilizable && detectable_every_sensor;
  }
};

InstanceValidation validate_system(const NetworkSystem& sys,
                                   double zero_tol = kDefaultZeroTol,
                                   double rank_tol = kDefaultRankTol);

inline bool assumptions_hold(const NetworkSystem& sys) {
  return validate_system(sys).assumptions_hold();
}

struct StochasticConfig {
  int nodes = 6;
  int extra_edges = 0;
  bool self_loops = true;
  std::uint64_t seed = 1;
  double input_variance = 1.0;
  /// Upper bound for the sampled budgets H and F; 0 leaves them uncapped.
  std::int64_t max_budget = 0;
};

/// Random row-stochastic irreducible system: a random Hamiltonian cycle plus
/// `extra_edges` random edges (and optional self-loops), positive weights
/// normalized per row, random input node, integer costs in [1, 10],
/// H in [min h, sum h], F in [0, sum f].
ProblemInstance generate_row_stochastic_instance(const StochasticConfig& cfg);
ProblemInstance generate_row_stochastic_instance(int nodes, int extra_edges,
                                                 std::uint64_t seed);

struct NormalConfig {
  int nodes = 10;
  /// Nonzero entries of A, self-loops included.
  int edges = 15;
  double input_variance = 0.1;
  double noise_variance = 0.0;
  std::uint64_t seed = 1;
  int max_rejections = 1000;
  std::int64_t max_budget = 0;
};

/// Random strongly connected system with standard-normal nonzero entries and
/// input at node 0, resampled until the structural assumptions hold. V is
/// noise_variance * I (absent when zero).
ProblemInstance generate_normal_instance(const NormalConfig& cfg);

std::string to_json(const ProblemInstance& inst);
/// Throws ParseError naming the offending field.
ProblemInstance instance_from_json(std::string_view text);

void save_instance(const ProblemInstance& inst, const std::filesystem::path& path);
ProblemInstance load_instance(const std::filesystem::path& path);

}  // namespace sensorplace
