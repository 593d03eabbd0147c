#pragma once

#include <optional>
#include <span>
#include <vector>

#include "sensorplace/linalg.hpp"

namespace sensorplace {

inline constexpr double kDefaultZeroTol = 1e-12;

/// Directed graph of a square dynamics matrix: edge j -> i exists iff
/// |A(i, j)| > zero_tol. Out-neighbor lists are sorted ascending.
class DirectedGraph {
 public:
  DirectedGraph() = default;
  explicit DirectedGraph(std::vector<std::vector<int>> adjacency);

  int node_count() const { return static_cast<int>(adjacency_.size()); }
  std::size_t edge_count() const;
  std::span<const int> out_neighbors(int node) const;
  bool has_edge(int from, int to) const;

  /// Same vertices with every edge reversed.
  DirectedGraph reversed() const;

  friend bool operator==(const DirectedGraph&, const DirectedGraph&) = default;

 private:
  std::vector<std::vector<int>> adjacency_;
};

/// Single-source shortest-path lengths. `std::nullopt` marks an unreachable
/// node; there is no numeric sentinel.
struct DistanceMap {
  int source = 0;
  std::vector<std::optional<int>> dist;

  int size() const { return static_cast<int>(dist.size()); }
  bool reachable(int node) const { return dist.at(node).has_value(); }
  bool all_reachable() const;
  /// Largest finite distance (l_max).
  int max_distance() const;
};

DirectedGraph graph_from_matrix(const Eigen::Ref<const Matrix>& a,
                                double zero_tol = kDefaultZeroTol);

/// 0/1 matrix M with M(i, j) = 1 iff edge j -> i.
Matrix adjacency_matrix(const DirectedGraph& g);

/// BFS from `source`, O(n + |E|).
DistanceMap bfs_distances(const DirectedGraph& g, int source);

bool is_strongly_connected(const DirectedGraph& g);

struct DistanceAssumptionReport {
  bool satisfied = false;
  std::vector<int> unreachable;  ///< nodes with no path from the source
  std::vector<int> vanishing;    ///< nodes j with (A^m)(j, source) ~ 0 at m = dist(j)

  explicit operator bool() const { return satisfied; }
};

/// Every node is reachable from `source`, and (A^m)(j, source) is nonzero
/// whenever dist(j) = m. Only column `source` of the powers is formed.
DistanceAssumptionReport check_distance_assumption(
    const Eigen::Ref<const Matrix>& a, int source, const DistanceMap& dmap,
    double zero_tol = kDefaultZeroTol);

}  // namespace sensorplace
