#include "sensorplace/graph.hpp"

#include <algorithm>
#include <queue>
#include <string>

#include "sensorplace/errors.hpp"

namespace sensorplace {

DirectedGraph::DirectedGraph(std::vector<std::vector<int>> adjacency)
    : adjacency_(std::move(adjacency)) {
  const int n = node_count();
  for (auto& row : adjacency_) {
    for (int v : row) {
      if (v < 0 || v >= n) {
        throw IndexError("neighbor index " + std::to_string(v) +
                         " outside [0, " + std::to_string(n) + ")");
      }
    }
    std::sort(row.begin(), row.end());
    row.erase(std::unique(row.begin(), row.end()), row.end());
  }
}

std::size_t DirectedGraph::edge_count() const {
  std::size_t total = 0;
  for (const auto& row : adjacency_) total += row.size();
  return total;
}

std::span<const int> DirectedGraph::out_neighbors(int node) const {
  if (node < 0 || node >= node_count()) {
    throw IndexError("node " + std::to_string(node) + " out of range");
  }
  return adjacency_[node];
}

bool DirectedGraph::has_edge(int from, int to) const {
  const auto nbrs = out_neighbors(from);
  return std::binary_search(nbrs.begin(), nbrs.end(), to);
}

DirectedGraph DirectedGraph::reversed() const {
  std::vector<std::vector<int>> rev(adjacency_.size());
  for (int u = 0; u < node_count(); ++u) {
    for (int v : adjacency_[u]) rev[v].push_back(u);
  }
  return DirectedGraph(std::move(rev));
}

bool DistanceMap::all_reachable() const {
  return std::all_of(dist.begin(), dist.end(),
                     [](const auto& d) { return d.has_value(); });
}

int DistanceMap::max_distance() const {
  int best = 0;
  for (const auto& d : dist) {
    if (d) best = std::max(best, *d);
  }
  return best;
}

DirectedGraph graph_from_matrix(const Eigen::Ref<const Matrix>& a,
                                double zero_tol) {
  if (a.rows() != a.cols()) {
    throw ShapeError("dynamics matrix must be square, got " +
                     std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
  }
  const auto n = a.rows();
  std::vector<std::vector<int>> adj(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      if (std::abs(a(i, j)) > zero_tol) adj[j].push_back(static_cast<int>(i));
    }
  }
  return DirectedGraph(std::move(adj));
}

Matrix adjacency_matrix(const DirectedGraph& g) {
  const int n = g.node_count();
  Matrix m = Matrix::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    for (int i : g.out_neighbors(j)) m(i, j) = 1.0;
  }
  return m;
}

DistanceMap bfs_distances(const DirectedGraph& g, int source) {
  const int n = g.node_count();
  if (source < 0 || source >= n) {
    throw IndexError("BFS source " + std::to_string(source) +
                     " outside [0, " + std::to_string(n) + ")");
  }
  DistanceMap out{source, std::vector<std::optional<int>>(n)};
  out.dist[source] = 0;
  std::queue<int> frontier;
  frontier.push(source);
  while (!frontier.empty()) {
    const int u = frontier.front();
    frontier.pop();
    for (int v : g.out_neighbors(u)) {
      if (!out.dist[v]) {
        out.dist[v] = *out.dist[u] + 1;
        frontier.push(v);
      }
    }
  }
  return out;
}

bool is_strongly_connected(const DirectedGraph& g) {
  if (g.node_count() <= 1) return true;
  return bfs_distances(g, 0).all_reachable() &&
         bfs_distances(g.reversed(), 0).all_reachable();
}

DistanceAssumptionReport check_distance_assumption(
    const Eigen::Ref<const Matrix>& a, int source, const DistanceMap& dmap,
    double zero_tol) {
  const auto n = a.rows();
  if (a.cols() != n || dmap.size() != n) {
    throw ShapeError("distance map and matrix dimensions disagree");
  }
  if (source < 0 || source >= n) throw IndexError("source out of range");

  DistanceAssumptionReport report;
  for (int j = 0; j < n; ++j) {
    if (!dmap.reachable(j)) report.unreachable.push_back(j);
  }

  // column = A^m e_source, advanced one power per step.
  Vector column = Vector::Unit(n, source);
  const int lmax = dmap.max_distance();
  for (int m = 0; m <= lmax; ++m) {
    if (m > 0) column = a * column;
    for (int j = 0; j < n; ++j) {
      if (dmap.dist[j] == m && std::abs(column(j)) <= zero_tol) {
        report.vanishing.push_back(j);
      }
    }
  }
  std::sort(report.vanishing.begin(), report.vanishing.end());
  report.satisfied = report.unreachable.empty() && report.vanishing.empty();
  return report;
}

}  // namespace sensorplace
