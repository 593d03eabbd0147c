#include "sensorplace/instance.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "sensorplace/errors.hpp"
#include "sensorplace/kalman.hpp"

namespace sensorplace {
namespace {

using json = nlohmann::ordered_json;
using Edge = std::pair<int, int>;  // (from, to)

std::vector<Edge> hamiltonian_cycle(int n, std::mt19937_64& rng) {
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<Edge> edges;
  if (n < 2) return edges;
  for (int k = 0; k < n; ++k) edges.emplace_back(perm[k], perm[(k + 1) % n]);
  return edges;
}

// Adds up to `count` distinct new edges drawn uniformly from the candidates.
void add_random_edges(std::set<Edge>& edges, int n, int count, bool allow_loops,
                      std::mt19937_64& rng) {
  std::vector<Edge> candidates;
  for (int u = 0; u < n; ++u) {
    for (int v = 0; v < n; ++v) {
      if ((u != v || allow_loops) && !edges.count({u, v})) candidates.emplace_back(u, v);
    }
  }
  std::shuffle(candidates.begin(), candidates.end(), rng);
  const auto take = std::min<std::size_t>(candidates.size(), std::max(count, 0));
  edges.insert(candidates.begin(), candidates.begin() + take);
}

std::int64_t uniform_int(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi) {
  return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
}

CostModel sample_costs(int n, std::int64_t max_budget, std::mt19937_64& rng) {
  CostModel c;
  for (int i = 0; i < n; ++i) c.placement_costs.push_back(uniform_int(rng, 1, 10));
  for (int i = 0; i < n; ++i) c.attack_costs.push_back(uniform_int(rng, 1, 10));
  const auto cap = [&](std::int64_t v) {
    return max_budget > 0 ? std::min(v, max_budget) : v;
  };
  const std::int64_t min_h =
      *std::min_element(c.placement_costs.begin(), c.placement_costs.end());
  const std::int64_t sum_h =
      std::accumulate(c.placement_costs.begin(), c.placement_costs.end(), std::int64_t{0});
  const std::int64_t sum_f =
      std::accumulate(c.attack_costs.begin(), c.attack_costs.end(), std::int64_t{0});
  c.placement_budget = uniform_int(rng, min_h, std::max(min_h, cap(sum_h)));
  c.attack_budget = uniform_int(rng, 0, cap(sum_f));
  return c;
}

[[noreturn]] void fail(const std::string& field, const std::string& what) {
  throw ParseError("field '" + field + "': " + what, field);
}

const json& require(const json& doc, const std::string& field) {
  if (!doc.contains(field)) fail(field, "missing required field");
  return doc.at(field);
}

Matrix parse_matrix(const json& node, const std::string& field) {
  if (!node.is_array()) fail(field, "expected an array of rows");
  const auto rows = static_cast<Eigen::Index>(node.size());
  if (rows == 0) fail(field, "matrix is empty");
  Matrix m(rows, rows);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const json& row = node[i];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != rows) {
      fail(field, "row " + std::to_string(i) + " must have " + std::to_string(rows) +
                      " entries (square matrix)");
    }
    for (Eigen::Index j = 0; j < rows; ++j) {
      if (!row[j].is_number()) {
        fail(field, "entry (" + std::to_string(i) + ", " + std::to_string(j) +
                        ") is not a number");
      }
      m(i, j) = row[j].get<double>();
    }
  }
  return m;
}

std::int64_t parse_count(const json& node, const std::string& field) {
  if (!node.is_number_integer()) fail(field, "expected a nonnegative integer");
  const auto v = node.get<std::int64_t>();
  if (v < 0) fail(field, "expected a nonnegative integer");
  return v;
}

std::vector<std::int64_t> parse_costs(const json& node, const std::string& field,
                                      int n) {
  if (!node.is_array()) fail(field, "expected an array of integers");
  if (static_cast<int>(node.size()) != n) {
    fail(field, "expected " + std::to_string(n) + " entries");
  }
  std::vector<std::int64_t> out;
  for (std::size_t i = 0; i < node.size(); ++i) {
    out.push_back(parse_count(node[i], field + "[" + std::to_string(i) + "]"));
  }
  return out;
}

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

bool structurally_equal(const ProblemInstance& a, const ProblemInstance& b) {
  const auto& sa = a.system;
  const auto& sb = b.system;
  if (sa.dynamics.rows() != sb.dynamics.rows() || sa.dynamics != sb.dynamics) return false;
  if (sa.input_node != sb.input_node || sa.input_variance != sb.input_variance) return false;
  if (sa.sensor_noise.has_value() != sb.sensor_noise.has_value()) return false;
  if (sa.sensor_noise && *sa.sensor_noise != *sb.sensor_noise) return false;
  const auto& ca = a.costs;
  const auto& cb = b.costs;
  return ca.placement_costs == cb.placement_costs &&
         ca.placement_budget == cb.placement_budget &&
         ca.attack_costs == cb.attack_costs && ca.attack_budget == cb.attack_budget &&
         a.metadata == b.metadata;
}

InstanceValidation validate_system(const NetworkSystem& sys, double zero_tol,
                                   double rank_tol) {
  InstanceValidation v;
  const DirectedGraph g = graph_from_matrix(sys.dynamics, zero_tol);
  v.strongly_connected = is_strongly_connected(g);
  const DistanceMap dmap = bfs_distances(g, sys.input_node);
  v.distance_assumption =
      check_distance_assumption(sys.dynamics, sys.input_node, dmap, zero_tol).satisfied;
  v.stabilizable = check_stabilizable(sys.dynamics, sys.input_node,
                                      sys.input_variance, rank_tol);
  v.detectable_every_sensor = true;
  for (int j = 0; j < sys.size() && v.detectable_every_sensor; ++j) {
    Indicator single(sys.size());
    single.set(j);
    v.detectable_every_sensor = check_detectable(sys.dynamics, single, rank_tol);
  }
  return v;
}

ProblemInstance generate_row_stochastic_instance(const StochasticConfig& cfg) {
  if (cfg.nodes < 2) throw ArgumentError("row-stochastic generator needs n >= 2");
  const int n = cfg.nodes;
  std::mt19937_64 rng(cfg.seed);

  const auto cycle = hamiltonian_cycle(n, rng);
  std::set<Edge> edges(cycle.begin(), cycle.end());
  if (cfg.self_loops) {
    for (int i = 0; i < n; ++i) edges.emplace(i, i);
  }
  add_random_edges(edges, n, cfg.extra_edges, /*allow_loops=*/false, rng);

  std::uniform_real_distribution<double> weight(0.2, 1.0);
  Matrix a = Matrix::Zero(n, n);
  for (const auto& [from, to] : edges) a(to, from) = weight(rng);
  for (int i = 0; i < n; ++i) a.row(i) /= a.row(i).sum();

  ProblemInstance inst;
  inst.system.dynamics = std::move(a);
  inst.system.input_node = static_cast<int>(uniform_int(rng, 0, n - 1));
  inst.system.input_variance = cfg.input_variance;
  inst.costs = sample_costs(n, cfg.max_budget, rng);
  inst.metadata = {"stochastic-n" + std::to_string(n), cfg.seed, "row_stochastic", 0};
  if (!is_strongly_connected(graph_from_matrix(inst.system.dynamics))) {
    throw GenerationError("row-stochastic sample is not irreducible");
  }
  return inst;
}

ProblemInstance generate_row_stochastic_instance(int nodes, int extra_edges,
                                                 std::uint64_t seed) {
  StochasticConfig cfg;
  cfg.nodes = nodes;
  cfg.extra_edges = extra_edges;
  cfg.seed = seed;
  return generate_row_stochastic_instance(cfg);
}

ProblemInstance generate_normal_instance(const NormalConfig& cfg) {
  const int n = cfg.nodes;
  if (n < 2) throw ArgumentError("normal generator needs n >= 2");
  if (cfg.edges < n || cfg.edges > n * n) {
    throw ArgumentError("edge count must lie in [n, n^2] for a strongly connected graph");
  }
  if (cfg.noise_variance < 0.0) throw ArgumentError("noise variance must be >= 0");
  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> normal(0.0, 1.0);

  for (int rejections = 0; rejections < cfg.max_rejections; ++rejections) {
    const auto cycle = hamiltonian_cycle(n, rng);
    std::set<Edge> edges(cycle.begin(), cycle.end());
    add_random_edges(edges, n, cfg.edges - n, /*allow_loops=*/true, rng);

    Matrix a = Matrix::Zero(n, n);
    for (const auto& [from, to] : edges) a(to, from) = normal(rng);

    NetworkSystem sys{std::move(a), 0, cfg.input_variance, std::nullopt};
    if (!validate_system(sys).assumptions_hold()) continue;

    ProblemInstance inst;
    if (cfg.noise_variance > 0.0) {
      sys.sensor_noise = cfg.noise_variance * Matrix::Identity(n, n);
    }
    inst.system = std::move(sys);
    inst.costs = sample_costs(n, cfg.max_budget, rng);
    inst.metadata = {"normal-n" + std::to_string(n), cfg.seed, "normal", rejections};
    return inst;
  }
  throw GenerationError("no sample satisfied the structural assumptions after " +
                        std::to_string(cfg.max_rejections) + " attempts");
}

std::string to_json(const ProblemInstance& inst) {
  const auto& sys = inst.system;
  json doc;
  doc["n"] = sys.size();
  doc["A"] = matrix_to_json(sys.dynamics);
  doc["input_node"] = sys.input_node;
  doc["sigma_w2"] = sys.input_variance;
  if (!sys.sensor_noise) {
    doc["V"] = nullptr;
  } else {
    const Matrix& v = *sys.sensor_noise;
    const double s = v(0, 0);
    if (v == s * Matrix::Identity(v.rows(), v.cols())) {
      doc["V"] = json{{"iso", s}};
    } else {
      doc["V"] = matrix_to_json(v);
    }
  }
  doc["h"] = inst.costs.placement_costs;
  doc["H"] = inst.costs.placement_budget;
  doc["f"] = inst.costs.attack_costs;
  doc["F"] = inst.costs.attack_budget;
  json meta;
  meta["name"] = inst.metadata.name;
  meta["seed"] = inst.metadata.seed ? json(*inst.metadata.seed) : json(nullptr);
  meta["generator"] = inst.metadata.generator;
  meta["rejections"] = inst.metadata.rejections;
  doc["metadata"] = std::move(meta);
  return doc.dump(2) + "\n";
}

ProblemInstance instance_from_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed instance document: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("instance document must be a JSON object");

  ProblemInstance inst;
  const auto n = parse_count(require(doc, "n"), "n");
  if (n < 1) fail("n", "must be >= 1");
  inst.system.dynamics = parse_matrix(require(doc, "A"), "A");
  if (inst.system.dynamics.rows() != n) fail("A", "expected " + std::to_string(n) + " rows");

  const json& input = require(doc, "input_node");
  if (input.is_array()) {
    fail("input_node", "multi-input systems are not supported; give a single node index");
  }
  const auto i0 = parse_count(input, "input_node");
  if (i0 >= n) fail("input_node", "index " + std::to_string(i0) + " outside [0, n)");
  inst.system.input_node = static_cast<int>(i0);

  const json& sw = require(doc, "sigma_w2");
  if (!sw.is_number() || sw.get<double>() < 0.0) fail("sigma_w2", "expected a number >= 0");
  inst.system.input_variance = sw.get<double>();

  if (doc.contains("V") && !doc.at("V").is_null()) {
    const json& v = doc.at("V");
    if (v.is_object()) {
      if (!v.contains("iso") || !v.at("iso").is_number()) fail("V", "expected {\"iso\": s}");
      const double s = v.at("iso").get<double>();
      if (s < 0.0) fail("V", "iso variance must be >= 0");
      inst.system.sensor_noise = s * Matrix::Identity(n, n);
    } else {
      inst.system.sensor_noise = parse_matrix(v, "V");
      if (inst.system.sensor_noise->rows() != n) fail("V", "must be n x n");
    }
  }

  const int nodes = static_cast<int>(n);
  inst.costs.placement_costs = parse_costs(require(doc, "h"), "h", nodes);
  inst.costs.placement_budget = parse_count(require(doc, "H"), "H");
  inst.costs.attack_costs = parse_costs(require(doc, "f"), "f", nodes);
  inst.costs.attack_budget = parse_count(require(doc, "F"), "F");

  if (doc.contains("metadata") && doc.at("metadata").is_object()) {
    const json& meta = doc.at("metadata");
    if (meta.contains("name") && meta.at("name").is_string()) {
      inst.metadata.name = meta.at("name").get<std::string>();
    }
    if (meta.contains("seed") && meta.at("seed").is_number_integer()) {
      inst.metadata.seed = meta.at("seed").get<std::uint64_t>();
    }
    if (meta.contains("generator") && meta.at("generator").is_string()) {
      inst.metadata.generator = meta.at("generator").get<std::string>();
    }
    if (meta.contains("rejections") && meta.at("rejections").is_number_integer()) {
      inst.metadata.rejections = meta.at("rejections").get<int>();
    }
  }

  try {
    inst.system.validate();
  } catch (const Error& e) {
    throw ParseError(std::string("invalid system: ") + e.what());
  }
  return inst;
}

void save_instance(const ProblemInstance& inst, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot open '" + path.string() + "' for writing");
  out << to_json(inst);
  if (!out) throw ParseError("failed writing '" + path.string() + "'");
}

ProblemInstance load_instance(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open instance file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return instance_from_json(buf.str());
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what(), e.field());
  }
}

}  // namespace sensorplace
