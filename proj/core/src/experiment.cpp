#include "sensorplace/experiment.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <ostream>
#include <string>
#include <thread>

#include "sensorplace/errors.hpp"
#include "sensorplace/graph.hpp"
#include "sensorplace/instance.hpp"
#include "sensorplace/noise_bound.hpp"
#include "sensorplace/oracle.hpp"
#include "sensorplace/resilient.hpp"
#include "sensorplace/solvers.hpp"

namespace sensorplace {

std::string_view problem_name(Problem p) {
  switch (p) {
    case Problem::kPlacement: return "gkfsp";
    case Problem::kAttack: return "gkfsa";
    case Problem::kResilient: return "rgkfsp";
  }
  return "?";
}

Problem parse_problem(std::string_view name) {
  if (name == "gkfsp" || name == "place") return Problem::kPlacement;
  if (name == "gkfsa" || name == "attack") return Problem::kAttack;
  if (name == "rgkfsp" || name == "resilient") return Problem::kResilient;
  throw ArgumentError("unknown problem '" + std::string(name) +
                      "' (expected gkfsp, gkfsa or rgkfsp)");
}

double ExperimentRow::gap() const {
  if (!opt.is_finite() && !alg.is_finite()) return 0.0;
  return std::abs(alg.value() - opt.value());
}

double ExperimentRow::suboptimality() const {
  if (!opt.is_finite() && !alg.is_finite()) return 0.0;
  return gap() / opt.value();
}

bool ExperimentRow::within_bound(double tol) const {
  if (!bound.is_finite()) return true;
  return gap() <= bound.value() + tol;
}

namespace {

TraceValue extra_trace(const NetworkSystem& noisy, const Indicator& sensors,
                       const DareOptions& dare) {
  if (noisy.noiseless()) return TraceValue(0.0);
  NoiseBoundOptions opts;
  opts.dare = dare;
  try {
    return TraceValue(compute_noise_bound(noisy, sensors, opts).trace_extra());
  } catch (const InstabilityError&) {
    return TraceValue::infinity();
  } catch (const ArgumentError&) {
    // Empty sensor set on an unstable A: no finite noiseless covariance.
    return TraceValue::infinity();
  }
}

std::vector<ExperimentRow> run_realization(const ExperimentConfig& cfg, int r) {
  NormalConfig gen;
  gen.nodes = cfg.nodes;
  gen.edges = cfg.edges;
  gen.input_variance = cfg.sigma_w2;
  gen.seed = cfg.seed + static_cast<std::uint64_t>(r);
  const ProblemInstance inst = generate_normal_instance(gen);
  const NetworkSystem& zero = inst.system;
  const CostModel& costs = inst.costs;
  const DistanceMap dmap = bfs_distances(graph_from_matrix(zero.dynamics), zero.input_node);

  OracleOptions oracle;
  oracle.max_nodes = cfg.brute_force_cap;
  oracle.max_nodes_minmax = cfg.brute_force_cap;
  oracle.dare = cfg.dare;
  oracle.cross_check = false;

  std::vector<ExperimentRow> rows;
  for (double s : cfg.sigma_v2) {
    NetworkSystem noisy = zero;
    if (s > 0.0) noisy.sensor_noise = s * Matrix::Identity(zero.size(), zero.size());

    ExperimentRow row;
    row.seed = gen.seed;
    row.problem = cfg.problem;
    row.sigma_v2 = s;
    switch (cfg.problem) {
      case Problem::kPlacement: {
        const Indicator mu = solve_gkfsp(zero, costs, dmap).chosen;
        row.alg = dare_solve(noisy, mu, cfg.dare).trace_priori();
        row.opt = brute_gkfsp(noisy, costs, oracle).objective;
        row.bound = extra_trace(noisy, mu, cfg.dare);
        break;
      }
      case Problem::kAttack: {
        Indicator mu = cfg.attack_placement.value_or(Indicator(zero.size()));
        if (!cfg.attack_placement) {
          for (int j = 0; j < zero.size(); ++j) mu.set(j);
        }
        const Indicator nu = solve_gkfsa(zero, costs, mu, dmap).chosen;
        row.alg = dare_solve(noisy, mu.minus(nu), cfg.dare).trace_priori();
        const OracleResult best = brute_gkfsa(noisy, costs, mu, oracle);
        row.opt = best.objective;
        // opt - alg <= trace E at the survivors of the noisy-optimal attack.
        row.bound = extra_trace(noisy, mu.minus(best.optimal.front()), cfg.dare);
        break;
      }
      case Problem::kResilient: {
        const Indicator mu = solve_rgkfsp(zero, costs, dmap).chosen;
        OracleResult worst;
        if (mu.none()) {
          worst.objective = dare_solve(noisy, mu, cfg.dare).trace_priori();
          worst.optimal.push_back(mu);
        } else {
          worst = brute_gkfsa(noisy, costs, mu, oracle);
        }
        row.alg = worst.objective;
        row.opt = brute_rgkfsp(noisy, costs, oracle).objective;
        // alg - opt <= trace E at the survivors of the noisy worst attack on mu.
        row.bound = extra_trace(noisy, mu.minus(worst.optimal.front()), cfg.dare);
        break;
      }
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

std::vector<ExperimentRow> gap_experiment(const ExperimentConfig& cfg) {
  if (cfg.realizations < 0) throw ArgumentError("realizations must be >= 0");
  if (cfg.nodes > cfg.brute_force_cap) {
    throw SizeError("experiment with " + std::to_string(cfg.nodes) +
                    " nodes exceeds the brute-force cap of " +
                    std::to_string(cfg.brute_force_cap));
  }
  std::vector<std::vector<ExperimentRow>> per_realization(cfg.realizations);
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&] {
    for (int r = next++; r < cfg.realizations; r = next++) {
      try {
        per_realization[r] = run_realization(cfg, r);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const int jobs = std::max(1, std::min(cfg.jobs, cfg.realizations));
  {
    std::vector<std::jthread> pool;
    for (int t = 1; t < jobs; ++t) pool.emplace_back(worker);
    worker();
  }
  if (failure) std::rethrow_exception(failure);

  std::vector<ExperimentRow> rows;
  for (auto& block : per_realization) {
    rows.insert(rows.end(), block.begin(), block.end());
  }
  return rows;
}

void write_csv(std::ostream& out, std::span<const ExperimentRow> rows) {
  const auto old_precision = out.precision(17);
  out << "seed,problem,sigma_v2,opt,alg,bound,subopt\n";
  for (const auto& r : rows) {
    out << r.seed << ',' << problem_name(r.problem) << ',' << r.sigma_v2 << ','
        << r.opt.to_string() << ',' << r.alg.to_string() << ','
        << r.bound.to_string() << ',' << r.suboptimality() << '\n';
  }
  out.precision(old_precision);
}

}  // namespace sensorplace
