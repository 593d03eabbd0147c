#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "sensorplace/errors.hpp"
#include "sensorplace/experiment.hpp"
#include "sensorplace/graph.hpp"
#include "sensorplace/instance.hpp"
#include "sensorplace/kalman.hpp"
#include "sensorplace/noise_bound.hpp"
#include "sensorplace/oracle.hpp"
#include "sensorplace/resilient.hpp"
#include "sensorplace/solvers.hpp"

namespace sensorplace::cli {
namespace {

using json = nlohmann::ordered_json;

struct Settings {
  // Tolerances shared by every command.
  double conv_tol = 1e-10;
  long max_iter = 100000;
  double svd_tol = kDefaultSvdTol;
  double rank_tol = kDefaultRankTol;
  double zero_tol = kDefaultZeroTol;
  double verify_tol = 1e-8;
  int cap = 14;
  int cap_minmax = 10;

  std::string instance;
  std::string placement;
  std::string problem = "all";
  std::string out;

  // experiment
  int realizations = 10;
  std::string sigma_v2 = "0.01,0.1,0.5";
  std::uint64_t seed = 1;
  int nodes = 10;
  int edges = 15;
  double sigma_w2 = 0.1;
  int jobs = 0;

  // gen
  std::string kind = "stochastic";
  int extra_edges = 0;
  double gen_sigma_v2 = 0.0;
  std::int64_t max_budget = 0;
  bool no_self_loops = false;
  std::optional<double> gen_sigma_w2;

  // bound
  std::optional<double> override_sigma_v2;

  // reduce-subset-sum
  std::vector<std::int64_t> sizes;
  std::int64_t target = 0;

  DareOptions dare() const {
    DareOptions d;
    d.conv_tol = conv_tol;
    d.max_iter = max_iter;
    d.svd_tol = svd_tol;
    d.rank_tol = rank_tol;
    return d;
  }

  OracleOptions oracle() const {
    OracleOptions o;
    o.max_nodes = cap;
    o.max_nodes_minmax = cap_minmax;
    o.dare = dare();
    return o;
  }

  json tolerances() const {
    json t;
    t["conv_tol"] = conv_tol;
    t["max_iter"] = max_iter;
    t["svd_tol"] = svd_tol;
    t["rank_tol"] = rank_tol;
    t["zero_tol"] = zero_tol;
    t["verify_tol"] = verify_tol;
    t["brute_force_cap"] = cap;
    t["brute_force_cap_minmax"] = cap_minmax;
    return t;
  }
};

json trace_json(TraceValue t) {
  if (!t.is_finite()) return "inf";
  return t.value();
}

json zeta_json(const std::optional<int>& z) {
  if (!z) return "unbounded";
  return *z;
}

json indicator_json(const Indicator& mu) { return mu.to_string(); }

std::string fmt(TraceValue t) { return t.to_string(); }

// Parses "a,b,c" or "start:stop:count" (inclusive, evenly spaced).
std::vector<double> parse_sigma_list(const std::string& text) {
  std::vector<double> values;
  if (text.find(':') != std::string::npos) {
    std::stringstream ss(text);
    std::string a, b, c;
    if (!std::getline(ss, a, ':') || !std::getline(ss, b, ':') || !std::getline(ss, c)) {
      throw ArgumentError("--sigma-v2 range must be start:stop:count");
    }
    const double start = std::stod(a);
    const double stop = std::stod(b);
    const int count = std::stoi(c);
    if (count < 1) throw ArgumentError("--sigma-v2 range count must be >= 1");
    for (int k = 0; k < count; ++k) {
      values.push_back(count == 1 ? start : start + (stop - start) * k / (count - 1));
    }
  } else {
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (!item.empty()) values.push_back(std::stod(item));
    }
  }
  if (values.empty()) throw ArgumentError("--sigma-v2 is empty");
  for (double v : values) {
    if (!(v >= 0.0)) throw ArgumentError("--sigma-v2 values must be >= 0");
  }
  return values;
}

Indicator parse_placement(const std::string& bits, int n) {
  const Indicator mu = Indicator::parse(bits);
  if (mu.size() != n) {
    throw ArgumentError("placement has " + std::to_string(mu.size()) +
                        " entries, instance has " + std::to_string(n) + " nodes");
  }
  return mu;
}

Indicator all_nodes(int n) {
  Indicator mu(n);
  for (int j = 0; j < n; ++j) mu.set(j);
  return mu;
}

struct Loaded {
  ProblemInstance inst;
  NetworkSystem noiseless;  // the zero-noise solvers never see V
  DistanceMap dmap;
  InstanceValidation validation;
};

Loaded load(const Settings& s) {
  Loaded l;
  l.inst = load_instance(s.instance);
  l.noiseless = l.inst.system.without_noise();
  l.dmap = bfs_distances(graph_from_matrix(l.noiseless.dynamics, s.zero_tol),
                         l.noiseless.input_node);
  l.validation = validate_system(l.noiseless, s.zero_tol, s.rank_tol);
  return l;
}

json header(const std::string& command, const Settings& s, const Loaded* l) {
  json j;
  j["command"] = command;
  if (l) {
    j["instance"] = s.instance;
    j["n"] = l->inst.system.size();
    j["input_node"] = l->inst.system.input_node;
    j["noise_stripped"] = !l->inst.system.noiseless();
    json v;
    v["strongly_connected"] = l->validation.strongly_connected;
    v["distance_assumption"] = l->validation.distance_assumption;
    v["stabilizable"] = l->validation.stabilizable;
    v["detectable_every_sensor"] = l->validation.detectable_every_sensor;
    j["assumptions"] = v;
  }
  return j;
}

void emit(std::ostream& out, json report, const Settings& s) {
  report["tolerances"] = s.tolerances();
  out << report.dump(2) << '\n';
}

int cmd_place(const Settings& s, std::ostream& out, std::ostream& err) {
  const Loaded l = load(s);
  const SolveReport r = solve_gkfsp(l.noiseless, l.inst.costs, l.dmap);
  json j = header("place", s, &l);
  j["placement"] = indicator_json(r.chosen);
  j["nodes"] = r.chosen.support();
  j["zeta"] = zeta_json(r.zeta);
  j["trace_priori"] = trace_json(r.objective);
  j["trace_posteriori"] = trace_json(r.objective_posteriori);
  j["spent"] = r.spent;
  j["budget"] = l.inst.costs.placement_budget;
  emit(out, std::move(j), s);
  err << "place: sensor at node " << r.chosen.support().front() << " (zeta "
      << *r.zeta << "), trace " << fmt(r.objective) << '\n';
  return kOk;
}

int cmd_attack(const Settings& s, std::ostream& out, std::ostream& err) {
  const Loaded l = load(s);
  const int n = l.inst.system.size();
  const Indicator mu = s.placement.empty() ? all_nodes(n) : parse_placement(s.placement, n);
  const SolveReport r = solve_gkfsa(l.noiseless, l.inst.costs, mu, l.dmap);
  json j = header("attack", s, &l);
  j["placement"] = indicator_json(mu);
  j["attack"] = indicator_json(r.chosen);
  j["survivors"] = indicator_json(mu.minus(r.chosen));
  j["zeta"] = zeta_json(r.zeta);
  j["trace_priori"] = trace_json(r.objective);
  j["trace_posteriori"] = trace_json(r.objective_posteriori);
  j["spent"] = r.spent;
  j["budget"] = l.inst.costs.attack_budget;
  emit(out, std::move(j), s);
  err << "attack: remove " << r.chosen.to_string() << " from " << mu.to_string()
      << ", trace " << fmt(r.objective) << '\n';
  return kOk;
}

int cmd_resilient(const Settings& s, std::ostream& out, std::ostream& err) {
  const Loaded l = load(s);
  const SolveReport r = solve_rgkfsp(l.noiseless, l.inst.costs, l.dmap);
  json j = header("resilient", s, &l);
  j["placement"] = indicator_json(r.chosen);
  j["feasible"] = is_feasible_placement(r.chosen, l.inst.costs);
  j["worst_attack"] = indicator_json(r.attack.value_or(Indicator(r.chosen.size())));
  j["zeta"] = zeta_json(r.zeta);
  j["trace_priori"] = trace_json(r.objective);
  j["trace_posteriori"] = trace_json(r.objective_posteriori);
  j["spent"] = r.spent;
  emit(out, std::move(j), s);
  err << "resilient: place " << r.chosen.to_string() << ", worst-case trace "
      << fmt(r.objective) << '\n';
  return kOk;
}

int cmd_verify(const Settings& s, std::ostream& out, std::ostream& err) {
  const Loaded l = load(s);
  const int n = l.inst.system.size();
  const OracleOptions oracle = s.oracle();
  std::vector<std::string> problems;
  if (s.problem == "all") {
    problems = {"gkfsp", "gkfsa", "rgkfsp"};
  } else {
    problems = {std::string(problem_name(parse_problem(s.problem)))};
  }

  json j = header("verify", s, &l);
  json checks = json::array();
  bool all_agree = true;
  for (const std::string& p : problems) {
    json c;
    c["problem"] = p;
    TraceValue solver;
    TraceValue brute;
    bool solver_infeasible = false;
    bool brute_infeasible = false;
    try {
      if (p == "gkfsp") {
        try {
          solver = solve_gkfsp(l.noiseless, l.inst.costs, l.dmap).objective;
        } catch (const InfeasibleError&) {
          solver_infeasible = true;
        }
        try {
          brute = brute_gkfsp(l.noiseless, l.inst.costs, oracle).objective;
        } catch (const InfeasibleError&) {
          brute_infeasible = true;
        }
      } else if (p == "gkfsa") {
        const Indicator mu =
            s.placement.empty() ? all_nodes(n) : parse_placement(s.placement, n);
        c["placement"] = indicator_json(mu);
        solver = solve_gkfsa(l.noiseless, l.inst.costs, mu, l.dmap).objective;
        brute = brute_gkfsa(l.noiseless, l.inst.costs, mu, oracle).objective;
      } else {
        solver = solve_rgkfsp(l.noiseless, l.inst.costs, l.dmap).objective;
        brute = brute_rgkfsp(l.noiseless, l.inst.costs, oracle).objective;
      }
    } catch (const VerificationError& e) {
      c["agree"] = false;
      c["error"] = e.what();
      all_agree = false;
      checks.push_back(std::move(c));
      continue;
    }
    bool agree;
    if (solver_infeasible || brute_infeasible) {
      agree = solver_infeasible == brute_infeasible;
      c["solver"] = solver_infeasible ? json("infeasible") : trace_json(solver);
      c["oracle"] = brute_infeasible ? json("infeasible") : trace_json(brute);
    } else {
      agree = approx_equal(solver, brute, s.verify_tol);
      c["solver"] = trace_json(solver);
      c["oracle"] = trace_json(brute);
      if (solver.is_finite() && brute.is_finite()) {
        c["gap"] = std::abs(solver.value() - brute.value());
      }
    }
    c["agree"] = agree;
    all_agree = all_agree && agree;
    checks.push_back(std::move(c));
  }
  j["checks"] = std::move(checks);
  j["agree"] = all_agree;
  emit(out, std::move(j), s);
  err << "verify: " << (all_agree ? "solver and oracle agree" : "MISMATCH") << '\n';
  return all_agree ? kOk : kMismatch;
}

int cmd_bound(const Settings& s, std::ostream& out, std::ostream& err) {
  Loaded l = load(s);
  NetworkSystem sys = l.inst.system;
  const int n = sys.size();
  if (s.override_sigma_v2) {
    if (*s.override_sigma_v2 < 0.0) throw ArgumentError("--sigma-v2 must be >= 0");
    sys.sensor_noise = *s.override_sigma_v2 * Matrix::Identity(n, n);
  }
  if (s.placement.empty()) throw ArgumentError("bound needs --placement");
  const Indicator mu = parse_placement(s.placement, n);
  NoiseBoundOptions opts;
  opts.dare = s.dare();
  const NoiseBoundReport r = compute_noise_bound(sys, mu, opts);
  const CovariancePair noisy = dare_solve(sys, mu, s.dare());

  json j = header("bound", s, &l);
  j["placement"] = indicator_json(mu);
  j["noiseless_trace_priori"] = r.noiseless_priori.trace();
  j["noiseless_trace_posteriori"] = r.noiseless_posteriori.trace();
  j["trace_E"] = r.trace_extra();
  j["trace_E_posteriori"] = r.trace_extra_posteriori();
  j["bound_priori"] = r.bound_priori();
  j["bound_posteriori"] = r.bound_posteriori();
  j["bound_posteriori_joseph"] = r.bound_posteriori_joseph();
  j["noisy_trace_priori"] = trace_json(noisy.trace_priori());
  j["noisy_trace_posteriori"] = trace_json(noisy.trace_posteriori());
  j["closed_loop_spectral_radius"] = r.closed_loop_radius;
  j["lyapunov_iterations"] = r.lyapunov_iterations;
  emit(out, std::move(j), s);
  err << "bound: trace(Sigma~) " << fmt(noisy.trace_priori()) << " <= "
      << r.bound_priori() << " (trace E = " << r.trace_extra() << ")\n";
  return kOk;
}

int cmd_experiment(const Settings& s, std::ostream& out, std::ostream& err) {
  ExperimentConfig cfg;
  cfg.problem = parse_problem(s.problem == "all" ? "gkfsp" : s.problem);
  cfg.realizations = s.realizations;
  cfg.sigma_v2 = parse_sigma_list(s.sigma_v2);
  cfg.seed = s.seed;
  cfg.nodes = s.nodes;
  cfg.edges = s.edges;
  cfg.sigma_w2 = s.sigma_w2;
  cfg.brute_force_cap = s.cap_minmax;
  cfg.jobs = s.jobs > 0 ? s.jobs : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  cfg.dare = s.dare();
  if (!s.placement.empty()) cfg.attack_placement = parse_placement(s.placement, s.nodes);

  const auto rows = gap_experiment(cfg);
  if (s.out.empty() || s.out == "-") {
    write_csv(out, rows);
  } else {
    std::ofstream file(s.out);
    if (!file) throw ArgumentError("cannot write " + s.out);
    write_csv(file, rows);
  }

  std::size_t vacuous = 0;
  std::size_t violations = 0;
  double max_subopt = 0.0;
  for (const auto& r : rows) {
    if (!r.bound.is_finite()) ++vacuous;
    if (!r.within_bound(s.verify_tol)) ++violations;
    if (std::isfinite(r.suboptimality())) max_subopt = std::max(max_subopt, r.suboptimality());
  }
  if (!s.out.empty() && s.out != "-") {
    json j = header("experiment", s, nullptr);
    j["problem"] = std::string(problem_name(cfg.problem));
    j["realizations"] = cfg.realizations;
    j["sigma_v2"] = cfg.sigma_v2;
    j["seed"] = cfg.seed;
    j["rows"] = rows.size();
    j["csv"] = s.out;
    j["max_suboptimality"] = max_subopt;
    j["bound_violations"] = violations;
    j["vacuous_bounds"] = vacuous;
    emit(out, std::move(j), s);
  }
  err << "experiment: " << rows.size() << " rows, max suboptimality " << max_subopt
      << ", " << violations << " bound violations, " << vacuous << " infinite bounds\n";
  return kOk;
}

int cmd_reduce(const Settings& s, std::ostream& out, std::ostream& err) {
  const SubsetSumInstance ss{s.sizes, s.target};
  auto [sys, costs] = build_reduction_instance(ss);
  ProblemInstance inst;
  inst.system = std::move(sys);
  inst.costs = std::move(costs);
  inst.metadata.name = "subset-sum-reduction";
  inst.metadata.generator = "subset_sum";
  save_instance(inst, s.out);

  json j = header("reduce-subset-sum", s, nullptr);
  j["out"] = s.out;
  j["n"] = inst.system.size();
  j["h"] = inst.costs.placement_costs;
  j["H"] = inst.costs.placement_budget;
  j["f"] = inst.costs.attack_costs;
  j["F"] = inst.costs.attack_budget;
  emit(out, std::move(j), s);
  err << "reduce-subset-sum: wrote " << inst.system.size() << "-node path to " << s.out
      << '\n';
  return kOk;
}

int cmd_gen(const Settings& s, std::ostream& out, std::ostream& err) {
  ProblemInstance inst;
  if (s.kind == "stochastic") {
    StochasticConfig cfg;
    cfg.nodes = s.nodes;
    cfg.extra_edges = s.extra_edges;
    cfg.self_loops = !s.no_self_loops;
    cfg.seed = s.seed;
    cfg.input_variance = s.gen_sigma_w2.value_or(cfg.input_variance);
    cfg.max_budget = s.max_budget;
    inst = generate_row_stochastic_instance(cfg);
  } else if (s.kind == "normal") {
    NormalConfig cfg;
    cfg.nodes = s.nodes;
    cfg.edges = s.edges;
    cfg.input_variance = s.gen_sigma_w2.value_or(cfg.input_variance);
    cfg.noise_variance = s.gen_sigma_v2;
    cfg.seed = s.seed;
    cfg.max_budget = s.max_budget;
    inst = generate_normal_instance(cfg);
  } else {
    throw ArgumentError("--kind must be stochastic or normal");
  }
  save_instance(inst, s.out);
  json j = header("gen", s, nullptr);
  j["kind"] = s.kind;
  j["out"] = s.out;
  j["n"] = inst.system.size();
  j["seed"] = s.seed;
  j["rejections"] = inst.metadata.rejections;
  emit(out, std::move(j), s);
  err << "gen: wrote " << s.kind << " instance (n = " << inst.system.size() << ") to "
      << s.out << '\n';
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Settings s;
  CLI::App app{"Sensor placement, attack and resilient placement for networked "
               "linear systems"};
  app.name("sensorplace");
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "TOML/INI file with flag defaults");

  app.add_option("--conv-tol", s.conv_tol, "Riccati convergence tolerance")
      ->check(CLI::PositiveNumber);
  app.add_option("--max-iter", s.max_iter, "Riccati iteration cap")->check(CLI::PositiveNumber);
  app.add_option("--svd-tol", s.svd_tol, "relative pseudo-inverse cutoff");
  app.add_option("--rank-tol", s.rank_tol, "relative rank cutoff for PBH tests");
  app.add_option("--zero-tol", s.zero_tol, "structural zero threshold for A");
  app.add_option("--verify-tol", s.verify_tol, "solver/oracle trace agreement tolerance");
  app.add_option("--cap", s.cap, "node cap for brute-force placement/attack");
  app.add_option("--cap-minmax", s.cap_minmax, "node cap for brute-force min-max");

  auto* place = app.add_subcommand("place", "optimal sensor placement (zero noise)");
  place->add_option("instance", s.instance)->required();

  auto* attack = app.add_subcommand("attack", "optimal attack on a placement");
  attack->add_option("instance", s.instance)->required();
  attack->add_option("--placement", s.placement, "0/1 string; default all nodes");

  auto* resilient = app.add_subcommand("resilient", "resilient sensor placement");
  resilient->add_option("instance", s.instance)->required();

  auto* verify = app.add_subcommand("verify", "compare solvers with brute force");
  verify->add_option("instance", s.instance)->required();
  verify->add_option("--problem", s.problem, "gkfsp, gkfsa, rgkfsp or all");
  verify->add_option("--placement", s.placement, "placement attacked by gkfsa");

  auto* bound = app.add_subcommand("bound", "noisy-measurement suboptimality bound");
  bound->add_option("instance", s.instance)->required();
  bound->add_option("--placement", s.placement)->required();
  bound->add_option("--sigma-v2", s.override_sigma_v2, "replace V by sigma_v2 * I");

  auto* experiment = app.add_subcommand("experiment", "noisy gap experiment (CSV)");
  experiment->add_option("--problem", s.problem, "gkfsp, gkfsa or rgkfsp")->required();
  experiment->add_option("--realizations", s.realizations)->check(CLI::NonNegativeNumber);
  experiment->add_option("--sigma-v2", s.sigma_v2, "list a,b,c or range start:stop:count");
  experiment->add_option("--seed", s.seed);
  experiment->add_option("--nodes", s.nodes);
  experiment->add_option("--edges", s.edges);
  experiment->add_option("--sigma-w2", s.sigma_w2);
  experiment->add_option("--placement", s.placement, "fixed placement for gkfsa");
  experiment->add_option("--jobs", s.jobs, "worker threads; 0 means all cores");
  experiment->add_option("--out", s.out, "CSV path; '-' or empty writes CSV to stdout");

  auto* reduce = app.add_subcommand("reduce-subset-sum", "subset-sum reduction instance");
  reduce->add_option("--sizes", s.sizes)->required()->delimiter(',');
  reduce->add_option("--target", s.target)->required();
  reduce->add_option("--out", s.out)->required();

  auto* gen = app.add_subcommand("gen", "random instance generator");
  gen->add_option("--kind", s.kind)->check(CLI::IsMember({"stochastic", "normal"}));
  gen->add_option("--nodes", s.nodes);
  gen->add_option("--extra-edges", s.extra_edges, "stochastic: edges beyond the cycle");
  gen->add_option("--edges", s.edges, "normal: total nonzero entries");
  gen->add_option("--sigma-w2", s.gen_sigma_w2, "default 1 (stochastic) or 0.1 (normal)");
  gen->add_option("--sigma-v2", s.gen_sigma_v2, "normal: V = sigma_v2 * I");
  gen->add_option("--seed", s.seed);
  gen->add_option("--max-budget", s.max_budget, "cap sampled budgets; 0 = uncapped");
  gen->add_flag("--no-self-loops", s.no_self_loops, "stochastic: omit self-loops");
  gen->add_option("--out", s.out)->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  try {
    if (place->parsed()) return cmd_place(s, out, err);
    if (attack->parsed()) return cmd_attack(s, out, err);
    if (resilient->parsed()) return cmd_resilient(s, out, err);
    if (verify->parsed()) return cmd_verify(s, out, err);
    if (bound->parsed()) return cmd_bound(s, out, err);
    if (experiment->parsed()) return cmd_experiment(s, out, err);
    if (reduce->parsed()) return cmd_reduce(s, out, err);
    if (gen->parsed()) return cmd_gen(s, out, err);
  } catch (const InfeasibleError& e) {
    err << "infeasible: " << e.what() << '\n';
    return kInfeasible;
  } catch (const VerificationError& e) {
    err << "verification failed: " << e.what() << '\n';
    return kMismatch;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  } catch (const ParseError& e) {
    err << "error: " << e.what();
    if (!e.field().empty()) err << " (field '" << e.field() << "')";
    err << '\n';
    return kUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: malformed number (" << e.what() << ")\n";
    return kUsage;
  }
  return kUsage;
}

}  // namespace sensorplace::cli
