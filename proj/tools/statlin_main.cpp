// Command-line front end: rank-condition checks, biaffine analysis,
// mean-covariance simulation, and drift-genericity experiments.
//
// Exit codes: 0 pass / success, 1 usage or parse error, 2 fail, 3 inconclusive.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include "statlin/biaffine.hpp"
#include "statlin/rank.hpp"
#include "statlin/simulate.hpp"
#include "statlin/spec_io.hpp"

namespace {

using nlohmann::json;
using namespace statlin;

constexpr std::uint64_t kDefaultSeed = 12345;

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag_seed, const SystemSpec& spec) {
  if (flag_seed) return *flag_seed;
  if (spec.seed) return *spec.seed;
  if (const char* env = std::getenv("STATLIN_SEED")) {
    try {
      return std::stoull(env);
    } catch (...) {
      throw SpecError("STATLIN_SEED must be an unsigned integer");
    }
  }
  return kDefaultSeed;
}

void emit_json(const json& j, const std::string& target) {
  const std::string text = j.dump(2) + "\n";
  if (target == "-") {
    std::cout << text;
  } else {
    std::ofstream out(target, std::ios::binary);
    if (!out) throw SpecError("cannot write JSON report to '" + target + "'");
    out << text;
  }
}

int verdict_exit_code(Verdict v) {
  switch (v) {
    case Verdict::pass: return 0;
    case Verdict::fail: return 2;
    case Verdict::inconclusive_at_cap: return 3;
  }
  return 1;
}

void print_rank_report(const RankReport& report) {
  const char* stop_reason = report.closed           ? ", saturated)"
                            : report.depth_used < report.depth_cap ? ", stopped at target)"
                                                                   : ", cap reached)";
  std::cout << "condition " << report.condition << "  (target rank " << report.target << ", depth cap "
            << report.depth_cap << ", depth used " << report.depth_used << stop_reason << "\n";
  std::cout << "basis size " << report.basis.size() << "\n";
  for (const PointVerdict& pv : report.points) {
    std::cout << "  " << pv.point.dump() << "  rank " << pv.rank << "/" << report.target << "  "
              << to_string(pv.verdict) << "\n";
  }
  if (report.generic) {
    std::cout << "  generic point  rank " << report.generic->rank << "/" << report.target << "  "
              << to_string(report.generic->verdict) << "\n";
  }
  std::cout << "overall: " << to_string(report.overall()) << "\n";
}

/// Parses "1,0;1/2,-3" into two points of the given dimension.
std::vector<RatVec> parse_point_list(const std::string& text, int n) {
  std::vector<RatVec> points;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find(';', start);
    if (end == std::string::npos) end = text.size();
    const std::string chunk = text.substr(start, end - start);
    RatVec point;
    std::size_t cstart = 0;
    while (cstart <= chunk.size()) {
      std::size_t cend = chunk.find(',', cstart);
      if (cend == std::string::npos) cend = chunk.size();
      try {
        point.push_back(parse_rational(chunk.substr(cstart, cend - cstart)));
      } catch (const std::invalid_argument& e) {
        throw SpecError(std::string("--points: ") + e.what());
      }
      cstart = cend + 1;
      if (cend == chunk.size()) break;
    }
    if (static_cast<int>(point.size()) != n) {
      throw SpecError("--points: each point needs " + std::to_string(n) + " coordinates");
    }
    points.push_back(std::move(point));
    start = end + 1;
    if (end == text.size()) break;
  }
  return points;
}

int cmd_check(const std::string& spec_path, const std::string& condition, const std::string& points_flag,
              int depth, double tol, bool generic, const std::optional<std::uint64_t>& seed_flag,
              const std::string& json_target) {
  const SystemSpec spec = load_spec_file(spec_path);
  const std::uint64_t seed = resolve_seed(seed_flag, spec);

  RankCheckOptions opts;
  opts.depth_cap = depth;
  opts.tol = tol;
  opts.generic = generic;
  opts.probe_seed = seed;

  RankReport report;
  if (condition == "state") {
    if (spec.state_points.empty()) throw SpecError("--condition state requires 'state_points' in the spec");
    report = check_rank_at_state(spec.system, spec.state_points, BasisMode::zero_time_ideal, opts);
  } else {
    const std::vector<RatVec> points =
        points_flag.empty() ? spec.points : parse_point_list(points_flag, spec.n);
    if (points.empty()) throw SpecError("condition checks require 'points' in the spec or --points");
    if (condition == "1") {
      report = check_condition_1(spec.system, points, opts);
    } else if (condition == "2") {
      report = check_condition_2(spec.system, points, opts);
    } else if (condition == "hormander") {
      report = check_hormander_lifted(spec.system, points, opts);
    } else {
      throw SpecError("unknown condition '" + condition + "' (expected 1|2|hormander|state)");
    }
  }

  print_rank_report(report);
  const bool controllable = condition == "hormander" && report.overall() == Verdict::pass;
  if (controllable) {
    std::cout << "controllability: controllable in free and fixed time at the tested points\n";
  }
  if (!json_target.empty()) {
    json j = report.to_json();
    j["seed"] = seed;
    if (condition == "hormander") j["controllable"] = controllable;
    emit_json(j, json_target);
  }
  return verdict_exit_code(report.overall());
}

int cmd_biaffine(const std::string& spec_path, int samples, const std::optional<std::uint64_t>& seed_flag,
                 const std::string& json_target) {
  const SystemSpec spec = load_spec_file(spec_path);
  if (!spec.biaffine) throw SpecError("the biaffine command requires a spec with a 'biaffine' block");

  BiaffineSufficiencyOptions opts;
  opts.samples = samples;
  opts.seed = resolve_seed(seed_flag, spec);
  const BiaffineSufficiencyReport report = check_biaffine_sufficiency(*spec.biaffine, opts);

  std::cout << "matrix Lie algebra dim " << report.lie_dim << "/" << report.lie_dim_required
            << (report.lie_dim_holds ? " (full)" : " (deficient)") << "\n";
  std::cout << "B_0i nonzero: " << (report.b0i_nonzero ? "yes" : "no");
  if (report.b0i_nonzero) std::cout << " (i=" << report.b0i_witness_index << ")";
  std::cout << "\n";
  if (report.hypotheses_hold) {
    std::cout << "sampled states: " << report.passes << "/" << report.samples
              << " at full rank (fraction " << report.pass_fraction << ")\n";
    if (report.witness_alpha) std::cout << "witness alpha = " << to_string(*report.witness_alpha) << "\n";
    std::cout << "conclusion: fixed-time accessibility on an open dense set of states\n";
  } else {
    std::cout << "conclusion: no conclusion (hypotheses not met)\n";
  }

  if (!json_target.empty()) {
    json j = report.to_json();
    j["seed"] = opts.seed;
    emit_json(j, json_target);
  }
  return report.hypotheses_hold ? 0 : 3;
}

int cmd_simulate(const std::string& spec_path, const std::string& method, double dt_flag, int paths_flag,
                 const std::optional<std::uint64_t>& seed_flag, const std::string& out_prefix) {
  const SystemSpec spec = load_spec_file(spec_path);
  const std::uint64_t seed = resolve_seed(seed_flag, spec);

  if (!spec.m0) throw SpecError("simulation requires 'm0' in the spec");
  Eigen::VectorXd m0 = to_double(std::span<const Rat>(spec.m0->data(), spec.m0->size()));
  Eigen::MatrixXd p0 = spec.p0 ? spec.p0->to_double() : Eigen::MatrixXd::Zero(spec.n, spec.n).eval();

  SimOptions opts;
  opts.dt = dt_flag > 0 ? dt_flag : spec.sim.dt;
  const double horizon = spec.control ? spec.control->horizon : spec.sim.horizon;
  const ControlSignal u = spec.control ? *spec.control : ControlSignal::zero(spec.m_u, horizon, opts.dt);

  json summary;
  summary["method"] = method;
  summary["seed"] = seed;
  summary["dt"] = opts.dt;
  summary["horizon"] = horizon;

  std::ofstream csv(out_prefix + ".csv", std::ios::binary);
  if (!csv) throw SpecError("cannot write '" + out_prefix + ".csv'");

  int exit_code = 0;
  if (method == "rk4" || method == "closedform") {
    const SimulationResult result = method == "rk4" ? integrate_statlin(spec.system, u, m0, p0, opts)
                                                    : lyapunov_trajectory(spec.system, u, m0, p0, opts);
    write_trajectory_csv(csv, result);
    summary["result"] = simulation_summary_json(result);
    if (result.status != SimStatus::ok) exit_code = 2;
  } else if (method == "mc") {
    const int paths = paths_flag > 0 ? paths_flag : spec.sim.paths;
    const MomentEstimates est =
        euler_maruyama(spec.system, u, m0, horizon, opts.dt, paths, seed, 1e8, p0);
    write_moments_csv(csv, est);
    summary["result"] = moments_summary_json(est);
  } else {
    throw SpecError("unknown method '" + method + "' (expected rk4|closedform|mc)");
  }

  emit_json(summary, out_prefix + ".json");
  std::cout << "wrote " << out_prefix << ".csv and " << out_prefix << ".json\n";
  return exit_code;
}

int cmd_genericity(const std::string& spec_path, const std::string& eps_text, int trials, int degree,
                   const std::optional<std::uint64_t>& seed_flag, const std::string& json_target) {
  const SystemSpec spec = load_spec_file(spec_path);
  if (spec.points.empty()) throw SpecError("genericity requires 'points' in the spec");
  const std::uint64_t seed = resolve_seed(seed_flag, spec);

  Rat eps;
  try {
    eps = parse_rational(eps_text);
  } catch (const std::invalid_argument& e) {
    throw SpecError(std::string("--eps: ") + e.what());
  }

  RankCheckOptions rank_opts;
  rank_opts.probe_seed = seed;
  const GenericityResult result = genericity_experiment(spec.system, eps, trials, degree, seed, spec.points,
                                                        rank_opts);

  std::cout << "perturbed " << result.trials << " systems (degree <= " << degree << ", eps = " << eps_text
            << "): " << result.passes << " passed at all points (fraction " << result.fraction << ")\n";

  if (!json_target.empty()) {
    json j;
    j["eps"] = to_string(eps);
    j["degree"] = degree;
    j["trials"] = result.trials;
    j["passes"] = result.passes;
    j["fraction"] = result.fraction;
    j["seed"] = seed;
    emit_json(j, json_target);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Accessibility analysis and simulation for mean-covariance linearizations of controlled SDEs"};
  app.require_subcommand(1);

  std::string spec_path;
  std::string condition = "1";
  std::string json_target;
  std::string method = "rk4";
  std::string out_prefix = "statlin_out";
  std::string eps_text = "1/10";
  int depth = 0;
  double tol = 1e-8;
  bool generic = false;
  int samples = 100;
  int trials = 200;
  int degree = 2;
  double dt = 0.0;
  int paths = 0;
  std::optional<std::uint64_t> seed_flag;

  auto add_seed = [&](CLI::App* cmd) {
    cmd->add_option("--seed", seed_flag, "Seed override (falls back to spec, then $STATLIN_SEED)");
  };

  std::string points_flag;

  CLI::App* check = app.add_subcommand("check", "Rank-condition check at spec points");
  check->add_option("spec", spec_path, "System spec JSON file")->required();
  check->add_option("--condition", condition, "1|2|hormander|state")->capture_default_str();
  check->add_option("--points", points_flag, "Override points, e.g. \"1,0;1/2,-3\"");
  check->add_option("--depth", depth, "Bracket depth cap (0 = 2N+1)");
  check->add_option("--tol", tol, "SVD relative tolerance")->capture_default_str();
  check->add_flag("--generic", generic, "Add a symbolic generic-rank pseudo-point");
  check->add_option("--json", json_target, "Write JSON report to file ('-' for stdout)");
  add_seed(check);

  CLI::App* biaffine = app.add_subcommand("biaffine", "Sufficient accessibility test for biaffine specs");
  biaffine->add_option("spec", spec_path, "System spec JSON file")->required();
  biaffine->add_option("--samples", samples, "Random states to sample")->capture_default_str();
  biaffine->add_option("--json", json_target, "Write JSON report to file ('-' for stdout)");
  add_seed(biaffine);

  CLI::App* simulate = app.add_subcommand("simulate", "Integrate the mean-covariance system or run Monte Carlo");
  simulate->add_option("spec", spec_path, "System spec JSON file")->required();
  simulate->add_option("--method", method, "rk4|closedform|mc")->capture_default_str();
  simulate->add_option("--dt", dt, "Integration step (defaults to spec sim.dt)");
  simulate->add_option("--paths", paths, "Monte Carlo paths (defaults to spec sim.paths)");
  simulate->add_option("--out", out_prefix, "Output file prefix")->capture_default_str();
  add_seed(simulate);

  CLI::App* genericity = app.add_subcommand("genericity", "Random drift perturbations vs the rank condition");
  genericity->add_option("spec", spec_path, "System spec JSON file")->required();
  genericity->add_option("--eps", eps_text, "Perturbation amplitude (rational)")->capture_default_str();
  genericity->add_option("--trials", trials, "Number of perturbed systems")->capture_default_str();
  genericity->add_option("--degree", degree, "Maximum perturbation monomial degree")->capture_default_str();
  genericity->add_option("--json", json_target, "Write JSON report to file ('-' for stdout)");
  add_seed(genericity);

  CLI11_PARSE(app, argc, argv);

  try {
    if (check->parsed())
      return cmd_check(spec_path, condition, points_flag, depth, tol, generic, seed_flag, json_target);
    if (biaffine->parsed()) return cmd_biaffine(spec_path, samples, seed_flag, json_target);
    if (simulate->parsed()) return cmd_simulate(spec_path, method, dt, paths, seed_flag, out_prefix);
    if (genericity->parsed()) return cmd_genericity(spec_path, eps_text, trials, degree, seed_flag, json_target);
  } catch (const SpecError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
