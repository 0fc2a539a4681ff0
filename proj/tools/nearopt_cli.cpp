// Batch front end: solve, explore, measure, sample, compare.
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "nearopt/io.hpp"
#include "nearopt/metrics.hpp"
#include "nearopt/mga.hpp"
#include "nearopt/model.hpp"
#include "nearopt/oracle.hpp"
#include "nearopt/regions.hpp"
#include "nearopt/sampler.hpp"
#include "nearopt/solver.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace nearopt;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitNotConverged = 2;
constexpr int kExitInputError = 3;
constexpr int kExitSolverError = 4;

struct CommonOpts {
  std::string model_path, spec_path, out_dir;
  std::string method = "oracle";
  double tol = -1.0;  // <0: take the spec file's tolerance
  int max_iter = 200;
  uint64_t seed = 0;
  double rel_gap = 0.1, abs_gap = 0.05, time_limit = 600.0;
  int pool_size = 1;
  bool no_value_cut = false, no_cost_cut = false;
  int exact_metric_every = 1;
  int metric_every = 1;
  long mc_samples = 20000;
};

void add_gap_flags(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--rel-gap", o.rel_gap, "MILP relative gap");
  cmd->add_option("--abs-gap", o.abs_gap, "MILP absolute gap (z units)");
  cmd->add_option("--time-limit", o.time_limit, "MILP time limit in seconds");
}

std::string ensure_out_dir(const std::string& dir) {
  fs::create_directories(dir);
  return dir;
}

void write_manifest(const std::string& out_dir, const std::string& command,
                    const json& config, const SolverGateway& gateway) {
  json doc;
  doc["command"] = command;
  doc["config"] = config;
  doc["solver"] = gateway.settings_string();
  doc["backend"] = gateway.settings().backend;
  io::write_file(out_dir + "/manifest.json", doc.dump(2) + "\n");
}

ExplorationProblem load_problem(const SolverGateway& gateway, const CommonOpts& o,
                                double* v_star_out = nullptr) {
  LinearProgram model = parse_model(io::read_file(o.model_path));
  ExplorationSpec spec = parse_spec(io::read_file(o.spec_path));
  auto [v_star, x_star] = optimal_value(gateway, model);
  ExplorationProblem problem = build_exploration(model, spec, v_star);
  problem.x_star = x_star;
  if (v_star_out) *v_star_out = v_star;
  return problem;
}

json config_json(const CommonOpts& o) {
  json j;
  j["model"] = o.model_path;
  j["spec"] = o.spec_path;
  j["method"] = o.method;
  j["tol"] = o.tol;
  j["max_iter"] = o.max_iter;
  j["seed"] = o.seed;
  j["rel_gap"] = o.rel_gap;
  j["abs_gap"] = o.abs_gap;
  j["time_limit"] = o.time_limit;
  j["pool_size"] = o.pool_size;
  j["value_cut"] = !o.no_value_cut;
  j["cost_cut"] = !o.no_cost_cut;
  j["exact_metric_every"] = o.exact_metric_every;
  j["metric_every"] = o.metric_every;
  return j;
}

struct RunArtifacts {
  ExplorationResult result;
  std::vector<io::MetricsRow> metrics;
};

RunArtifacts run_method(const SolverGateway& gateway, const ExplorationProblem& problem,
                        const CommonOpts& o, const std::string& method,
                        const OuterApprox* reference) {
  const double tol = o.tol > 0 ? o.tol : problem.spec.tolerance;
  RunArtifacts art;
  const bool want_volumes = problem.n_z() <= 3;
  MaxminOptions metric_milp;
  metric_milp.milp = {o.rel_gap, o.abs_gap, o.time_limit, 1};

  IterationHook hook = [&](const IterationRecord& rec, const InnerApprox& in,
                           const OuterApprox& out) {
    io::MetricsRow row;
    row.iter = rec.iteration;
    row.method = rec.method;
    if (rec.has_metric) row.d_io = rec.d_io;
    if (want_volumes && in.n_z() >= 2) {
      row.vol_inner = volume_exact(in.points).value;
      row.vol_outer = volume_exact(out).value;
      if (*row.vol_outer > 0) row.vol_ratio = *row.vol_inner / *row.vol_outer;
    }
    if (reference) {
      SolverGateway local(gateway.settings());
      row.d_to_reference = distance_to_reference(local, in, *reference, metric_milp);
    }
    art.metrics.push_back(std::move(row));
  };

  if (method == "oracle") {
    OracleOptions opts;
    opts.maxmin.milp = {o.rel_gap, o.abs_gap, o.time_limit, 1};
    opts.value_cut = !o.no_value_cut;
    if (o.no_cost_cut) opts.init.cost_cut = InitRegionOptions::kOff;
    opts.pool_size = o.pool_size;
    opts.exact_metric_every = o.exact_metric_every;
    opts.seed = o.seed;
    art.result = run_oracle(gateway, problem, tol, o.max_iter, opts, hook);
  } else {
    auto m = mga_method_from_string(method);
    if (!m) throw InputError("unknown method '" + method + "'");
    MgaRunOptions opts;
    if (o.no_cost_cut) opts.init.cost_cut = InitRegionOptions::kOff;
    opts.metric_every = o.metric_every;
    opts.metric_milp = metric_milp;
    art.result = run_mga(gateway, problem, *m, o.max_iter, o.seed, opts, hook);
  }
  return art;
}

void write_run_artifacts(const std::string& dir, const RunArtifacts& art,
                         const ExplorationProblem& problem, const CommonOpts& o,
                         const std::string& method) {
  io::write_file(dir + "/trace.csv", io::trace_to_csv(art.result.trace));
  io::write_file(dir + "/timings.csv", io::timings_to_csv(art.result.trace));
  io::write_file(dir + "/points.csv", io::points_to_csv(art.result.inner));
  io::write_file(dir + "/halfspaces.csv", io::halfspaces_to_csv(art.result.outer));
  if (!art.metrics.empty())
    io::write_file(dir + "/metrics.csv", io::metrics_to_csv(art.metrics));
  json summary;
  summary["method"] = method;
  summary["converged"] = art.result.converged;
  summary["iterations"] = art.result.trace.size();
  summary["final_d"] = std::isfinite(art.result.final_d) ? json(art.result.final_d)
                                                         : json();
  summary["tol"] = o.tol > 0 ? o.tol : problem.spec.tolerance;
  summary["v_star"] = problem.v_star;
  summary["budget"] = problem.budget;
  summary["inner_points"] = art.result.inner.size();
  summary["outer_halfspaces"] = art.result.outer.halfspaces.size();
  summary["degenerate_weights"] = art.result.degenerate_weights;
  io::write_file(dir + "/summary.json", summary.dump(2) + "\n");
}

int cmd_solve(const CommonOpts& o) {
  SolverGateway gateway;
  LinearProgram model = parse_model(io::read_file(o.model_path));
  auto [v_star, x_star] = optimal_value(gateway, model);
  std::cout << "v_star " << io::fmt(v_star) << "\n";
  if (!o.out_dir.empty()) {
    ensure_out_dir(o.out_dir);
    std::ostringstream os;
    os << "variable,value\n";
    for (int i = 0; i < model.num_vars(); ++i)
      os << model.variables[i].name << "," << io::fmt(x_star[i]) << "\n";
    io::write_file(o.out_dir + "/x_star.csv", os.str());
    write_manifest(o.out_dir, "solve", config_json(o), gateway);
  }
  return kExitOk;
}

int cmd_explore(const CommonOpts& o) {
  SolverGateway gateway;
  ExplorationProblem problem = load_problem(gateway, o);
  RunArtifacts art = run_method(gateway, problem, o, o.method, nullptr);
  const std::string dir = ensure_out_dir(o.out_dir.empty() ? "." : o.out_dir);
  write_run_artifacts(dir, art, problem, o, o.method);
  write_manifest(dir, "explore", config_json(o), gateway);
  std::cout << "method " << o.method << " iterations " << art.result.trace.size()
            << " converged " << (art.result.converged ? "true" : "false")
            << " final_d "
            << (std::isfinite(art.result.final_d) ? io::fmt(art.result.final_d) : "n/a")
            << "\n";
  if (o.method == "oracle" && !art.result.converged) return kExitNotConverged;
  return kExitOk;
}

int cmd_metrics(const std::string& points_path, const std::string& halfspaces_path,
                const std::string& reference_path, const std::string& out_dir,
                const CommonOpts& o) {
  SolverGateway gateway;
  InnerApprox inner = io::points_from_csv(io::read_file(points_path));
  OuterApprox outer = io::halfspaces_from_csv(io::read_file(halfspaces_path));
  MaxminOptions mm;
  mm.milp = {o.rel_gap, o.abs_gap, o.time_limit, 1};

  io::MetricsRow row;
  row.iter = 0;
  row.method = "metrics";
  row.d_io = maxmin_distance(gateway, outer, inner, mm).first;
  if (inner.n_z() <= 3 && inner.n_z() >= 2) {
    row.vol_inner = volume_exact(inner.points).value;
    row.vol_outer = volume_exact(outer).value;
  } else {
    row.vol_outer = volume_mc(mc_region(outer), o.mc_samples, o.seed).value;
    row.vol_inner =
        volume_mc(mc_region(gateway, inner), o.mc_samples, o.seed).value;
  }
  if (row.vol_outer && *row.vol_outer > 0)
    row.vol_ratio = volume_ratio(gateway, inner, outer,
                                 {o.mc_samples, o.seed, true});
  if (!reference_path.empty()) {
    OuterApprox ref = io::halfspaces_from_csv(io::read_file(reference_path));
    row.d_to_reference = distance_to_reference(gateway, inner, ref, mm);
  }
  const std::string dir = ensure_out_dir(out_dir.empty() ? "." : out_dir);
  io::write_file(dir + "/metrics.csv", io::metrics_to_csv({row}));
  write_manifest(dir, "metrics", config_json(o), gateway);
  std::cout << "d_IO " << io::fmt(*row.d_io) << "\n";
  return kExitOk;
}

int cmd_sample(const std::string& mode, const std::string& points_path,
               const std::string& halfspaces_path, const std::string& cloud_path,
               int k, int burn_in, int thin, int chains, bool affine_span,
               const CommonOpts& o) {
  if (k < 1) throw InputError("sample: --k must be >= 1");
  SolverGateway gateway;
  SampleBatch batch;
  std::vector<std::string> names;
  if (mode == "hitrun") {
    if (points_path.empty()) throw InputError("sample hitrun needs --points");
    InnerApprox inner = io::points_from_csv(io::read_file(points_path));
    names = inner.z_names;
    HitAndRunOptions hr;
    if (burn_in >= 0) hr.burn_in = burn_in;
    hr.thinning = thin;
    hr.n_chains = chains;
    hr.affine_span = affine_span;
    batch = hit_and_run(gateway, inner, k, o.seed, hr);
  } else if (mode == "diverse") {
    if (halfspaces_path.empty()) throw InputError("sample diverse needs --halfspaces");
    OuterApprox outer = io::halfspaces_from_csv(io::read_file(halfspaces_path));
    names = outer.z_names;
    std::vector<std::vector<double>> cloud;
    if (!cloud_path.empty()) {
      InnerApprox c = io::points_from_csv(io::read_file(cloud_path));
      cloud = c.points;
    } else {
      cloud.push_back(chebyshev_center(gateway, outer).center);
    }
    MostDistantOptions md;
    md.milp.time_limit_s = o.time_limit;
    std::optional<ExplorationProblem> problem;
    if (!o.model_path.empty() && !o.spec_path.empty())
      problem = load_problem(gateway, o);
    batch = diverse_set(gateway, outer, k, std::move(cloud),
                        problem ? &*problem : nullptr, 1e-6, md);
  } else {
    throw InputError("unknown sample mode '" + mode + "' (hitrun|diverse)");
  }
  const std::string dir = ensure_out_dir(o.out_dir.empty() ? "." : o.out_dir);
  io::write_file(dir + "/samples.csv", io::samples_to_csv(batch, names));
  json cfg = config_json(o);
  cfg["mode"] = mode;
  cfg["k"] = k;
  write_manifest(dir, "sample", cfg, gateway);
  std::cout << "samples " << batch.points.size() << "\n";
  return kExitOk;
}

int cmd_gen_toy(uint64_t seed, int n_tech, int n_periods, const std::string& out,
                const std::string& spec_out, double epsilon, double tolerance) {
  LinearProgram m = generate_toy_model(seed, n_tech, n_periods);
  io::write_file(out, serialize_model(m));
  if (!spec_out.empty()) {
    ExplorationSpec spec;
    for (int t = 0; t < n_tech; ++t) spec.explore.push_back("cap_T" + std::to_string(t));
    spec.epsilon = epsilon;
    spec.tolerance = tolerance;
    io::write_file(spec_out, serialize_spec(spec));
  }
  std::cout << "wrote " << out << "\n";
  return kExitOk;
}

int cmd_compare(const std::vector<std::string>& methods, const CommonOpts& o,
                bool with_reference) {
  if (methods.empty()) throw InputError("compare: empty method list");
  SolverGateway gateway;
  ExplorationProblem problem = load_problem(gateway, o);
  const std::string dir = ensure_out_dir(o.out_dir.empty() ? "." : o.out_dir);

  // reference pass first so MGA rows can measure against the converged outer
  std::optional<OuterApprox> reference;
  std::vector<io::MetricsRow> combined;
  std::vector<std::string> ordered = methods;
  std::stable_partition(ordered.begin(), ordered.end(),
                        [](const std::string& m) { return m == "oracle"; });
  for (const auto& method : ordered) {
    RunArtifacts art = run_method(gateway, problem, o, method,
                                  with_reference && reference ? &*reference : nullptr);
    const std::string sub = dir + "/" + method;
    ensure_out_dir(sub);
    write_run_artifacts(sub, art, problem, o, method);
    if (method == "oracle" && !reference) reference = art.result.outer;
    combined.insert(combined.end(), art.metrics.begin(), art.metrics.end());
  }
  io::write_file(dir + "/metrics.csv", io::metrics_to_csv(combined));
  json cfg = config_json(o);
  cfg["methods"] = methods;
  write_manifest(dir, "compare", cfg, gateway);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"near-optimal space exploration toolkit"};
  app.require_subcommand(1);
  CommonOpts o;

  auto* solve = app.add_subcommand("solve", "solve the system model and report v*");
  solve->add_option("--model", o.model_path, "model JSON")->required();
  solve->add_option("--out-dir", o.out_dir, "artifact directory");

  auto* explore = app.add_subcommand("explore", "run ORACLE or an MGA baseline");
  explore->add_option("--model", o.model_path)->required();
  explore->add_option("--spec", o.spec_path)->required();
  explore->add_option("--method", o.method,
                      "oracle|hsj|hsj-rel|random|vmm|erg|spores");
  explore->add_option("--tol", o.tol, "convergence tolerance (z units)");
  explore->add_option("--max-iter", o.max_iter);
  explore->add_option("--seed", o.seed);
  add_gap_flags(explore, o);
  explore->add_option("--pool-size", o.pool_size);
  explore->add_flag("--no-value-cut", o.no_value_cut);
  explore->add_flag("--no-cost-cut", o.no_cost_cut);
  explore->add_option("--exact-metric-every", o.exact_metric_every);
  explore->add_option("--metric-every", o.metric_every,
                      "per-iteration metric for MGA methods (0 = off)");
  explore->add_option("--out-dir", o.out_dir);

  std::string points_path, halfspaces_path, reference_path, cloud_path;
  auto* metrics = app.add_subcommand("metrics", "measure regions from CSV artifacts");
  metrics->add_option("--points", points_path)->required();
  metrics->add_option("--halfspaces", halfspaces_path)->required();
  metrics->add_option("--reference", reference_path);
  metrics->add_option("--mc-samples", o.mc_samples);
  metrics->add_option("--seed", o.seed);
  add_gap_flags(metrics, o);
  metrics->add_option("--out-dir", o.out_dir);

  std::string mode = "hitrun";
  int k = 100, burn_in = -1, thin = 10, chains = 8;
  bool affine_span = false, with_reference = false;
  auto* sample = app.add_subcommand("sample", "generate designs from regions");
  sample->add_option("--mode", mode, "hitrun|diverse");
  sample->add_option("--points", points_path);
  sample->add_option("--halfspaces", halfspaces_path);
  sample->add_option("--cloud", cloud_path, "diverse mode: seed cloud CSV");
  sample->add_option("--model", o.model_path, "certify diverse designs");
  sample->add_option("--spec", o.spec_path);
  sample->add_option("--k", k)->required();
  sample->add_option("--burn-in", burn_in);
  sample->add_option("--thin", thin);
  sample->add_option("--chains", chains);
  sample->add_flag("--affine-span", affine_span);
  sample->add_option("--seed", o.seed);
  sample->add_option("--time-limit", o.time_limit);
  sample->add_option("--out-dir", o.out_dir);

  uint64_t toy_seed = 1;
  int n_tech = 4, n_periods = 3;
  double toy_eps = 0.15, toy_tol = 0.05;
  std::string toy_out = "toy_model.json", toy_spec_out;
  auto* gen = app.add_subcommand("gen-toy", "write a seeded capacity-expansion toy model");
  gen->add_option("--seed", toy_seed);
  gen->add_option("--n-tech", n_tech);
  gen->add_option("--n-periods", n_periods);
  gen->add_option("--out", toy_out);
  gen->add_option("--spec-out", toy_spec_out, "also write an exploration spec");
  gen->add_option("--epsilon", toy_eps);
  gen->add_option("--tolerance", toy_tol);

  std::vector<std::string> methods;
  auto* compare = app.add_subcommand("compare", "run several methods and collect metrics");
  compare->add_option("--model", o.model_path)->required();
  compare->add_option("--spec", o.spec_path)->required();
  compare->add_option("--methods", methods)->required()->delimiter(',');
  compare->add_option("--iterations", o.max_iter);
  compare->add_option("--tol", o.tol);
  compare->add_option("--seed", o.seed);
  add_gap_flags(compare, o);
  compare->add_option("--metric-every", o.metric_every);
  compare->add_flag("--with-reference-distance", with_reference);
  compare->add_option("--out-dir", o.out_dir);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return kExitInputError;
  }

  try {
    if (gen->parsed())
      return cmd_gen_toy(toy_seed, n_tech, n_periods, toy_out, toy_spec_out, toy_eps,
                         toy_tol);
    if (solve->parsed()) return cmd_solve(o);
    if (explore->parsed()) return cmd_explore(o);
    if (metrics->parsed())
      return cmd_metrics(points_path, halfspaces_path, reference_path, o.out_dir, o);
    if (sample->parsed())
      return cmd_sample(mode, points_path, halfspaces_path, cloud_path, k, burn_in,
                        thin, chains, affine_span, o);
    if (compare->parsed()) return cmd_compare(methods, o, with_reference);
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const SolverError& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return kExitSolverError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSolverError;
  }
  return kExitOk;
}
