#include "nearopt/oracle.hpp"

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cmath>

#include "nearopt/rng.hpp"

namespace nearopt {

namespace {

double inf_norm(const std::vector<double>& v) {
  double n = 0.0;
  for (double x : v) n = std::max(n, std::abs(x));
  return n;
}

double inf_dist(const std::vector<double>& a, const std::vector<double>& b) {
  double n = 0.0;
  for (size_t i = 0; i < a.size(); ++i) n = std::max(n, std::abs(a[i] - b[i]));
  return n;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

using Clock = std::chrono::steady_clock;
double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

}  // namespace

std::pair<double, std::vector<double>> optimal_value(const SolverGateway& gateway,
                                                     const LinearProgram& model) {
  LpSolution sol = gateway.solve_lp(model);
  if (sol.status != LpStatus::kOptimal)
    throw SolverError(std::string("system model: ") + to_string(sol.status));
  return {sol.objective, sol.primal};
}

MaxminMilp build_maxmin_milp(const OuterApprox& outer, const InnerApprox& inner,
                             double big_m_dual, double t_upper) {
  const int nz = outer.n_z();
  const int m = inner.size();
  if (m < 1) throw InputError("max-min MILP needs a nonempty inner approximation");
  for (int j = 0; j < nz; ++j) {
    if (!std::isfinite(outer.z_lower[j]) || !std::isfinite(outer.z_upper[j]))
      throw InputError("max-min MILP needs a compact outer approximation");
  }

  double diam = 0.0;
  for (int j = 0; j < nz; ++j) diam = std::max(diam, outer.z_upper[j] - outer.z_lower[j]);
  const double t_ub = std::min(diam, t_upper) + 1e-7;
  // per-coordinate hull envelope for the complementarity constants
  std::vector<double> z_min(nz, kInf), z_max(nz, -kInf);
  for (const auto& pt : inner.points)
    for (int j = 0; j < nz; ++j) {
      z_min[j] = std::min(z_min[j], pt[j]);
      z_max[j] = std::max(z_max[j], pt[j]);
    }

  MaxminMilp out;
  SolverModel& lp = out.model;
  lp.maximize = true;

  out.z_begin = 0;
  for (int j = 0; j < nz; ++j) lp.add_col(outer.z_lower[j], outer.z_upper[j], 0.0);
  out.t_col = lp.add_col(0.0, t_ub, 1.0);
  out.lambda_begin = lp.num_cols();
  for (int i = 0; i < m; ++i) lp.add_col(0.0, 1.0, 0.0);
  const int alpha_begin = lp.num_cols();
  for (int j = 0; j < nz; ++j) lp.add_col(0.0, 1.0, 0.0);
  const int beta_begin = lp.num_cols();
  for (int j = 0; j < nz; ++j) lp.add_col(0.0, 1.0, 0.0);
  out.gamma_begin = lp.num_cols();
  for (int i = 0; i < m; ++i) lp.add_col(0.0, big_m_dual, 0.0);
  const int nu_col = lp.add_col(-kInf, kInf, 0.0);
  out.u_alpha_begin = lp.num_cols();
  for (int j = 0; j < nz; ++j) lp.add_col(0.0, 1.0, 0.0, /*integer=*/true);
  out.u_beta_begin = lp.num_cols();
  for (int j = 0; j < nz; ++j) lp.add_col(0.0, 1.0, 0.0, /*integer=*/true);
  out.u_gamma_begin = lp.num_cols();
  for (int i = 0; i < m; ++i) lp.add_col(0.0, 1.0, 0.0, /*integer=*/true);
  out.num_binaries = 2 * nz + m;

  // upper level: z in O (box is in the column bounds)
  for (const auto& h : outer.halfspaces) {
    std::vector<std::pair<int, double>> row;
    for (int j = 0; j < nz; ++j)
      if (h.normal[j] != 0.0) row.emplace_back(out.z_begin + j, h.normal[j]);
    lp.add_le(std::move(row), h.offset);
  }

  // lower-level primal feasibility:  |z - Z'lambda|_j <= t, sum lambda = 1
  for (int j = 0; j < nz; ++j) {
    std::vector<std::pair<int, double>> minus, plus;
    minus.emplace_back(out.z_begin + j, 1.0);
    plus.emplace_back(out.z_begin + j, -1.0);
    for (int i = 0; i < m; ++i) {
      const double zij = inner.points[i][j];
      if (zij != 0.0) {
        minus.emplace_back(out.lambda_begin + i, -zij);
        plus.emplace_back(out.lambda_begin + i, zij);
      }
    }
    minus.emplace_back(out.t_col, -1.0);
    plus.emplace_back(out.t_col, -1.0);
    lp.add_le(std::move(minus), 0.0);  // z_j - (Z'l)_j - t <= 0   (dual alpha_j)
    lp.add_le(std::move(plus), 0.0);   // (Z'l)_j - z_j - t <= 0   (dual beta_j)
  }
  {
    std::vector<std::pair<int, double>> sum;
    for (int i = 0; i < m; ++i) sum.emplace_back(out.lambda_begin + i, 1.0);
    lp.add_eq(std::move(sum), 1.0);
  }

  // stationarity: d/dt: sum_j (alpha_j + beta_j) = 1
  {
    std::vector<std::pair<int, double>> row;
    for (int j = 0; j < nz; ++j) {
      row.emplace_back(alpha_begin + j, 1.0);
      row.emplace_back(beta_begin + j, 1.0);
    }
    lp.add_eq(std::move(row), 1.0);
  }
  // d/dlambda_i: -(Z alpha)_i + (Z beta)_i - gamma_i + nu = 0
  for (int i = 0; i < m; ++i) {
    std::vector<std::pair<int, double>> row;
    for (int j = 0; j < nz; ++j) {
      const double zij = inner.points[i][j];
      if (zij != 0.0) {
        row.emplace_back(alpha_begin + j, -zij);
        row.emplace_back(beta_begin + j, zij);
      }
    }
    row.emplace_back(out.gamma_begin + i, -1.0);
    row.emplace_back(nu_col, 1.0);
    lp.add_eq(std::move(row), 0.0);
  }

  // complementarity, big-M on both sides. alpha/beta are bounded by 1 through
  // the stationarity row, so their dual-side constant is exactly 1. The
  // primal-side constants bound the attainable row slack coordinatewise.
  for (int j = 0; j < nz; ++j) {
    lp.add_le({{alpha_begin + j, 1.0}, {out.u_alpha_begin + j, -1.0}}, 0.0);
    lp.add_le({{beta_begin + j, 1.0}, {out.u_beta_begin + j, -1.0}}, 0.0);
    // slack of the minus row: t + (Z'l)_j - z_j <= M (1 - u)
    const double m_a = t_ub + std::max(0.0, z_max[j] - outer.z_lower[j]) + 1e-6;
    const double m_b = t_ub + std::max(0.0, outer.z_upper[j] - z_min[j]) + 1e-6;
    std::vector<std::pair<int, double>> sa{{out.t_col, 1.0}, {out.z_begin + j, -1.0}};
    std::vector<std::pair<int, double>> sb{{out.t_col, 1.0}, {out.z_begin + j, 1.0}};
    for (int i = 0; i < m; ++i) {
      const double zij = inner.points[i][j];
      if (zij != 0.0) {
        sa.emplace_back(out.lambda_begin + i, zij);
        sb.emplace_back(out.lambda_begin + i, -zij);
      }
    }
    sa.emplace_back(out.u_alpha_begin + j, m_a);
    sb.emplace_back(out.u_beta_begin + j, m_b);
    lp.add_le(std::move(sa), m_a);
    lp.add_le(std::move(sb), m_b);
  }
  for (int i = 0; i < m; ++i) {
    lp.add_le({{out.gamma_begin + i, 1.0}, {out.u_gamma_begin + i, -big_m_dual}}, 0.0);
    lp.add_le({{out.lambda_begin + i, 1.0}, {out.u_gamma_begin + i, 1.0}}, 1.0);
  }

  // cardinality tightening: 1 <= active norm rows <= n_z; interpolation uses
  // at least one and at most n_z + 1 points.
  {
    std::vector<std::pair<int, double>> row;
    for (int j = 0; j < nz; ++j) {
      row.emplace_back(out.u_alpha_begin + j, 1.0);
      row.emplace_back(out.u_beta_begin + j, 1.0);
    }
    lp.add_row(1.0, static_cast<double>(nz), std::move(row));
  }
  {
    std::vector<std::pair<int, double>> row;
    for (int i = 0; i < m; ++i) row.emplace_back(out.u_gamma_begin + i, 1.0);
    const double lo = std::max(0.0, static_cast<double>(m - (nz + 1)));
    lp.add_row(lo, static_cast<double>(m - 1), std::move(row));
  }
  return out;
}

TrialResult furthest_point(const SolverGateway& gateway, const OuterApprox& outer,
                           const InnerApprox& inner, const MaxminOptions& options) {
  const int nz = outer.n_z();
  double big_m = options.big_m_dual;
  for (int attempt = 0;; ++attempt) {
    MaxminMilp milp = build_maxmin_milp(outer, inner, big_m, options.t_upper_hint);
    MilpOptions mo = options.milp;
    MilpSolution sol = gateway.solve_milp(milp.model, mo);
    if (sol.status == MilpStatus::kInfeasible)
      throw SolverError("max-min MILP infeasible (outer approximation empty?)");
    if (!sol.has_incumbent())
      throw SolverError("max-min MILP hit the time limit without an incumbent");

    // big-M validity: no gamma dual may sit against the cap
    double gamma_max = 0.0;
    for (int i = 0; i < inner.size(); ++i)
      gamma_max = std::max(gamma_max, sol.incumbent[milp.gamma_begin + i]);
    if (gamma_max > 0.99 * big_m) {
      if (attempt >= options.max_big_m_retries)
        throw SolverError("max-min MILP: dual big-M kept saturating");
      big_m *= 10.0;
      continue;
    }

    TrialResult out;
    out.z_trial.assign(sol.incumbent.begin() + milp.z_begin,
                       sol.incumbent.begin() + milp.z_begin + nz);
    out.d_io = sol.objective;
    out.bound = sol.bound;
    out.milp_status = sol.status;
    out.certified = true;
    for (const auto& entry : sol.pool) {
      std::vector<double> z(entry.begin() + milp.z_begin,
                            entry.begin() + milp.z_begin + nz);
      bool dup = false;
      for (const auto& seen : out.pool) dup |= inf_dist(seen, z) <= 1e-9;
      if (!dup) out.pool.push_back(std::move(z));
    }
    return out;
  }
}

FeasibleResult closest_near_optimal(const SolverGateway& gateway,
                                    const ExplorationProblem& problem,
                                    const std::vector<double>& z_trial) {
  NearOptProjection proj = project_to_near_optimal(gateway, problem, z_trial);
  if (proj.status != LpStatus::kOptimal)
    throw SolverError(std::string("closest-feasible solve: ") + to_string(proj.status));
  FeasibleResult out;
  out.z_feasible = std::move(proj.z_feasible);
  out.delta = proj.distance;
  out.mu = std::move(proj.mu);
  out.x_full = std::move(proj.x);
  return out;
}

std::optional<Halfspace> separating_cut(const FeasibleResult& result) {
  if (inf_norm(result.mu) < 1e-9) return std::nullopt;
  Halfspace h;
  h.normal = result.mu;
  h.offset = dot(result.mu, result.z_feasible);
  h.provenance = CutProvenance::kDualCut;
  return normalized(std::move(h));
}

ValueCutResult value_function_cut(const SolverGateway& gateway,
                                  const ExplorationProblem& problem,
                                  const std::vector<double>& z_f,
                                  const std::vector<double>* warm) {
  const int nz = problem.n_z();
  SolverModel lp = to_solver_model(problem.model);  // no budget row (Eq. 13)
  const int first_fix_row = lp.num_rows();
  for (int j = 0; j < nz; ++j) lp.add_eq(problem.projection[j].coeffs, z_f[j]);

  ValueCutResult out;
  RawLpResult r = gateway.solve_raw_lp(lp, warm);
  if (r.status != LpStatus::kOptimal) return out;  // surfaced, not fatal
  out.feasible = true;
  out.v_f = r.objective;

  std::vector<double> lambda(nz);
  for (int j = 0; j < nz; ++j) lambda[j] = r.row_dual[first_fix_row + j];
  if (inf_norm(lambda) < 1e-12) return out;  // flat linearization, no information

  // v_f + lambda'(z - z_f) <= budget
  Halfspace h;
  h.normal = lambda;
  h.offset = problem.budget - out.v_f + dot(lambda, z_f);
  h.provenance = CutProvenance::kValueCut;
  out.cut = normalized(std::move(h));
  return out;
}

namespace {

// Uncertified trial generation for the intermediate iterations of the
// heuristic-metric mode: probe seeded directions, push each to the outer
// boundary with an LP, keep the probe furthest from the hull.
TrialResult heuristic_trial(const SolverGateway& gateway, const OuterApprox& outer,
                            const InnerApprox& inner, int directions, Rng& rng) {
  const int nz = outer.n_z();
  SolverModel lp;
  for (int j = 0; j < nz; ++j) lp.add_col(outer.z_lower[j], outer.z_upper[j], 0.0);
  for (const auto& h : outer.halfspaces) {
    std::vector<std::pair<int, double>> row;
    for (int j = 0; j < nz; ++j)
      if (h.normal[j] != 0.0) row.emplace_back(j, h.normal[j]);
    lp.add_le(std::move(row), h.offset);
  }
  IncrementalLp inc(lp, gateway.settings());

  TrialResult best;
  best.certified = false;
  best.d_io = -1.0;
  for (int k = 0; k < directions; ++k) {
    std::vector<double> dir(nz);
    for (int j = 0; j < nz; ++j) dir[j] = rng.normal();
    inc.set_objective(dir, /*maximize=*/true);
    RawLpResult r = inc.solve();
    if (r.status != LpStatus::kOptimal) continue;
    std::vector<double> z(r.col_value.begin(), r.col_value.begin() + nz);
    const double d = inner_contains(gateway, inner, z, 0.0).distance;
    if (d > best.d_io) {
      best.d_io = d;
      best.z_trial = std::move(z);
    }
  }
  if (best.z_trial.empty())
    throw SolverError("heuristic trial generation found no outer vertex");
  best.bound = kInf;  // no certificate
  best.milp_status = MilpStatus::kOptimal;
  best.pool.push_back(best.z_trial);
  return best;
}

}  // namespace

ExplorationResult run_oracle(const SolverGateway& gateway,
                             const ExplorationProblem& problem, double tol,
                             int max_iter, const OracleOptions& options,
                             const IterationHook& hook) {
  if (tol <= 0) throw InputError("run_oracle: tol must be positive");
  if (max_iter < 1) throw InputError("run_oracle: max_iter must be >= 1");

  std::vector<double> x_star = problem.x_star;
  if (static_cast<int>(x_star.size()) != problem.model.num_vars())
    x_star = optimal_value(gateway, problem.model).second;

  auto [inner, outer] = init_regions(gateway, problem, {problem.project(x_star)},
                                     {PointTag{PointTag::kOptimum, -1}}, options.init);

  ExplorationResult out;
  Rng heur_rng(substream_seed(options.seed, 0x6f7261636cULL));
  const auto run_start = Clock::now();
  double bound_cap = kInf;  // certified bound from the previous iteration

  for (int iter = 1; iter <= max_iter; ++iter) {
    IterationRecord rec;
    rec.iteration = iter;
    rec.method = "oracle";

    // Step 2: furthest point (exact MILP or heuristic probe)
    auto t2 = Clock::now();
    const bool heuristic = options.exact_metric_every > 1 &&
                           (iter % options.exact_metric_every) != 0;
    MaxminOptions mm = options.maxmin;
    mm.milp.pool_size = std::max(1, options.pool_size);
    mm.t_upper_hint = std::min(mm.t_upper_hint, bound_cap);
    TrialResult trial =
        heuristic ? heuristic_trial(gateway, outer, inner,
                                    options.heuristic_directions, heur_rng)
                  : furthest_point(gateway, outer, inner, mm);
    if (!trial.certified && trial.d_io <= tol) {
      // only an exact evaluation may declare convergence
      trial = furthest_point(gateway, outer, inner, mm);
    }
    if (trial.certified && std::isfinite(trial.bound))
      bound_cap = std::min(bound_cap, trial.bound * (1.0 + 1e-9) + 1e-9);
    rec.t_step2_ms = ms_since(t2);
    rec.method = trial.certified ? "oracle" : "oracle-heur";
    rec.d_io = trial.d_io;
    rec.bound = trial.certified ? trial.bound : kInf;
    rec.has_metric = true;
    rec.metric_certified = trial.certified;

    if (trial.certified && trial.d_io <= tol) {
      rec.inner_m = inner.size();
      rec.outer_k = static_cast<int>(outer.halfspaces.size());
      rec.cum_ms = ms_since(run_start);
      out.trace.push_back(rec);
      if (hook) hook(out.trace.back(), inner, outer);
      out.converged = true;
      out.final_d = trial.d_io;
      break;
    }

    // Step 3: closest near-optimal point per pool candidate (independent
    // solves; gateway instances are per-thread)
    auto t3 = Clock::now();
    const int n_trials = static_cast<int>(trial.pool.size());
    std::vector<FeasibleResult> feas(n_trials);
    std::vector<std::string> errors(n_trials);
#pragma omp parallel for schedule(static) if (n_trials > 1)
    for (int i = 0; i < n_trials; ++i) {
      try {
        SolverGateway local(gateway.settings());
        feas[i] = closest_near_optimal(local, problem, trial.pool[i]);
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
    for (const auto& e : errors)
      if (!e.empty()) throw SolverError(e);
    rec.t_step3_ms = ms_since(t3);

    // Step 4: grow the inner approximation, cut the outer one
    auto t4 = Clock::now();
    rec.trial_feasible = feas[0].delta <= options.strict_cut_threshold ? 1 : 0;
    for (int i = 0; i < n_trials; ++i) {
      const FeasibleResult& f = feas[i];
      auto addp = inner_add_point(inner, f.z_feasible,
                                  PointTag{PointTag::kOracle, iter});
      inner = std::move(addp.inner);
      if (f.delta <= options.strict_cut_threshold) continue;
      if (auto cut = separating_cut(f)) {
        auto addh = outer_add_halfspace(outer, std::move(*cut), inner);
        outer = std::move(addh.outer);
        if (addh.added) ++rec.cuts_added;
      }
      if (options.value_cut) {
        ValueCutResult vc = value_function_cut(gateway, problem, f.z_feasible, &f.x_full);
        if (vc.cut) {
          auto addh = outer_add_halfspace(outer, std::move(*vc.cut), inner);
          outer = std::move(addh.outer);
          if (addh.added) ++rec.cuts_added;
        }
      }
    }
    rec.t_step4_ms = ms_since(t4);

    rec.inner_m = inner.size();
    rec.outer_k = static_cast<int>(outer.halfspaces.size());
    rec.cum_ms = ms_since(run_start);
    out.trace.push_back(rec);
    if (hook) hook(out.trace.back(), inner, outer);
    out.final_d = trial.d_io;
  }

  out.inner = std::move(inner);
  out.outer = std::move(outer);
  return out;
}

}  // namespace nearopt
