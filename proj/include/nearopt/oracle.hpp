#pragma once
#include <functional>
#include <optional>
#include <vector>

#include "nearopt/explore_lps.hpp"
#include "nearopt/model.hpp"
#include "nearopt/regions.hpp"
#include "nearopt/solver.hpp"

namespace nearopt {

// Step-2 outcome: the furthest outer point from the inner hull. d_io is the
// incumbent objective (exact up to the MILP gap), bound the dual bound.
struct TrialResult {
  std::vector<double> z_trial;
  double d_io = 0.0;
  MilpStatus milp_status = MilpStatus::kOptimal;
  double bound = 0.0;
  bool certified = true;  // false for heuristic (non-MILP) evaluations
  std::vector<std::vector<double>> pool;  // distinct trial candidates, incumbent first
};

// Step-3 outcome (Eq. 9 with the infinity norm expanded).
struct FeasibleResult {
  std::vector<double> z_feasible;
  double delta = 0.0;
  std::vector<double> mu;
  std::vector<double> x_full;
};

struct IterationRecord {
  int iteration = 0;
  std::string method;
  double d_io = 0.0;
  double bound = 0.0;
  bool has_metric = false;       // d_io/bound meaningful
  bool metric_certified = true;  // false when the trial came from the heuristic
  int trial_feasible = -1;       // -1 not evaluated, else 0/1
  int cuts_added = 0;
  int inner_m = 0;
  int outer_k = 0;
  double t_step2_ms = 0.0, t_step3_ms = 0.0, t_step4_ms = 0.0, cum_ms = 0.0;
};

struct MaxminOptions {
  MilpOptions milp;
  double big_m_dual = 1e3;  // escalated x10 on verification failure
  int max_big_m_retries = 5;
  // Valid upper bound on the max-min distance, when one is known. Cuts only
  // shrink the outer region and points only grow the hull, so the previous
  // iteration's dual bound qualifies; it caps t and every primal big-M.
  double t_upper_hint = kInf;
};

struct OracleOptions {
  MaxminOptions maxmin;
  bool value_cut = true;
  InitRegionOptions init;
  double strict_cut_threshold = 1e-7;  // below this the trial counts as feasible
  int pool_size = 1;
  int exact_metric_every = 1;  // >1: heuristic trials between exact MILP solves
  int heuristic_directions = 32;
  uint64_t seed = 0;
};

struct ExplorationResult {
  InnerApprox inner;
  OuterApprox outer;
  std::vector<IterationRecord> trace;
  bool converged = false;
  double final_d = kInf;
  int degenerate_weights = 0;  // MGA runs only
};

// Called after every completed iteration with the regions as of that
// iteration (used for per-iteration metrics without retaining snapshots).
using IterationHook =
    std::function<void(const IterationRecord&, const InnerApprox&, const OuterApprox&)>;

// Verified optimum of the system model.
std::pair<double, std::vector<double>> optimal_value(const SolverGateway& gateway,
                                                     const LinearProgram& model);

// Single-level MILP encoding of the bilevel max-min distance problem via the
// KKT conditions of the inner-distance LP: exactly 2 n_z binaries for the
// norm-row complementarities plus m for the lambda ones, with the
// Caratheodory and norm activity cardinality bounds.
struct MaxminMilp {
  SolverModel model;
  int z_begin = 0;
  int t_col = 0;
  int lambda_begin = 0;
  int gamma_begin = 0;
  int u_alpha_begin = 0;  // norm rows, minus side
  int u_beta_begin = 0;   // norm rows, plus side
  int u_gamma_begin = 0;  // lambda >= 0 rows
  int num_binaries = 0;
};
MaxminMilp build_maxmin_milp(const OuterApprox& outer, const InnerApprox& inner,
                             double big_m_dual = 1e3, double t_upper = kInf);

TrialResult furthest_point(const SolverGateway& gateway, const OuterApprox& outer,
                           const InnerApprox& inner, const MaxminOptions& options = {});

FeasibleResult closest_near_optimal(const SolverGateway& gateway,
                                    const ExplorationProblem& problem,
                                    const std::vector<double>& z_trial);

// Dual separating cut mu'z <= mu'z_feasible; nullopt when the dual is
// degenerate (|mu| below 1e-9).
std::optional<Halfspace> separating_cut(const FeasibleResult& result);

// Value-function cut: solves the cost-minimal completion with Sx = z_f (no
// budget row), linearizes at z_f from the fixing-row duals and returns
// v_f + lambda'(z - z_f) <= budget when it is informative.
struct ValueCutResult {
  std::optional<Halfspace> cut;
  double v_f = kInf;
  bool feasible = false;
};
ValueCutResult value_function_cut(const SolverGateway& gateway,
                                  const ExplorationProblem& problem,
                                  const std::vector<double>& z_f,
                                  const std::vector<double>* warm = nullptr);

ExplorationResult run_oracle(const SolverGateway& gateway,
                             const ExplorationProblem& problem, double tol,
                             int max_iter, const OracleOptions& options = {},
                             const IterationHook& hook = {});

}  // namespace nearopt
