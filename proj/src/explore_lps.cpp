#include "nearopt/explore_lps.hpp"

#include <algorithm>
#include <cmath>

namespace nearopt {

BudgetedLp budgeted_lp(const ExplorationProblem& p) {
  BudgetedLp out;
  out.model = to_solver_model(p.model);
  std::vector<std::pair<int, double>> cost;
  for (const auto& [i, c] : p.model.objective) cost.emplace_back(i, c);
  out.model.add_le(std::move(cost), p.budget);
  out.budget_row = out.model.num_rows() - 1;
  // exploration solves carry their own objectives
  std::fill(out.model.col_cost.begin(), out.model.col_cost.end(), 0.0);
  return out;
}

NearOptProjection project_to_near_optimal(const SolverGateway& gateway,
                                          const ExplorationProblem& p,
                                          const std::vector<double>& z_target,
                                          const std::vector<double>* warm) {
  const int nz = p.n_z();
  BudgetedLp lp = budgeted_lp(p);
  SolverModel& m = lp.model;
  const int t_col = m.add_col(0.0, kInf, 1.0);
  // per coordinate j, rows in fixed order:
  //   minus_j:  z_j - (Sx)_j <= t   encoded  -(Sx)_j - t <= -z_j
  //   plus_j:   (Sx)_j - z_j <= t   encoded   (Sx)_j - t <=  z_j
  const int first_dist_row = m.num_rows();
  for (int j = 0; j < nz; ++j) {
    std::vector<std::pair<int, double>> neg, pos;
    for (const auto& [i, c] : p.projection[j].coeffs) {
      neg.emplace_back(i, -c);
      pos.emplace_back(i, c);
    }
    neg.emplace_back(t_col, -1.0);
    pos.emplace_back(t_col, -1.0);
    m.add_le(std::move(neg), -z_target[j]);
    m.add_le(std::move(pos), z_target[j]);
  }

  NearOptProjection out;
  std::vector<double> warm_full;
  const std::vector<double>* warm_ptr = nullptr;
  if (warm && static_cast<int>(warm->size()) == p.model.num_vars()) {
    warm_full = *warm;
    warm_full.push_back(0.0);
    warm_ptr = &warm_full;
  }
  RawLpResult r = gateway.solve_raw_lp(m, warm_ptr);
  out.status = r.status;
  if (r.status != LpStatus::kOptimal) return out;
  out.distance = r.objective;
  out.x.assign(r.col_value.begin(), r.col_value.begin() + p.model.num_vars());
  out.z_feasible = p.project(out.x);
  out.mu.resize(nz);
  for (int j = 0; j < nz; ++j) {
    const double dual_minus = r.row_dual[first_dist_row + 2 * j];
    const double dual_plus = r.row_dual[first_dist_row + 2 * j + 1];
    // sensitivity duals; multipliers are their negations
    out.mu[j] = (-dual_minus) - (-dual_plus);
  }
  return out;
}

WeightedStepResult weighted_step(const SolverGateway& gateway,
                                 const ExplorationProblem& p,
                                 const std::vector<double>& w,
                                 bool lexicographic_refine) {
  const int nz = p.n_z();
  BudgetedLp lp = budgeted_lp(p);
  std::vector<double> cost(lp.model.num_cols(), 0.0);
  for (int j = 0; j < nz; ++j)
    for (const auto& [i, c] : p.projection[j].coeffs) cost[i] += w[j] * c;
  lp.model.col_cost = cost;

  if (!lexicographic_refine) {
    RawLpResult r = gateway.solve_raw_lp(lp.model);
    if (r.status != LpStatus::kOptimal)
      throw SolverError(std::string("weighted exploration solve: ") +
                        to_string(r.status));
    WeightedStepResult out;
    out.x = r.col_value;
    out.z = p.project(out.x);
    out.objective = r.objective;
    return out;
  }

  IncrementalLp inc(lp.model, gateway.settings());
  RawLpResult r = inc.solve();
  if (r.status != LpStatus::kOptimal)
    throw SolverError(std::string("weighted exploration solve: ") + to_string(r.status));
  const double obj = r.objective;
  inc.add_row(-kInf, obj + 1e-9 * (1.0 + std::abs(obj)), [&] {
    std::vector<std::pair<int, double>> row;
    for (int i = 0; i < lp.model.num_cols(); ++i)
      if (cost[i] != 0.0) row.emplace_back(i, cost[i]);
    return row;
  }());
  WeightedStepResult out;
  out.objective = obj;
  for (int j = 0; j < nz; ++j) {
    std::vector<double> c2(lp.model.num_cols(), 0.0);
    for (const auto& [i, c] : p.projection[j].coeffs) c2[i] = c;
    inc.set_objective(c2, /*maximize=*/true);
    r = inc.solve();
    if (r.status != LpStatus::kOptimal)
      throw SolverError("lexicographic refinement solve failed");
    const double zj = r.objective;
    inc.add_row(zj - 1e-9 * (1.0 + std::abs(zj)), kInf, p.projection[j].coeffs);
  }
  out.x = r.col_value;
  out.x.resize(p.model.num_vars());
  out.z = p.project(out.x);
  return out;
}

}  // namespace nearopt
