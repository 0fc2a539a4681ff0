#pragma once
#include <optional>
#include <vector>

#include "nearopt/model.hpp"
#include "nearopt/solver.hpp"

namespace nearopt {

// System model rows plus the near-optimality budget row c'x <= budget.
// Row order: inequalities, equalities, budget.
struct BudgetedLp {
  SolverModel model;
  int budget_row = -1;
};
BudgetedLp budgeted_lp(const ExplorationProblem& p);

// Infinity-norm projection onto the near-optimal set (the closest-feasible
// solve): min t s.t. |z_target - S x|_j <= t componentwise over the budgeted
// model. mu combines the duals of the distance rows into the separating
// functional of the target constraint (mu' z_target - mu' z_feasible =
// distance, and mu' z <= mu' z_feasible for every near-optimal z).
struct NearOptProjection {
  LpStatus status = LpStatus::kNumericalFailure;
  double distance = 0.0;
  std::vector<double> x;
  std::vector<double> z_feasible;
  std::vector<double> mu;
};
NearOptProjection project_to_near_optimal(const SolverGateway& gateway,
                                          const ExplorationProblem& p,
                                          const std::vector<double>& z_target,
                                          const std::vector<double>* warm = nullptr);

// min w' z over the budgeted model (the shared MGA subproblem). With
// `lexicographic_refine`, ties on the optimal face are broken by maximizing
// each coordinate in index order, which pins the result to a reproducible
// vertex independent of the solver's pivoting.
struct WeightedStepResult {
  std::vector<double> z;
  std::vector<double> x;
  double objective = 0.0;
};
WeightedStepResult weighted_step(const SolverGateway& gateway,
                                 const ExplorationProblem& p,
                                 const std::vector<double>& w,
                                 bool lexicographic_refine);

}  // namespace nearopt
