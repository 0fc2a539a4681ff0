#pragma once
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "nearopt/model.hpp"

namespace nearopt {

class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded, kNumericalFailure };
enum class MilpStatus { kOptimal, kGapLimit, kTimeLimit, kInfeasible };
enum class GapCriterion { kNone, kRelative, kAbsolute };

const char* to_string(LpStatus s);
const char* to_string(MilpStatus s);

// Generic row-form model handed to the backend:
//   optimize c'x  s.t.  row_lower <= coeffs*x <= row_upper, col bounds,
// with optional integrality per column.
struct SolverModel {
  std::vector<double> col_lower, col_upper, col_cost;
  std::vector<uint8_t> col_integer;
  bool maximize = false;
  struct Row {
    double lower, upper;
    std::vector<std::pair<int, double>> coeffs;
  };
  std::vector<Row> rows;

  int num_cols() const { return static_cast<int>(col_cost.size()); }
  int num_rows() const { return static_cast<int>(rows.size()); }
  int add_col(double lb, double ub, double cost, bool integer = false);
  void add_row(double lb, double ub, std::vector<std::pair<int, double>> coeffs);
  // a'x <= rhs
  void add_le(std::vector<std::pair<int, double>> coeffs, double rhs) {
    add_row(-kInf, rhs, std::move(coeffs));
  }
  void add_eq(std::vector<std::pair<int, double>> coeffs, double rhs) {
    add_row(rhs, rhs, std::move(coeffs));
  }
};

// Raw backend result. row_dual follows the sensitivity convention
// d(objective)/d(rhs); for a minimization "<=" row this is nonpositive.
struct RawLpResult {
  LpStatus status = LpStatus::kNumericalFailure;
  double objective = 0.0;
  std::vector<double> col_value;
  std::vector<double> row_value;
  std::vector<double> row_dual;
  std::vector<double> col_dual;  // reduced costs
};

// Model-level LP solution. Rows are split back into the LinearProgram's
// inequality/equality blocks; duals_ineq are nonnegative (multiplier
// convention: dv/db = -duals_ineq), duals_eq keep the sensitivity sign
// dv/d(rhs). All downstream cut formulas assume exactly this.
struct LpSolution {
  LpStatus status = LpStatus::kNumericalFailure;
  double objective = 0.0;
  std::vector<double> primal;
  std::vector<double> duals_ineq;
  std::vector<double> duals_eq;
};

struct MilpOptions {
  double rel_gap = 0.1;
  double abs_gap = 0.05;
  double time_limit_s = 600.0;
  int pool_size = 1;
};

struct MilpSolution {
  MilpStatus status = MilpStatus::kInfeasible;
  GapCriterion gap_criterion = GapCriterion::kNone;
  double objective = 0.0;
  double bound = 0.0;
  std::vector<double> incumbent;
  std::vector<std::vector<double>> pool;
  bool has_incumbent() const { return !incumbent.empty(); }
};

struct SolverSettings {
  std::string backend = "highs";
  int threads = 1;
  int seed = 0;
  double lp_tolerance = 1e-6;

  // Reads NEAROPT_SOLVER; anything but "highs" fails at gateway construction.
  static SolverSettings from_env();
};

// Largest constraint/bound violation of x in m.
double max_violation(const SolverModel& m, const std::vector<double>& x);

SolverModel to_solver_model(const LinearProgram& m);

// Uniform contract over the external LP/MILP solver. Instances are
// independent; a solve call is blocking and not re-entrant.
class SolverGateway {
 public:
  explicit SolverGateway(SolverSettings settings = SolverSettings::from_env());

  RawLpResult solve_raw_lp(const SolverModel& m,
                           const std::vector<double>* warm_start = nullptr) const;
  LpSolution solve_lp(const LinearProgram& m,
                      const std::vector<double>* warm_start = nullptr) const;
  MilpSolution solve_milp(const SolverModel& m, const MilpOptions& opt) const;

  const SolverSettings& settings() const { return settings_; }
  std::string settings_string() const;

 private:
  void collect_pool(const SolverModel& m, const MilpOptions& opt,
                    MilpSolution& out) const;

  SolverSettings settings_;
};

// Persistent LP kept hot across small edits (RHS, bounds, appended rows,
// objective). The backend reuses the previous basis, which makes repeated
// membership tests and lexicographic refinements cheap.
class IncrementalLp {
 public:
  IncrementalLp(const SolverModel& m, const SolverSettings& settings);
  ~IncrementalLp();
  IncrementalLp(IncrementalLp&&) noexcept;
  IncrementalLp& operator=(IncrementalLp&&) noexcept;

  void set_row_bounds(int row, double lo, double hi);
  void set_col_bounds(int col, double lo, double hi);
  void set_objective(const std::vector<double>& dense_cost, bool maximize);
  int add_row(double lo, double hi, const std::vector<std::pair<int, double>>& coeffs);
  RawLpResult solve();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace nearopt
