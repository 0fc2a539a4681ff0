#pragma once
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace nearopt {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Coefficients with absolute value at or below this are pruned when rows are
// assembled or normalized.
constexpr double kCoeffZeroTol = 1e-9;

// Raised for malformed input files and violated model invariants.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Variable {
  std::string name;
  double lower = 0.0;
  double upper = kInf;
};

// Sparse row over variable indices. Inequalities are stored as coeffs*x <= rhs;
// ">=" rows are sign-flipped at parse time.
struct SparseRow {
  std::string name;
  std::vector<std::pair<int, double>> coeffs;
  double rhs = 0.0;
};

// Standard-form LP: min c'x  s.t.  A x <= b,  F x = d,  lb <= x <= ub.
class LinearProgram {
 public:
  std::string name;
  std::vector<Variable> variables;
  std::vector<std::pair<int, double>> objective;  // sparse c
  std::vector<SparseRow> inequalities;            // A, b
  std::vector<SparseRow> equalities;              // F, d

  int num_vars() const { return static_cast<int>(variables.size()); }
  // -1 when absent
  int variable_index(const std::string& var_name) const;
  double objective_coeff(int var) const;

  // Checks the structural invariants (declared references, no duplicate
  // names, nonempty rows, lb <= ub) and prunes sub-threshold coefficients.
  // Throws InputError on violation. Idempotent on valid models.
  void validate_and_normalize();
};

bool models_equal(const LinearProgram& a, const LinearProgram& b);

// JSON model document <-> LinearProgram. Syntax errors are reported with the
// byte position from the JSON parser.
LinearProgram parse_model(const std::string& text);
std::string serialize_model(const LinearProgram& m);

// Deterministic greenfield capacity-expansion toy: one capacity variable per
// technology (the natural exploration targets) plus per-period dispatch,
// demand-balance equalities and capacity-limit inequalities. Identical seed
// gives a byte-identical serialization. Feasible and bounded by construction:
// demand never exceeds total available capacity and all costs are positive.
LinearProgram generate_toy_model(uint64_t seed, int n_tech, int n_periods);

// One row of the projection S (sparse over x indices).
struct ProjectionRow {
  std::string label;
  std::vector<std::pair<int, double>> coeffs;
};

// One triplet of an explicit projection, by variable name (pre-resolution).
struct ProjectionEntry {
  int row = 0;
  std::string var;
  double coeff = 0.0;
};

// What to explore and how tightly. `explore` (variable names, unit rows) and
// `projection` (explicit sparse S) are mutually exclusive.
struct ExplorationSpec {
  std::vector<std::string> explore;
  std::vector<ProjectionEntry> projection;
  double epsilon = 0.0;
  std::optional<double> epsilon_abs;
  double tolerance = 1e-2;
};

ExplorationSpec parse_spec(const std::string& text);
std::string serialize_spec(const ExplorationSpec& s);

// LP + exploration spec + solved optimum, ready for region construction.
struct ExplorationProblem {
  LinearProgram model;
  ExplorationSpec spec;
  std::vector<ProjectionRow> projection;  // resolved S, n_z rows over indices
  std::vector<std::string> z_names;
  double v_star = 0.0;
  double budget = 0.0;
  std::vector<double> z_lower, z_upper;
  std::vector<double> x_star;  // optimum witness (may be empty)

  int n_z() const { return static_cast<int>(projection.size()); }
  // S x restricted to the exploratory coordinates
  std::vector<double> project(const std::vector<double>& x) const;
};

// Resolves the spec's projection against the model (unit rows for `explore`).
std::vector<ProjectionRow> resolve_projection(const LinearProgram& m,
                                              const ExplorationSpec& s);

// Interval propagation of the x bounds through S. Entries may be infinite;
// the caller decides whether that is acceptable (it is an error for region
// initialization unless the cost cut bounds the box).
std::pair<std::vector<double>, std::vector<double>> derive_z_bounds(
    const LinearProgram& m, const std::vector<ProjectionRow>& projection);

// Budget rule: v*(1+eps) for positive optima; a nonpositive optimum requires
// the explicit absolute slack since the relative form would flip meaning.
double near_optimal_budget(double v_star, const ExplorationSpec& s);

ExplorationProblem build_exploration(const LinearProgram& m,
                                     const ExplorationSpec& s, double v_star);

}  // namespace nearopt
