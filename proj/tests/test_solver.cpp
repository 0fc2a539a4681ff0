#include <cmath>
#include <cstdlib>

#include "doctest.h"
#include "nearopt/model.hpp"
#include "nearopt/solver.hpp"
#include "support/fixtures.hpp"

using namespace nearopt;

namespace {

SolverModel knapsack2() {
  // max x1 + x2, x1 + x2 <= 1, binaries: two tied optima
  SolverModel m;
  m.maximize = true;
  m.add_col(0, 1, 1.0, true);
  m.add_col(0, 1, 1.0, true);
  m.add_le({{0, 1.0}, {1, 1.0}}, 1.0);
  return m;
}

}  // namespace

TEST_CASE("solve_lp TRI optimum with duals") {
  SolverGateway gateway;
  LinearProgram m = testsup::tri_model();
  LpSolution sol = gateway.solve_lp(m);
  REQUIRE(sol.status == LpStatus::kOptimal);
  CHECK(sol.objective == doctest::Approx(1.0));
  CHECK(sol.primal[0] + sol.primal[1] == doctest::Approx(1.0));
  REQUIRE(sol.duals_ineq.size() == 1);
  // cover row is active; multiplier convention keeps it nonnegative
  CHECK(sol.duals_ineq[0] == doctest::Approx(1.0));
}

TEST_CASE("solve_lp infeasible and unbounded statuses") {
  SolverGateway gateway;
  LinearProgram inf = parse_model(R"({
    "vars": [{"name":"x1","lb":null,"ub":1}],
    "objective": {"x1":1},
    "constraints": [{"coeffs":{"x1":1},"sense":">=","rhs":2}]})");
  CHECK(gateway.solve_lp(inf).status == LpStatus::kInfeasible);

  LinearProgram unb = parse_model(R"({
    "vars": [{"name":"x1","lb":0,"ub":null}],
    "objective": {"x1":-1},
    "constraints": [{"coeffs":{"x1":1},"sense":">=","rhs":0}]})");
  CHECK(gateway.solve_lp(unb).status == LpStatus::kUnbounded);
}

TEST_CASE("equality duals follow the sensitivity convention") {
  // min 2x s.t. x == 3: dv/drhs = 2
  SolverGateway gateway;
  LinearProgram m = parse_model(R"({
    "vars": [{"name":"x","lb":null,"ub":null}],
    "objective": {"x":2},
    "constraints": [{"coeffs":{"x":1},"sense":"=","rhs":3}]})");
  LpSolution sol = gateway.solve_lp(m);
  REQUIRE(sol.status == LpStatus::kOptimal);
  CHECK(sol.objective == doctest::Approx(6.0));
  REQUIRE(sol.duals_eq.size() == 1);
  CHECK(sol.duals_eq[0] == doctest::Approx(2.0));
}

TEST_CASE("optimal solves satisfy feasibility and the dual identity") {
  SolverGateway gateway;
  for (uint64_t seed : {1, 4, 9}) {
    LinearProgram m = generate_toy_model(seed, 5, 3);
    SolverModel sm = to_solver_model(m);
    RawLpResult r = gateway.solve_raw_lp(sm);
    REQUIRE(r.status == LpStatus::kOptimal);
    CHECK(max_violation(sm, r.col_value) <= 1e-6);
    double lhs = 0.0, rhs = 0.0;
    for (int j = 0; j < sm.num_cols(); ++j) lhs += sm.col_cost[j] * r.col_value[j];
    for (int i = 0; i < sm.num_rows(); ++i) rhs += r.row_dual[i] * r.row_value[i];
    for (int j = 0; j < sm.num_cols(); ++j) rhs += r.col_dual[j] * r.col_value[j];
    CHECK(std::abs(lhs - rhs) <= 1e-6 * (1.0 + std::abs(lhs)));
  }
}

TEST_CASE("solve_milp trivial binary") {
  SolverGateway gateway;
  SolverModel m;
  m.maximize = true;
  m.add_col(0, 1, 1.0, true);
  MilpSolution sol = gateway.solve_milp(m, {0.0, 0.0, 60.0, 1});
  CHECK(sol.status == MilpStatus::kOptimal);
  CHECK(sol.objective == doctest::Approx(1.0));
  CHECK(sol.bound == doctest::Approx(1.0));
}

TEST_CASE("solve_milp knapsack pool enumerates both optima") {
  SolverGateway gateway;
  MilpSolution sol = gateway.solve_milp(knapsack2(), {0.0, 0.0, 60.0, 2});
  CHECK(sol.status == MilpStatus::kOptimal);
  CHECK(sol.objective == doctest::Approx(1.0));
  CHECK(sol.bound == doctest::Approx(sol.objective));
  REQUIRE(sol.pool.size() == 2);
  // expected optima from direct enumeration: (1,0) and (0,1)
  auto key = [](const std::vector<double>& v) {
    return std::make_pair(std::lround(v[0]), std::lround(v[1]));
  };
  auto a = key(sol.pool[0]), b = key(sol.pool[1]);
  CHECK(a != b);
  for (auto [x1, x2] : {a, b}) {
    CHECK(x1 + x2 == 1);
  }
}

TEST_CASE("pool entries are feasible and capped by the gap allowance") {
  SolverGateway gateway;
  // max 2a + b, a + b <= 1: optimum (1,0) value 2; (0,1) value 1 only enters
  // with a generous gap
  SolverModel m;
  m.maximize = true;
  m.add_col(0, 1, 2.0, true);
  m.add_col(0, 1, 1.0, true);
  m.add_le({{0, 1.0}, {1, 1.0}}, 1.0);

  MilpSolution tight = gateway.solve_milp(m, {0.0, 0.0, 60.0, 3});
  CHECK(tight.pool.size() <= 2);  // (1,0) and possibly (0,0)..(0,1) are worse
  for (const auto& p : tight.pool) {
    SolverModel check = m;
    CHECK(max_violation(check, p) <= 1e-6);
  }

  MilpSolution loose = gateway.solve_milp(m, {0.0, 1.0, 60.0, 2});
  CHECK(loose.pool.size() == 2);
}

TEST_CASE("gap-limit reports the terminating criterion") {
  SolverGateway gateway;
  SolverModel m = knapsack2();
  MilpSolution sol = gateway.solve_milp(m, {0.9, 0.0, 60.0, 1});
  // tiny model: the backend may still prove optimality; when it stops on the
  // gap the criterion must be identified
  if (sol.status == MilpStatus::kGapLimit) {
    CHECK(sol.gap_criterion != GapCriterion::kNone);
  } else {
    CHECK(sol.status == MilpStatus::kOptimal);
  }
  CHECK_THROWS_AS(gateway.solve_milp(m, {-0.1, 0.0, 60.0, 1}), SolverError);
}

TEST_CASE("time limit without incumbent is not infeasible") {
  SolverGateway gateway;
  // feasible but nontrivial; zero time budget forbids any incumbent
  SolverModel m;
  m.maximize = true;
  const int n = 40;
  std::vector<std::pair<int, double>> row;
  for (int i = 0; i < n; ++i) {
    m.add_col(0, 1, 1.0 + (i % 7) * 0.13, true);
    row.emplace_back(i, 1.0 + (i % 5) * 0.21);
  }
  m.add_le(std::move(row), n / 3.0);
  MilpSolution sol = gateway.solve_milp(m, {0.0, 0.0, 0.0, 1});
  CHECK(sol.status == MilpStatus::kTimeLimit);
  CHECK_FALSE(sol.has_incumbent());

  SolverModel infeasible;
  infeasible.add_col(0, 1, 1.0, true);
  infeasible.add_le({{0, 1.0}}, -0.5);
  CHECK(gateway.solve_milp(infeasible, {0.0, 0.0, 60.0, 1}).status ==
        MilpStatus::kInfeasible);
}

TEST_CASE("deterministic incumbents across repeated solves") {
  SolverGateway gateway;
  SolverModel m;
  m.maximize = true;
  for (int i = 0; i < 12; ++i) m.add_col(0, 1, 1.0 + 0.01 * i, true);
  std::vector<std::pair<int, double>> row;
  for (int i = 0; i < 12; ++i) row.emplace_back(i, 1.0 + (i % 3));
  m.add_le(std::move(row), 9.0);
  MilpSolution a = gateway.solve_milp(m, {0.0, 0.0, 60.0, 1});
  MilpSolution b = gateway.solve_milp(m, {0.0, 0.0, 60.0, 1});
  CHECK(a.incumbent == b.incumbent);
  CHECK(a.objective == b.objective);
}

TEST_CASE("backend selection honours the environment variable") {
  CHECK(SolverSettings::from_env().backend == "highs");
  SolverSettings bad;
  bad.backend = "gurobi";
  CHECK_THROWS_AS(SolverGateway{bad}, SolverError);
  SolverGateway ok;
  CHECK(ok.settings_string().find("backend=highs") != std::string::npos);
}

TEST_CASE("incremental LP rebinds row bounds and reuses the basis") {
  SolverGateway gateway;
  SolverModel m;
  m.add_col(0.0, 10.0, 1.0);
  m.add_row(3.0, kInf, {{0, 1.0}});  // x >= 3
  IncrementalLp inc(m, gateway.settings());
  RawLpResult r = inc.solve();
  REQUIRE(r.status == LpStatus::kOptimal);
  CHECK(r.objective == doctest::Approx(3.0));
  inc.set_row_bounds(0, 7.0, kInf);
  r = inc.solve();
  CHECK(r.objective == doctest::Approx(7.0));
  inc.add_row(-kInf, 5.0, {{0, 1.0}});
  r = inc.solve();
  CHECK(r.status == LpStatus::kInfeasible);
}
