#pragma once
// Shared model fixtures for the test suites.
#include <string>
#include <vector>

#include "nearopt/model.hpp"
#include "nearopt/oracle.hpp"
#include "nearopt/regions.hpp"
#include "nearopt/solver.hpp"

namespace testsup {

// min x1+x2 s.t. x1+x2 >= 1, x in [0,1]^2; explored {x1,x2}, eps = 0.5.
// Z_eps = { 1 <= z1+z2 <= 1.5 } in the unit box, v* = 1, budget 1.5.
inline nearopt::LinearProgram tri_model() {
  nearopt::LinearProgram m;
  m.name = "TRI";
  m.variables = {{"x1", 0.0, 1.0}, {"x2", 0.0, 1.0}};
  m.objective = {{0, 1.0}, {1, 1.0}};
  nearopt::SparseRow cover;
  cover.name = "cover";
  cover.coeffs = {{0, -1.0}, {1, -1.0}};
  cover.rhs = -1.0;
  m.inequalities.push_back(cover);
  m.validate_and_normalize();
  return m;
}

inline nearopt::ExplorationProblem tri_problem(const nearopt::SolverGateway& gateway,
                                               double epsilon = 0.5,
                                               double tolerance = 0.01) {
  nearopt::LinearProgram m = tri_model();
  nearopt::ExplorationSpec spec;
  spec.explore = {"x1", "x2"};
  spec.epsilon = epsilon;
  spec.tolerance = tolerance;
  auto [v, x] = nearopt::optimal_value(gateway, m);
  auto p = nearopt::build_exploration(m, spec, v);
  p.x_star = x;
  return p;
}

inline nearopt::ExplorationProblem toy_problem(const nearopt::SolverGateway& gateway,
                                               uint64_t seed, int n_tech,
                                               int n_periods, double epsilon = 0.15) {
  nearopt::LinearProgram m = nearopt::generate_toy_model(seed, n_tech, n_periods);
  nearopt::ExplorationSpec spec;
  for (int t = 0; t < n_tech; ++t) spec.explore.push_back("cap_T" + std::to_string(t));
  spec.epsilon = epsilon;
  spec.tolerance = 0.05;
  auto [v, x] = nearopt::optimal_value(gateway, m);
  auto p = nearopt::build_exploration(m, spec, v);
  p.x_star = x;
  return p;
}

inline nearopt::OuterApprox box_outer(int nz, double lo = 0.0, double hi = 1.0) {
  nearopt::OuterApprox outer;
  for (int j = 0; j < nz; ++j) {
    outer.z_names.push_back("z" + std::to_string(j));
    outer.z_lower.push_back(lo);
    outer.z_upper.push_back(hi);
  }
  return outer;
}

inline nearopt::InnerApprox points_inner(std::vector<std::vector<double>> pts,
                                         int nz = -1) {
  nearopt::InnerApprox inner;
  if (nz < 0) nz = pts.empty() ? 0 : static_cast<int>(pts[0].size());
  for (int j = 0; j < nz; ++j) inner.z_names.push_back("z" + std::to_string(j));
  for (auto& p : pts) {
    inner.points.push_back(std::move(p));
    inner.tags.push_back({nearopt::PointTag::kKnown, -1});
    inner.redundant.push_back(0);
  }
  return inner;
}

// Corners of the unit box as an inner hull (the box fixture of the sampling
// and metric suites).
inline nearopt::InnerApprox box_inner_2d() {
  return points_inner({{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}, {1.0, 1.0}});
}

}  // namespace testsup
