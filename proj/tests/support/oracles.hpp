#pragma once
// Independent brute-force oracles used to freeze expected values. These stay
// deliberately separate from the library implementations they check: plain
// pairwise line intersection for vertex enumeration and a directly assembled
// distance LP for hull distances.
#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "nearopt/regions.hpp"
#include "nearopt/solver.hpp"

namespace testsup {

struct Line {
  double a, b, c;  // a z1 + b z2 <= c
};

inline std::vector<Line> outer_lines(const nearopt::OuterApprox& outer) {
  std::vector<Line> ls;
  ls.push_back({1, 0, outer.z_upper[0]});
  ls.push_back({-1, 0, -outer.z_lower[0]});
  ls.push_back({0, 1, outer.z_upper[1]});
  ls.push_back({0, -1, -outer.z_lower[1]});
  for (const auto& h : outer.halfspaces)
    ls.push_back({h.normal[0], h.normal[1], h.offset});
  return ls;
}

inline std::vector<std::vector<double>> brute_vertices_2d(const std::vector<Line>& ls,
                                                          double tol = 1e-7) {
  std::vector<std::vector<double>> verts;
  for (size_t i = 0; i < ls.size(); ++i) {
    for (size_t j = i + 1; j < ls.size(); ++j) {
      const double det = ls[i].a * ls[j].b - ls[j].a * ls[i].b;
      if (std::abs(det) < 1e-11) continue;
      const double x = (ls[i].c * ls[j].b - ls[j].c * ls[i].b) / det;
      const double y = (ls[i].a * ls[j].c - ls[j].a * ls[i].c) / det;
      bool ok = true;
      for (const auto& l : ls) ok = ok && (l.a * x + l.b * y <= l.c + tol);
      if (!ok) continue;
      bool dup = false;
      for (const auto& v : verts)
        dup = dup || (std::abs(v[0] - x) <= tol && std::abs(v[1] - y) <= tol);
      if (!dup) verts.push_back({x, y});
    }
  }
  return verts;
}

// infinity-norm distance from q to hull(points) as one LP, assembled here
// rather than through the regions module
inline double hull_distance_lp(const nearopt::SolverGateway& gateway,
                               const std::vector<std::vector<double>>& points,
                               const std::vector<double>& q) {
  using namespace nearopt;
  const int m = static_cast<int>(points.size());
  const int nz = static_cast<int>(q.size());
  SolverModel lp;
  for (int i = 0; i < m; ++i) lp.add_col(0.0, 1.0, 0.0);
  const int s = lp.add_col(0.0, kInf, 1.0);
  for (int j = 0; j < nz; ++j) {
    std::vector<std::pair<int, double>> lo{{s, -1.0}}, hi{{s, -1.0}};
    for (int i = 0; i < m; ++i) {
      lo.emplace_back(i, -points[i][j]);
      hi.emplace_back(i, points[i][j]);
    }
    lp.add_le(std::move(lo), -q[j]);
    lp.add_le(std::move(hi), q[j]);
  }
  std::vector<std::pair<int, double>> sum;
  for (int i = 0; i < m; ++i) sum.emplace_back(i, 1.0);
  lp.add_eq(std::move(sum), 1.0);
  RawLpResult r = gateway.solve_raw_lp(lp);
  if (r.status != LpStatus::kOptimal) throw std::runtime_error("oracle distance LP failed");
  return r.objective;
}

// Vertex-enumeration brute force for the 2D max-min distance: the distance
// to a convex set is convex, so the maximum over the outer polytope sits at
// one of its vertices.
inline double brute_maxmin_2d(const nearopt::SolverGateway& gateway,
                              const nearopt::OuterApprox& outer,
                              const nearopt::InnerApprox& inner) {
  double best = 0.0;
  for (const auto& v : brute_vertices_2d(outer_lines(outer)))
    best = std::max(best, hull_distance_lp(gateway, inner.points, v));
  return best;
}

// chi-square upper critical values used by the statistical checks
inline double chi2_critical(int df, double p_right) {
  // (df, right-tail p) pairs pinned from standard tables
  if (df == 15 && p_right == 0.001) return 37.697;
  if (df == 3 && p_right == 0.01) return 11.345;
  if (df == 5 && p_right == 0.01) return 15.086;
  throw std::runtime_error("chi2_critical: table entry missing");
}

}  // namespace testsup
