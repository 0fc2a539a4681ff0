#include <cmath>

#include "doctest.h"
#include "nearopt/regions.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace nearopt;
using testsup::brute_vertices_2d;
using testsup::outer_lines;

namespace {

bool has_vertex(const std::vector<std::vector<double>>& verts,
                std::vector<double> v, double tol = 1e-6) {
  for (const auto& u : verts) {
    double d = 0.0;
    for (size_t j = 0; j < u.size(); ++j) d = std::max(d, std::abs(u[j] - v[j]));
    if (d <= tol) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("init_regions on TRI builds the documented start") {
  SolverGateway gateway;
  ExplorationProblem p = testsup::tri_problem(gateway);
  auto [inner, outer] = init_regions(gateway, p, {p.project(p.x_star)},
                                     {PointTag{PointTag::kOptimum, -1}});
  REQUIRE(inner.size() == 1);
  CHECK(inner.points[0][0] + inner.points[0][1] == doctest::Approx(1.0));

  CHECK(outer.z_lower == std::vector<double>{0.0, 0.0});
  CHECK(outer.z_upper == std::vector<double>{1.0, 1.0});
  // cost cut z1+z2 <= 1.5 and the imported model row z1+z2 >= 1
  REQUIRE(outer.halfspaces.size() == 2);
  const auto& cost = outer.halfspaces[0];
  CHECK(cost.provenance == CutProvenance::kCostCut);
  CHECK(cost.normal == std::vector<double>{1.0, 1.0});
  CHECK(cost.offset == doctest::Approx(1.5));
  const auto& row = outer.halfspaces[1];
  CHECK(row.provenance == CutProvenance::kModelRow);
  CHECK(row.normal == std::vector<double>{-1.0, -1.0});
  CHECK(row.offset == doctest::Approx(-1.0));

  // cross-check: the region's vertex set equals Z_eps's, enumerated from the
  // raw definition
  std::vector<testsup::Line> z_eps = {{1, 0, 1},  {-1, 0, 0}, {0, 1, 1},
                                      {0, -1, 0}, {1, 1, 1.5}, {-1, -1, -1}};
  auto true_verts = brute_vertices_2d(z_eps);
  auto got_verts = brute_vertices_2d(outer_lines(outer));
  REQUIRE(true_verts.size() == 4);
  CHECK(got_verts.size() == true_verts.size());
  for (const auto& v : true_verts) {
    CHECK(has_vertex(got_verts, v));
    CHECK(outer_contains(outer, v, 1e-9));
  }
}

TEST_CASE("init_regions without the cost cut keeps only the box") {
  SolverGateway gateway;
  ExplorationProblem p = testsup::tri_problem(gateway);
  InitRegionOptions opt;
  opt.cost_cut = InitRegionOptions::kOff;
  opt.import_model_rows = false;
  auto [inner, outer] =
      init_regions(gateway, p, {p.project(p.x_star)}, {PointTag{}}, opt);
  CHECK(outer.halfspaces.empty());
  CHECK(outer.z_lower == std::vector<double>{0.0, 0.0});
  CHECK(outer.z_upper == std::vector<double>{1.0, 1.0});
}

TEST_CASE("init_regions rejects a point violating the budget") {
  SolverGateway gateway;
  ExplorationProblem p = testsup::tri_problem(gateway);
  // 1e-3 beyond the budget facet z1+z2 = 1.5
  CHECK_THROWS_AS(init_regions(gateway, p, {{0.7505, 0.7505}}, {PointTag{}}),
                  InputError);
}

TEST_CASE("inner_contains with a barycentric certificate") {
  SolverGateway gateway;
  InnerApprox tri = testsup::points_inner({{0, 0}, {1, 0}, {0, 1}});

  MembershipResult in = inner_contains(gateway, tri, {0.25, 0.25}, 1e-9);
  CHECK(in.member);
  CHECK(in.distance <= 1e-9);
  REQUIRE(in.lambda.size() == 3);
  CHECK(in.lambda[0] == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(in.lambda[1] == doctest::Approx(0.25).epsilon(1e-6));
  CHECK(in.lambda[2] == doctest::Approx(0.25).epsilon(1e-6));

  MembershipResult out = inner_contains(gateway, tri, {0.6, 0.6}, 1e-9);
  CHECK_FALSE(out.member);
  CHECK(out.distance == doctest::Approx(0.1));
  // separating evidence: separator' q > max over hull points
  double best = -1e30;
  for (const auto& pt : tri.points) {
    double v = 0.0;
    for (size_t j = 0; j < pt.size(); ++j) v += out.separator[j] * pt[j];
    best = std::max(best, v);
  }
  double at_q = out.separator[0] * 0.6 + out.separator[1] * 0.6;
  CHECK(at_q > best + 1e-9);

  InnerApprox single = testsup::points_inner({{1, 1}});
  MembershipResult id = inner_contains(gateway, single, {1, 1}, 1e-9);
  CHECK(id.member);
  REQUIRE(id.lambda.size() == 1);
  CHECK(id.lambda[0] == doctest::Approx(1.0));
}

TEST_CASE("inner_add_point dedup and redundancy flag") {
  SolverGateway gateway;
  InnerApprox inner = testsup::points_inner({{0, 1}});

  auto grown = inner_add_point(inner, {1, 0}, {PointTag::kMga, 1});
  CHECK(grown.added);
  CHECK(grown.inner.size() == 2);

  auto dup = inner_add_point(grown.inner, {0, 1}, {PointTag::kMga, 2});
  CHECK_FALSE(dup.added);
  CHECK(dup.inner.size() == 2);

  auto sq = inner_add_point(grown.inner, {1, 1}, {PointTag::kMga, 3}, &gateway);
  CHECK(sq.added);
  CHECK_FALSE(sq.redundant);

  // interior of the current hull: stored but flagged
  auto mid = inner_add_point(sq.inner, {0.5, 0.5}, {PointTag::kMga, 4}, &gateway);
  CHECK(mid.added);
  CHECK(mid.redundant);
  CHECK(mid.inner.size() == 4);

  InnerApprox pruned = inner_pruned(gateway, mid.inner);
  CHECK(pruned.size() == 3);
  CHECK_FALSE(has_vertex(pruned.points, {0.5, 0.5}));
}

TEST_CASE("outer_add_halfspace grows the vertex set as documented") {
  SolverGateway gateway;
  OuterApprox box = testsup::box_outer(2);
  InnerApprox inner = testsup::points_inner({{0, 1}});

  Halfspace budget;
  budget.normal = {1, 1};
  budget.offset = 1.5;
  budget.provenance = CutProvenance::kCostCut;
  auto res = outer_add_halfspace(box, budget, inner);
  CHECK(res.added);
  auto verts = brute_vertices_2d(outer_lines(res.outer));
  CHECK(has_vertex(verts, {1.0, 0.5}));
  CHECK(has_vertex(verts, {0.5, 1.0}));
  CHECK_FALSE(has_vertex(verts, {1.0, 1.0}));

  // dominated by the box
  Halfspace weak;
  weak.normal = {1, 0};
  weak.offset = 2.0;
  weak.provenance = CutProvenance::kDualCut;
  auto dom = outer_add_halfspace(res.outer, weak, inner);
  CHECK_FALSE(dom.added);
  CHECK(dom.outer.halfspaces.size() == res.outer.halfspaces.size());

  // parallel but weaker than an existing cut
  Halfspace parallel;
  parallel.normal = {2, 2};
  parallel.offset = 3.2;  // normalizes to z1+z2 <= 1.6
  parallel.provenance = CutProvenance::kDualCut;
  auto par = outer_add_halfspace(res.outer, parallel, inner);
  CHECK_FALSE(par.added);

  // invalid: cuts off the stored inner point
  Halfspace bad;
  bad.normal = {1, 0};
  bad.offset = -1.0;
  bad.provenance = CutProvenance::kDualCut;
  CHECK_THROWS_AS(outer_add_halfspace(res.outer, bad, inner), InputError);

  // zero normal is rejected by normalization
  Halfspace zero;
  zero.normal = {0, 0};
  zero.offset = 1.0;
  CHECK_THROWS_AS(outer_add_halfspace(res.outer, zero, inner), InputError);
}

TEST_CASE("outer_contains on the TRI region") {
  SolverGateway gateway;
  ExplorationProblem p = testsup::tri_problem(gateway);
  auto [inner, outer] =
      init_regions(gateway, p, {p.project(p.x_star)}, {PointTag{}});
  CHECK(outer_contains(outer, {0.75, 0.75}));
  CHECK_FALSE(outer_contains(outer, {0.9, 0.9}));   // above the budget cut
  CHECK_FALSE(outer_contains(outer, {0.0, 0.0}));   // below the cover row
  CHECK_FALSE(outer_contains(outer, {1.1, 0.2}));   // outside the box
}

TEST_CASE("stored halfspaces have unit infinity-norm normals") {
  SolverGateway gateway;
  OuterApprox box = testsup::box_outer(2);
  InnerApprox inner = testsup::points_inner({{0.1, 0.3}});
  Halfspace h;
  h.normal = {0.25, -0.5};
  h.offset = -0.05;
  h.provenance = CutProvenance::kDualCut;
  auto res = outer_add_halfspace(box, h, inner);
  REQUIRE(res.added);
  const auto& stored = res.outer.halfspaces.back();
  CHECK(std::max(std::abs(stored.normal[0]), std::abs(stored.normal[1])) ==
        doctest::Approx(1.0));
  CHECK(stored.normal[0] == doctest::Approx(0.5));
  CHECK(stored.normal[1] == doctest::Approx(-1.0));
  CHECK(stored.offset == doctest::Approx(-0.1));
}

TEST_CASE("sandwich invariant: inner points stay inside the outer region") {
  SolverGateway gateway;
  ExplorationProblem p = testsup::tri_problem(gateway);
  auto [inner, outer] =
      init_regions(gateway, p, {p.project(p.x_star)}, {PointTag{}});
  auto grown = inner_add_point(inner, {1.0, 0.0}, {PointTag::kMga, 1});
  auto grown2 = inner_add_point(grown.inner, {0.75, 0.75}, {PointTag::kMga, 2});
  for (const auto& pt : grown2.inner.points) CHECK(outer_contains(outer, pt, 1e-6));
}

TEST_CASE("unbounded exploratory direction without a rescuing cut") {
  SolverGateway gateway;
  LinearProgram m = parse_model(R"({
    "vars": [{"name":"x1","lb":0,"ub":null},{"name":"x2","lb":0,"ub":1}],
    "objective": {"x2":1},
    "constraints": [{"coeffs":{"x1":1,"x2":1},"sense":">=","rhs":1}]})");
  ExplorationSpec spec;
  spec.explore = {"x1"};
  spec.epsilon = 0.5;
  // v* = 0 would degenerate the relative budget; use the absolute slack
  spec.epsilon_abs = 1.0;
  auto [v, x] = optimal_value(gateway, m);
  ExplorationProblem p = build_exploration(m, spec, v);
  p.x_star = x;
  InitRegionOptions opt;
  opt.cost_cut = InitRegionOptions::kOff;
  CHECK_THROWS_AS(init_regions(gateway, p, {p.project(p.x_star)}, {PointTag{}}, opt),
                  InputError);
  // x1 carries no cost, so the cost cut cannot bound it either
  InitRegionOptions on;
  on.cost_cut = InitRegionOptions::kOn;
  CHECK_THROWS_AS(init_regions(gateway, p, {p.project(p.x_star)}, {PointTag{}}, on),
                  InputError);
}
