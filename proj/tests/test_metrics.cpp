#include <cmath>

#include "doctest.h"
#include "nearopt/geometry.hpp"
#include "nearopt/mga.hpp"
#include "nearopt/metrics.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace nearopt;

namespace {

MaxminOptions exact_milp() {
  MaxminOptions o;
  o.milp = {0.0, 0.0, 600.0, 1};
  return o;
}

OuterApprox tri_region(const SolverGateway& gateway) {
  ExplorationProblem p = testsup::tri_problem(gateway);
  auto [inner, outer] =
      init_regions(gateway, p, {p.project(p.x_star)}, {PointTag{}});
  return outer;
}

}  // namespace

TEST_CASE("maxmin_distance wraps the Step-2 MILP for any regions") {
  SolverGateway gateway;
  OuterApprox box = testsup::box_outer(2);
  InnerApprox corner = testsup::points_inner({{0, 0}});
  auto [d, argmax] = maxmin_distance(gateway, box, corner, exact_milp());
  CHECK(d == doctest::Approx(1.0).epsilon(1e-5));
  CHECK(argmax.size() == 2);

  // inner carrying all box vertices: distance collapses
  InnerApprox full = testsup::box_inner_2d();
  CHECK(maxmin_distance(gateway, box, full, exact_milp()).first <= 1e-6);
}

TEST_CASE("volume_exact on point sets") {
  CHECK(volume_exact(testsup::box_inner_2d().points).value == doctest::Approx(1.0));
  CHECK(volume_exact(std::vector<std::vector<double>>{{0, 0}, {1, 0}, {0, 1}}).value ==
        doctest::Approx(0.5));
  // interior points do not change the hull
  CHECK(volume_exact(
            std::vector<std::vector<double>>{{0, 0}, {1, 0}, {0, 1}, {0.2, 0.2}})
            .value == doctest::Approx(0.5));
  // degenerate
  CHECK(volume_exact(std::vector<std::vector<double>>{{0, 0}, {1, 1}}).value ==
        doctest::Approx(0.0));
  CHECK_THROWS_AS(
      volume_exact(std::vector<std::vector<double>>{{0.0, 0.0, 0.0, 0.0}}),
      InputError);
}

TEST_CASE("volume_exact on 3D point sets and regions") {
  // unit tetrahedron: 1/6
  CHECK(volume_exact(std::vector<std::vector<double>>{
            {0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}})
            .value == doctest::Approx(1.0 / 6.0));
  // unit cube from its corners
  std::vector<std::vector<double>> cube;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 2; ++c) cube.push_back({double(a), double(b), double(c)});
  CHECK(volume_exact(cube).value == doctest::Approx(1.0));

  // halfspace route: cube cut by a corner plane
  OuterApprox box3 = testsup::box_outer(3);
  Halfspace cut;
  cut.normal = {1, 1, 1};
  cut.offset = 2.5;
  cut.provenance = CutProvenance::kCostCut;
  box3.halfspaces.push_back(normalized(cut));
  // removes the tetra with legs 0.5 at the (1,1,1) corner: 1 - 0.5^3/6
  CHECK(volume_exact(box3).value == doctest::Approx(1.0 - 0.125 / 6.0));
}

TEST_CASE("TRI region area is exactly 0.375") {
  SolverGateway gateway;
  OuterApprox tri = tri_region(gateway);
  VolumeEstimate v = volume_exact(tri);
  CHECK(v.method == VolumeEstimate::kExact2d);
  CHECK(v.value == doctest::Approx(0.375));
  CHECK(v.ci_halfwidth == 0.0);

  // shoelace over the enumerated vertices agrees (independent route)
  auto verts = testsup::brute_vertices_2d(testsup::outer_lines(tri));
  REQUIRE(verts.size() == 4);
  CHECK(geom::polygon_area(geom::convex_hull_2d(verts)) == doctest::Approx(0.375));
}

TEST_CASE("volume_exact rejects unbounded regions and high dimensions") {
  OuterApprox unbounded = testsup::box_outer(2);
  unbounded.z_upper[0] = kInf;
  CHECK_THROWS_AS(volume_exact(unbounded), InputError);
  CHECK_THROWS_AS(volume_exact(testsup::box_outer(4)), InputError);
}

TEST_CASE("volume_mc on the box fixture and the TRI region") {
  SolverGateway gateway;
  // sampling the box itself accepts everything
  VolumeEstimate box = volume_mc(mc_region(testsup::box_outer(2)), 100000, 3);
  CHECK(box.value == doctest::Approx(1.0));
  CHECK(box.hits == box.samples);

  VolumeEstimate tri = volume_mc(mc_region(tri_region(gateway)), 100000, 3);
  const double sigma = tri.ci_halfwidth / 1.96;
  CHECK(std::abs(tri.value - 0.375) <= 4.0 * sigma);

  // single-point inner has zero volume (its sampling box collapses)
  VolumeEstimate pt =
      volume_mc(mc_region(gateway, testsup::points_inner({{0.5, 0.5}})), 10000, 3);
  CHECK(pt.value == 0.0);

  // measure-zero hull inside a full box: zero hits, flagged by the
  // rule-of-three interval
  McRegion diag = mc_region(gateway, testsup::points_inner({{0, 0}, {1, 1}}));
  VolumeEstimate seg = volume_mc(diag, 10000, 3);
  CHECK(seg.value == 0.0);
  CHECK(seg.hits == 0);
  CHECK(seg.ci_halfwidth > 0.0);
}

TEST_CASE("mc kernel: serial and parallel agree exactly") {
  SolverGateway gateway;
  McRegion region = mc_region(tri_region(gateway));
  CHECK(mc_hit_count(region, 50000, 11, false) == mc_hit_count(region, 50000, 11, true));

  // membership-LP region (per-thread incremental LPs)
  InnerApprox inner = testsup::points_inner({{0, 1}, {1, 0}, {1, 0.5}, {0.5, 1}});
  McRegion lp_region = mc_region(gateway, inner);
  CHECK(mc_hit_count(lp_region, 2000, 11, false) ==
        mc_hit_count(lp_region, 2000, 11, true));
}

TEST_CASE("volume_ratio exact and matched-stream modes") {
  SolverGateway gateway;
  // inner = outer on the unit box: ratio 1
  CHECK(volume_ratio(gateway, testsup::box_inner_2d(), testsup::box_outer(2)) ==
        doctest::Approx(1.0));
  // single-point inner: ratio 0
  CHECK(volume_ratio(gateway, testsup::points_inner({{0.5, 0.5}}),
                     testsup::box_outer(2)) == doctest::Approx(0.0));

  // matched streams in 4D: the hypercube corners span the whole box, so the
  // identical sample indices hit both regions and the ratio is exactly 1
  std::vector<std::vector<double>> corners;
  for (int mask = 0; mask < 16; ++mask) {
    std::vector<double> p(4);
    for (int j = 0; j < 4; ++j) p[j] = (mask >> j) & 1;
    corners.push_back(std::move(p));
  }
  RatioOptions opt;
  opt.mc_samples = 2000;
  CHECK(volume_ratio(gateway, testsup::points_inner(corners), testsup::box_outer(4),
                     opt) == doctest::Approx(1.0));

  OuterApprox empty = testsup::box_outer(2, 0.5, 0.5);
  CHECK_THROWS_AS(
      volume_ratio(gateway, testsup::points_inner({{0.5, 0.5}}), empty),
      InputError);
}

TEST_CASE("per-iteration volumes are monotone along a TRI ORACLE run") {
  SolverGateway gateway;
  ExplorationProblem p = testsup::tri_problem(gateway);
  OracleOptions opt;
  opt.maxmin = exact_milp();
  std::vector<double> vin, vout;
  IterationHook hook = [&](const IterationRecord&, const InnerApprox& in,
                           const OuterApprox& out) {
    vin.push_back(volume_exact(in.points).value);
    vout.push_back(volume_exact(out).value);
  };
  ExplorationResult res = run_oracle(gateway, p, 0.01, 50, opt, hook);
  REQUIRE(res.converged);
  for (size_t k = 1; k < vin.size(); ++k) {
    CHECK(vin[k] >= vin[k - 1] - 1e-9);
    CHECK(vout[k] <= vout[k - 1] + 1e-9);
  }
  CHECK(vin.back() <= vout.back() + 1e-9);
  // sandwich on the true area
  CHECK(vin.back() <= 0.375 + 1e-6);
  CHECK(vout.back() >= 0.375 - 1e-6);
}

TEST_CASE("distance_to_reference") {
  SolverGateway gateway;
  ExplorationProblem p = testsup::tri_problem(gateway);
  OracleOptions opt;
  opt.maxmin = exact_milp();
  ExplorationResult oracle = run_oracle(gateway, p, 0.01, 50, opt);
  REQUIRE(oracle.converged);

  // self-reference: within tolerance
  CHECK(distance_to_reference(gateway, oracle.inner, oracle.outer, exact_milp()) <=
        0.01);

  // a stalled HSJ inner is measurably away from the converged reference
  ExplorationResult hsj = run_mga(gateway, p, MgaMethod::kHsj, 3, 1);
  const double d = distance_to_reference(gateway, hsj.inner, oracle.outer, exact_milp());
  CHECK(d > 0.01);
  const double brute = testsup::brute_maxmin_2d(gateway, oracle.outer, hsj.inner);
  CHECK(d == doctest::Approx(brute).epsilon(1e-4));

  // inserting every reference vertex closes the gap
  InnerApprox stuffed = hsj.inner;
  for (const auto& v :
       testsup::brute_vertices_2d(testsup::outer_lines(oracle.outer))) {
    auto res = inner_add_point(stuffed, v, {PointTag::kKnown, -1});
    stuffed = std::move(res.inner);
  }
  CHECK(distance_to_reference(gateway, stuffed, oracle.outer, exact_milp()) <= 0.01);
}
