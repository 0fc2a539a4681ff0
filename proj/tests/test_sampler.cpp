#include <cmath>

#include "doctest.h"
#include "nearopt/oracle.hpp"
#include "nearopt/regions.hpp"
#include "nearopt/sampler.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace nearopt;

namespace {

OuterApprox tri_region(const SolverGateway& gateway) {
  ExplorationProblem p = testsup::tri_problem(gateway);
  auto [inner, outer] =
      init_regions(gateway, p, {p.project(p.x_star)}, {PointTag{}});
  return outer;
}

double l1(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (size_t j = 0; j < a.size(); ++j) s += std::abs(a[j] - b[j]);
  return s;
}

}  // namespace

TEST_CASE("chebyshev_center of the unit box") {
  SolverGateway gateway;
  ChebyshevResult c = chebyshev_center(gateway, testsup::box_outer(2));
  CHECK(c.radius == doctest::Approx(0.5));
  CHECK(c.center[0] == doctest::Approx(0.5));
  CHECK(c.center[1] == doctest::Approx(0.5));
}

TEST_CASE("chebyshev_center of the TRI band sits on the mid line") {
  SolverGateway gateway;
  OuterApprox tri = tri_region(gateway);
  ChebyshevResult c = chebyshev_center(gateway, tri);
  CHECK(c.radius == doctest::Approx(0.125));
  // the optimal centers form a segment of the line z1+z2 = 1.25; the radius
  // margin keeps the point away from the box walls
  CHECK(c.center[0] + c.center[1] == doctest::Approx(1.25));
  CHECK(c.center[0] >= 0.125 - 1e-9);
  CHECK(c.center[0] <= 0.875 + 1e-9);
  CHECK(outer_contains(tri, c.center, 1e-9));
}

TEST_CASE("chebyshev_center degenerate region") {
  SolverGateway gateway;
  OuterApprox pt = testsup::box_outer(2, 0.3, 0.3);
  ChebyshevResult c = chebyshev_center(gateway, pt);
  CHECK(c.radius == doctest::Approx(0.0));
  CHECK(c.center[0] == doctest::Approx(0.3));
  CHECK(c.center[1] == doctest::Approx(0.3));
}

TEST_CASE("hit_and_run box fixture: membership, mean, determinism") {
  SolverGateway gateway;
  InnerApprox box = testsup::box_inner_2d();
  HitAndRunOptions opt;
  SampleBatch batch = hit_and_run(gateway, box, 5000, 42, opt);
  REQUIRE(batch.points.size() == 5000);
  CHECK(batch.affine_dim == 2);

  double m0 = 0.0, m1 = 0.0;
  for (const auto& z : batch.points) {
    m0 += z[0] / batch.points.size();
    m1 += z[1] / batch.points.size();
  }
  CHECK(std::abs(m0 - 0.5) <= 0.02);
  CHECK(std::abs(m1 - 0.5) <= 0.02);

  // every sample passes the membership LP at 1e-6
  for (size_t i = 0; i < batch.points.size(); i += 97)
    CHECK(testsup::hull_distance_lp(gateway, box.points, batch.points[i]) <= 1e-6);

  SampleBatch again = hit_and_run(gateway, box, 5000, 42, opt);
  CHECK(batch.points == again.points);

  HitAndRunOptions serial = opt;
  serial.parallel = false;
  SampleBatch ref = hit_and_run(gateway, box, 5000, 42, serial);
  CHECK(batch.points == ref.points);
}

TEST_CASE("hit_and_run rejects flat hulls unless the affine span is requested") {
  SolverGateway gateway;
  InnerApprox segment = testsup::points_inner({{0, 1}, {1, 0}});
  CHECK_THROWS_WITH_AS(hit_and_run(gateway, segment, 10, 1),
                       doctest::Contains("affine"), InputError);

  HitAndRunOptions span;
  span.affine_span = true;
  span.n_chains = 2;
  SampleBatch batch = hit_and_run(gateway, segment, 400, 1, span);
  CHECK(batch.affine_dim == 1);
  double mean_sum = 0.0;
  for (const auto& z : batch.points) {
    CHECK(z[0] + z[1] == doctest::Approx(1.0).epsilon(1e-5));
    mean_sum += z[0] / batch.points.size();
  }
  CHECK(std::abs(mean_sum - 0.5) <= 0.05);

  InnerApprox lone = testsup::points_inner({{0.5, 0.5}});
  CHECK_THROWS_AS(hit_and_run(gateway, lone, 10, 1, span), InputError);
}

TEST_CASE("most_distant_design on the documented fixtures") {
  SolverGateway gateway;
  OuterApprox box = testsup::box_outer(2);

  MostDistantResult far = most_distant_design(gateway, box, {{0, 0}});
  CHECK(far.delta == doctest::Approx(2.0));
  CHECK(far.z[0] == doctest::Approx(1.0));
  CHECK(far.z[1] == doctest::Approx(1.0));

  // all four corners: the center maximizes the minimum L1 distance; verified
  // against a grid brute force
  std::vector<std::vector<double>> corners = {{0, 0}, {1, 0}, {0, 1}, {1, 1}};
  MostDistantResult mid = most_distant_design(gateway, box, corners);
  double brute = 0.0;
  std::vector<double> argmax;
  for (double a = 0.0; a <= 1.0 + 1e-12; a += 0.05) {
    for (double b = 0.0; b <= 1.0 + 1e-12; b += 0.05) {
      double dmin = kInf;
      for (const auto& c : corners) dmin = std::min(dmin, l1({a, b}, c));
      if (dmin > brute) {
        brute = dmin;
        argmax = {a, b};
      }
    }
  }
  CHECK(brute == doctest::Approx(1.0));
  CHECK(mid.delta == doctest::Approx(1.0));
  CHECK(mid.z[0] == doctest::Approx(0.5));
  CHECK(mid.z[1] == doctest::Approx(0.5));

  // dense cloud: nothing is far anymore
  std::vector<std::vector<double>> dense;
  for (double a = 0.0; a <= 1.0 + 1e-12; a += 0.125)
    for (double b = 0.0; b <= 1.0 + 1e-12; b += 0.125) dense.push_back({a, b});
  CHECK(most_distant_design(gateway, box, dense).delta <= 0.125 + 1e-6);

  CHECK_THROWS_AS(most_distant_design(gateway, box, {}), InputError);
}

TEST_CASE("diverse_set greedy farthest points") {
  SolverGateway gateway;
  OuterApprox box = testsup::box_outer(2);

  SampleBatch one = diverse_set(gateway, box, 1, {{0, 0}});
  REQUIRE(one.points.size() == 1);
  CHECK(one.points[0][0] == doctest::Approx(1.0));
  CHECK(one.points[0][1] == doctest::Approx(1.0));
  CHECK(one.deltas[0] == doctest::Approx(2.0));

  SampleBatch three = diverse_set(gateway, box, 3, {{0, 0}});
  REQUIRE(three.points.size() == 3);
  // deltas are nonincreasing along the greedy sequence, up to the backend's
  // integer feasibility tolerance on the big-M rows
  for (size_t i = 1; i < three.deltas.size(); ++i)
    CHECK(three.deltas[i] <= three.deltas[i - 1] + 5e-6);

  // pairwise separation against the brute-force 4-point packing bound on the
  // grid (seed + 3 = 4 points in the unit box)
  std::vector<std::vector<double>> all = {{0, 0}};
  all.insert(all.end(), three.points.begin(), three.points.end());
  double packing = 0.0;
  const int g = 5;
  std::vector<std::vector<double>> grid;
  for (int a = 0; a <= g; ++a)
    for (int b = 0; b <= g; ++b)
      grid.push_back({a / double(g), b / double(g)});
  const int n = static_cast<int>(grid.size());
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = j + 1; k < n; ++k)
        for (int l = k + 1; l < n; ++l) {
          double dmin = std::min({l1(grid[i], grid[j]), l1(grid[i], grid[k]),
                                  l1(grid[i], grid[l]), l1(grid[j], grid[k]),
                                  l1(grid[j], grid[l]), l1(grid[k], grid[l])});
          packing = std::max(packing, dmin);
        }
  double achieved = kInf;
  for (size_t i = 0; i < all.size(); ++i)
    for (size_t j = i + 1; j < all.size(); ++j)
      achieved = std::min(achieved, l1(all[i], all[j]));
  // greedy is not optimal packing, but stays within a factor of the bound
  CHECK(achieved >= 0.5 * packing - 1e-9);

  CHECK_THROWS_AS(diverse_set(gateway, box, 0, {{0, 0}}), InputError);
  CHECK_THROWS_AS(diverse_set(gateway, box, 1, {}), InputError);
}

TEST_CASE("diverse_set certifies designs against the model") {
  SolverGateway gateway;
  ExplorationProblem p = testsup::tri_problem(gateway);
  OuterApprox tri = tri_region(gateway);
  SampleBatch batch =
      diverse_set(gateway, tri, 3, {p.project(p.x_star)}, &p, 1e-6);
  REQUIRE(batch.points.size() == 3);
  for (const auto& z : batch.points) {
    // certified: the designs are themselves near-optimal
    FeasibleResult f = closest_near_optimal(gateway, p, z);
    CHECK(f.delta <= 1e-6);
  }
}
