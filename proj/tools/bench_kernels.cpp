// Serial vs OpenMP timings for the sampling kernels (Monte Carlo volume and
// hit-and-run chains). The parallel paths are bit-identical to the serial
// references; this target only reports the speedup.
#include <omp.h>

#include <cstdio>
#include <string>

#include "nearopt/metrics.hpp"
#include "nearopt/model.hpp"
#include "nearopt/regions.hpp"
#include "nearopt/sampler.hpp"
#include "nearopt/solver.hpp"

using namespace nearopt;

namespace {

OuterApprox make_box(int nz) {
  OuterApprox outer;
  for (int j = 0; j < nz; ++j) {
    outer.z_names.push_back("z" + std::to_string(j));
    outer.z_lower.push_back(0.0);
    outer.z_upper.push_back(1.0);
  }
  Halfspace h;
  h.normal.assign(nz, 1.0 / nz);
  h.offset = 0.6;
  h.provenance = CutProvenance::kCostCut;
  outer.halfspaces.push_back(normalized(h));
  return outer;
}

InnerApprox make_cross_polytope(int nz) {
  // hull of the box center +- 0.4 e_j
  InnerApprox inner;
  for (int j = 0; j < nz; ++j) inner.z_names.push_back("z" + std::to_string(j));
  for (int j = 0; j < nz; ++j) {
    std::vector<double> p(nz, 0.5), q(nz, 0.5);
    p[j] += 0.4;
    q[j] -= 0.4;
    inner.points.push_back(p);
    inner.points.push_back(q);
    inner.tags.push_back({PointTag::kKnown, -1});
    inner.tags.push_back({PointTag::kKnown, -1});
    inner.redundant.push_back(0);
    inner.redundant.push_back(0);
  }
  return inner;
}

template <typename F>
double timed(F&& f) {
  const double t0 = omp_get_wtime();
  f();
  return omp_get_wtime() - t0;
}

}  // namespace

int main(int argc, char** argv) {
  long mc_samples = argc > 1 ? std::stol(argv[1]) : 400000;
  int hr_samples = argc > 2 ? std::stoi(argv[2]) : 2000;
  const int nz = 4;

  SolverGateway gateway;
  OuterApprox outer = make_box(nz);
  InnerApprox inner = make_cross_polytope(nz);

  std::printf("threads available: %d\n\n", omp_get_max_threads());
  std::printf("%-34s %10s %10s %8s\n", "kernel", "serial[s]", "omp[s]", "speedup");

  long hits_serial = 0, hits_par = 0;
  McRegion region = mc_region(outer);
  const double ts_mc = timed([&] { hits_serial = mc_hit_count(region, mc_samples, 7, false); });
  const double tp_mc = timed([&] { hits_par = mc_hit_count(region, mc_samples, 7, true); });
  std::printf("%-34s %10.3f %10.3f %7.2fx %s\n", "mc volume (direct membership)",
              ts_mc, tp_mc, ts_mc / tp_mc,
              hits_serial == hits_par ? "" : "MISMATCH");

  McRegion region_lp = mc_region(gateway, inner);
  const long lp_samples = std::max(1L, mc_samples / 50);
  const double ts_lp =
      timed([&] { hits_serial = mc_hit_count(region_lp, lp_samples, 7, false); });
  const double tp_lp =
      timed([&] { hits_par = mc_hit_count(region_lp, lp_samples, 7, true); });
  std::printf("%-34s %10.3f %10.3f %7.2fx %s\n", "mc volume (membership LP)", ts_lp,
              tp_lp, ts_lp / tp_lp, hits_serial == hits_par ? "" : "MISMATCH");

  HitAndRunOptions hr;
  SampleBatch serial_batch, par_batch;
  hr.parallel = false;
  const double ts_hr =
      timed([&] { serial_batch = hit_and_run(gateway, inner, hr_samples, 7, hr); });
  hr.parallel = true;
  const double tp_hr =
      timed([&] { par_batch = hit_and_run(gateway, inner, hr_samples, 7, hr); });
  std::printf("%-34s %10.3f %10.3f %7.2fx %s\n", "hit-and-run (8 chains)", ts_hr,
              tp_hr, ts_hr / tp_hr,
              serial_batch.points == par_batch.points ? "" : "MISMATCH");
  return 0;
}
