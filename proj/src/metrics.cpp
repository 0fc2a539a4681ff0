#include "nearopt/metrics.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <memory>

#include "nearopt/geometry.hpp"
#include "nearopt/rng.hpp"

namespace nearopt {

std::pair<double, std::vector<double>> maxmin_distance(
    const SolverGateway& gateway, const OuterApprox& outer, const InnerApprox& inner,
    const MaxminOptions& options) {
  TrialResult t = furthest_point(gateway, outer, inner, options);
  return {t.d_io, t.z_trial};
}

VolumeEstimate volume_exact(const std::vector<std::vector<double>>& points) {
  if (points.empty()) throw InputError("volume_exact: empty point set");
  const int nz = static_cast<int>(points[0].size());
  VolumeEstimate out;
  if (nz == 2) {
    out.method = VolumeEstimate::kExact2d;
    out.value = geom::polygon_area(geom::convex_hull_2d(points));
  } else if (nz == 3) {
    out.method = VolumeEstimate::kExact3d;
    out.value = geom::hull_volume_3d(points);
  } else {
    throw InputError("volume_exact supports n_z in {2,3}");
  }
  return out;
}

VolumeEstimate volume_exact(const OuterApprox& outer) {
  VolumeEstimate out;
  geom::HalfspaceSet hs = geom::to_halfspace_set(outer);  // throws if unbounded
  if (outer.n_z() == 2) {
    out.method = VolumeEstimate::kExact2d;
    out.value = geom::volume_2d(hs);
  } else if (outer.n_z() == 3) {
    out.method = VolumeEstimate::kExact3d;
    out.value = geom::volume_3d(hs);
  } else {
    throw InputError("volume_exact supports n_z in {2,3}");
  }
  return out;
}

double McRegion::box_volume() const {
  double v = 1.0;
  for (size_t j = 0; j < lo.size(); ++j) v *= hi[j] - lo[j];
  return v;
}

McRegion mc_region(const OuterApprox& outer) {
  McRegion r;
  r.lo = outer.z_lower;
  r.hi = outer.z_upper;
  for (double b : r.lo)
    if (!std::isfinite(b)) throw InputError("mc_region: unbounded box");
  for (double b : r.hi)
    if (!std::isfinite(b)) throw InputError("mc_region: unbounded box");
  OuterApprox copy = outer;
  r.make_oracle = [copy]() {
    return [copy](const std::vector<double>& z) { return outer_contains(copy, z, 1e-9); };
  };
  return r;
}

McRegion mc_region(const SolverGateway& gateway, const InnerApprox& inner,
                   double tol) {
  if (inner.size() < 1) throw InputError("mc_region: empty inner approximation");
  McRegion r;
  const int nz = inner.n_z();
  r.lo.assign(nz, kInf);
  r.hi.assign(nz, -kInf);
  for (const auto& p : inner.points)
    for (int j = 0; j < nz; ++j) {
      r.lo[j] = std::min(r.lo[j], p[j]);
      r.hi[j] = std::max(r.hi[j], p[j]);
    }
  const SolverSettings settings = gateway.settings();
  const InnerApprox snapshot = inner;
  r.make_oracle = [settings, snapshot, tol]() {
    // persistent membership LP per thread; only the target rows change
    const int m = snapshot.size();
    const int nz2 = snapshot.n_z();
    SolverModel lp;
    for (int i = 0; i < m; ++i) lp.add_col(0.0, 1.0, 0.0);
    const int s_col = lp.add_col(0.0, kInf, 1.0);
    for (int j = 0; j < nz2; ++j) {
      std::vector<std::pair<int, double>> neg, pos;
      for (int i = 0; i < m; ++i) {
        const double zij = snapshot.points[i][j];
        if (zij != 0.0) {
          neg.emplace_back(i, -zij);
          pos.emplace_back(i, zij);
        }
      }
      neg.emplace_back(s_col, -1.0);
      pos.emplace_back(s_col, -1.0);
      lp.add_le(std::move(neg), 0.0);
      lp.add_le(std::move(pos), 0.0);
    }
    std::vector<std::pair<int, double>> sum;
    for (int i = 0; i < m; ++i) sum.emplace_back(i, 1.0);
    lp.add_eq(std::move(sum), 1.0);
    auto inc = std::make_shared<IncrementalLp>(lp, settings);
    return [inc, nz2, tol](const std::vector<double>& z) {
      for (int j = 0; j < nz2; ++j) {
        inc->set_row_bounds(2 * j, -kInf, -z[j]);
        inc->set_row_bounds(2 * j + 1, -kInf, z[j]);
      }
      RawLpResult res = inc->solve();
      return res.status == LpStatus::kOptimal && res.objective <= tol;
    };
  };
  return r;
}

long mc_hit_count(const McRegion& region, long n_samples, uint64_t seed,
                  bool parallel) {
  const int nz = static_cast<int>(region.lo.size());
  long hits = 0;
  if (parallel) {
#pragma omp parallel reduction(+ : hits)
    {
      auto oracle = region.make_oracle();
      std::vector<double> z(nz);
#pragma omp for schedule(static)
      for (long i = 0; i < n_samples; ++i) {
        uint64_t s = substream_seed(seed, static_cast<uint64_t>(i));
        for (int j = 0; j < nz; ++j) {
          const double u = static_cast<double>(splitmix64(s) >> 11) * 0x1.0p-53;
          z[j] = region.lo[j] + (region.hi[j] - region.lo[j]) * u;
        }
        if (oracle(z)) ++hits;
      }
    }
  } else {
    auto oracle = region.make_oracle();
    std::vector<double> z(nz);
    for (long i = 0; i < n_samples; ++i) {
      uint64_t s = substream_seed(seed, static_cast<uint64_t>(i));
      for (int j = 0; j < nz; ++j) {
        const double u = static_cast<double>(splitmix64(s) >> 11) * 0x1.0p-53;
        z[j] = region.lo[j] + (region.hi[j] - region.lo[j]) * u;
      }
      if (oracle(z)) ++hits;
    }
  }
  return hits;
}

VolumeEstimate volume_mc(const McRegion& region, long n_samples, uint64_t seed,
                         bool parallel) {
  if (n_samples < 1) throw InputError("volume_mc: n_samples must be positive");
  VolumeEstimate out;
  out.method = VolumeEstimate::kMonteCarlo;
  out.samples = n_samples;
  out.hits = mc_hit_count(region, n_samples, seed, parallel);
  const double box = region.box_volume();
  const double p = static_cast<double>(out.hits) / static_cast<double>(n_samples);
  out.value = box * p;
  if (out.hits == 0) {
    // report the rule-of-three upper bound so a zero estimate is not read as
    // an exact zero
    out.ci_halfwidth = box * 3.0 / static_cast<double>(n_samples);
  } else {
    out.ci_halfwidth =
        1.96 * box * std::sqrt(p * (1.0 - p) / static_cast<double>(n_samples));
  }
  return out;
}

double volume_ratio(const SolverGateway& gateway, const InnerApprox& inner,
                    const OuterApprox& outer, const RatioOptions& options) {
  if (inner.n_z() <= 3) {
    const double vo = volume_exact(outer).value;
    if (vo <= 0.0) throw InputError("volume_ratio: outer volume is zero");
    const double vi = volume_exact(inner.points).value;
    return vi / vo;
  }
  // matched streams: identical sample indices probe both regions
  McRegion ro = mc_region(outer);
  McRegion ri = mc_region(gateway, inner);
  ri.lo = ro.lo;  // shared sampling box
  ri.hi = ro.hi;
  const long hits_outer = mc_hit_count(ro, options.mc_samples, options.seed,
                                       options.parallel);
  if (hits_outer == 0) throw InputError("volume_ratio: outer volume is zero");
  const long hits_inner = mc_hit_count(ri, options.mc_samples, options.seed,
                                       options.parallel);
  return static_cast<double>(hits_inner) / static_cast<double>(hits_outer);
}

double distance_to_reference(const SolverGateway& gateway,
                             const InnerApprox& inner_of_method,
                             const OuterApprox& reference_outer,
                             const MaxminOptions& options) {
  return maxmin_distance(gateway, reference_outer, inner_of_method, options).first;
}

}  // namespace nearopt
