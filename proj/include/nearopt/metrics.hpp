#pragma once
#include <functional>
#include <vector>

#include "nearopt/oracle.hpp"
#include "nearopt/regions.hpp"
#include "nearopt/solver.hpp"

namespace nearopt {

struct VolumeEstimate {
  enum Method { kExact2d, kExact3d, kMonteCarlo };
  double value = 0.0;
  Method method = kMonteCarlo;
  double ci_halfwidth = 0.0;  // 95% CI, 0 for exact
  long samples = 0;
  long hits = 0;
};

// The convergence metric applied to any method's regions: thin wrapper over
// the Step-2 MILP.
std::pair<double, std::vector<double>> maxmin_distance(
    const SolverGateway& gateway, const OuterApprox& outer, const InnerApprox& inner,
    const MaxminOptions& options = {});

// Exact volume, dimension 2 or 3 only (vertex enumeration stays tractable
// there; beyond that use volume_mc).
VolumeEstimate volume_exact(const std::vector<std::vector<double>>& points);
VolumeEstimate volume_exact(const OuterApprox& outer);

// Rejection sampling region: box plus a factory producing per-thread
// membership tests (inner membership is an LP and needs its own instance).
struct McRegion {
  std::vector<double> lo, hi;
  std::function<std::function<bool(const std::vector<double>&)>()> make_oracle;
  double box_volume() const;
};
McRegion mc_region(const OuterApprox& outer);
McRegion mc_region(const SolverGateway& gateway, const InnerApprox& inner,
                   double tol = 1e-6);

// OpenMP kernel with a serial reference; identical hit counts by
// construction (sample i draws from substream_seed(seed, i)).
long mc_hit_count(const McRegion& region, long n_samples, uint64_t seed,
                  bool parallel);
VolumeEstimate volume_mc(const McRegion& region, long n_samples, uint64_t seed,
                         bool parallel = true);

struct RatioOptions {
  long mc_samples = 20000;
  uint64_t seed = 1;
  bool parallel = true;
};

// vol(inner)/vol(outer); exact when n_z <= 3, otherwise Monte Carlo on the
// matched sample stream (same indices hit both regions).
double volume_ratio(const SolverGateway& gateway, const InnerApprox& inner,
                    const OuterApprox& outer, const RatioOptions& options = {});

// Coverage gap of a method against a converged reference outer region.
double distance_to_reference(const SolverGateway& gateway,
                             const InnerApprox& inner_of_method,
                             const OuterApprox& reference_outer,
                             const MaxminOptions& options = {});

}  // namespace nearopt
