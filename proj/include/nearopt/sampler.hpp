#pragma once
#include <optional>
#include <vector>

#include "nearopt/model.hpp"
#include "nearopt/regions.hpp"
#include "nearopt/solver.hpp"

namespace nearopt {

struct SampleBatch {
  enum Method { kHitAndRun, kDiverse, kVertices };
  std::vector<std::vector<double>> points;
  Method method = kHitAndRun;
  uint64_t seed = 0;
  int burn_in = 0;
  int thinning = 0;
  int affine_dim = 0;               // walk dimension (== n_z unless degenerate)
  std::vector<double> deltas;       // diverse mode: diversity objective per point
};

struct ChebyshevResult {
  std::vector<double> center;
  double radius = 0.0;  // infinity-norm inscribed ball
};

// Largest inscribed infinity-ball; start point for hit-and-run over the
// outer region.
ChebyshevResult chebyshev_center(const SolverGateway& gateway,
                                 const OuterApprox& outer);

struct HitAndRunOptions {
  int burn_in = -1;   // default 100 * n_z
  int thinning = 10;
  int n_chains = 8;   // fixed count; results do not depend on thread count
  bool parallel = true;
  bool affine_span = false;  // walk inside span(points) when the hull is flat
  double membership_tol = 1e-6;
};

// Uniform samples from the inner approximation. Chord ends are located by
// bisection against the hull-membership LP (the hull only exists in
// V-representation), 20 steps per end.
SampleBatch hit_and_run(const SolverGateway& gateway, const InnerApprox& inner,
                        int k, uint64_t seed, const HitAndRunOptions& options = {});

struct MostDistantOptions {
  MilpOptions milp{0.0, 0.0, 600.0, 1};  // exact by default at desk scale
};

// max delta s.t. delta <= |z - z_i|_1 for the whole cloud, z in outer.
// The reverse-convex L1 bound is encoded with per-(point, dimension) sign
// binaries; big-M is twice the per-dimension span of box and cloud.
struct MostDistantResult {
  std::vector<double> z;
  double delta = 0.0;
  MilpStatus status = MilpStatus::kOptimal;
};
MostDistantResult most_distant_design(const SolverGateway& gateway,
                                      const OuterApprox& outer,
                                      const std::vector<std::vector<double>>& cloud,
                                      const MostDistantOptions& options = {});

// Greedy farthest-point set. With a problem attached, every outer sample is
// converted to a certified design through the closest-feasible solve.
SampleBatch diverse_set(const SolverGateway& gateway, const OuterApprox& outer,
                        int k, std::vector<std::vector<double>> seed_cloud,
                        const ExplorationProblem* problem = nullptr,
                        double tol = 1e-6, const MostDistantOptions& options = {});

}  // namespace nearopt
