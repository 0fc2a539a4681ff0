#pragma once
#include <deque>
#include <optional>
#include <string>
#include <vector>

#include "nearopt/model.hpp"
#include "nearopt/oracle.hpp"
#include "nearopt/regions.hpp"
#include "nearopt/rng.hpp"
#include "nearopt/solver.hpp"

namespace nearopt {

enum class MgaMethod { kHsj, kHsjRel, kRandom, kVmm, kErg, kSpores };

const char* to_string(MgaMethod m);
std::optional<MgaMethod> mga_method_from_string(const std::string& s);

struct MgaParams {
  double alpha = 0.1;  // SPORES base scaling
  double beta = 10.0;  // SPORES boost
  bool vertex_refine = true;
};

// State threaded through the weight recurrences. `history` holds (w_k, z_k)
// with an initial (empty-w, z_0) entry for the cost-optimal projection.
struct MgaState {
  MgaMethod method = MgaMethod::kRandom;
  int n_z = 0;
  MgaParams params;
  std::vector<std::pair<std::vector<double>, std::vector<double>>> history;
  std::vector<double> z_max;    // derived upper bounds (HSJ-rel denominator)
  std::vector<double> z_lower;  // for the VMM attainment checks
  // running sum of the per-solution increments (indicator terms for HSJ,
  // z/z_max terms for HSJ-rel and the SPORES base); history entries are
  // folded in lazily so repeated next_weight calls stay idempotent
  std::vector<double> w_accum;
  size_t accum_upto = 0;  // history entries already folded into w_accum
  std::deque<std::pair<int, int>> vmm_queue;  // (variable, +1 minimize / -1 maximize)
  // A direction is skipped once an explicit min/max solve of that variable
  // showed the bound to be attained.
  std::vector<uint8_t> vmm_lb_attained, vmm_ub_attained;
  int spores_next_boost = 0;  // round-robin index
  Rng rng{0};

  const std::vector<double>& last_z() const { return history.back().second; }
};

MgaState make_mga_state(MgaMethod method, const ExplorationProblem& problem,
                        const std::vector<double>& z0, uint64_t seed,
                        const MgaParams& params = {});

// Appends (w, z) and updates the per-method accumulators (HSJ counters,
// HSJ-rel sums, VMM bound-attainment records for unit weights).
void mga_record(MgaState& state, const std::vector<double>& w,
                const std::vector<double>& z);

std::vector<double> next_weight_hsj(MgaState& state);
std::vector<double> next_weight_hsjrel(MgaState& state);
std::vector<double> next_weight_random(MgaState& state);
std::vector<double> next_weight_vmm(MgaState& state);
std::vector<double> next_weight_erg(MgaState& state);
std::vector<double> next_weight_spores(MgaState& state);
std::vector<double> next_weight(MgaState& state);

// Solves the standard weighted exploration problem over the budgeted model
// and returns the projected optimum.
WeightedStepResult mga_step(const SolverGateway& gateway,
                            const ExplorationProblem& problem,
                            const std::vector<double>& w,
                            bool vertex_refine = true);

struct MgaRunOptions {
  MgaParams params;
  InitRegionOptions init;
  // 0: no per-iteration distance metric; n: evaluate every n iterations
  int metric_every = 0;
  MaxminOptions metric_milp;
};

ExplorationResult run_mga(const SolverGateway& gateway,
                          const ExplorationProblem& problem, MgaMethod method,
                          int iterations, uint64_t seed,
                          const MgaRunOptions& options = {},
                          const IterationHook& hook = {});

}  // namespace nearopt
