#include "nearopt/mga.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

namespace nearopt {

namespace {

double inf_norm(const std::vector<double>& v) {
  double n = 0.0;
  for (double x : v) n = std::max(n, std::abs(x));
  return n;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

using Clock = std::chrono::steady_clock;
double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

// HSJ counts an entry as used when it clears solver noise; the threshold is
// relative to the variable's attainable maximum.
bool hsj_nonzero(double z, double z_max) {
  const double threshold = z_max > 0 ? 1e-6 * z_max : 1e-12;
  return std::abs(z) > threshold;
}

constexpr double kAttainTol = 1e-7;

}  // namespace

const char* to_string(MgaMethod m) {
  switch (m) {
    case MgaMethod::kHsj: return "hsj";
    case MgaMethod::kHsjRel: return "hsj-rel";
    case MgaMethod::kRandom: return "random";
    case MgaMethod::kVmm: return "vmm";
    case MgaMethod::kErg: return "erg";
    case MgaMethod::kSpores: return "spores";
  }
  return "?";
}

std::optional<MgaMethod> mga_method_from_string(const std::string& s) {
  for (MgaMethod m : {MgaMethod::kHsj, MgaMethod::kHsjRel, MgaMethod::kRandom,
                      MgaMethod::kVmm, MgaMethod::kErg, MgaMethod::kSpores})
    if (s == to_string(m)) return m;
  return std::nullopt;
}

MgaState make_mga_state(MgaMethod method, const ExplorationProblem& problem,
                        const std::vector<double>& z0, uint64_t seed,
                        const MgaParams& params) {
  MgaState s;
  s.method = method;
  s.n_z = problem.n_z();
  s.params = params;
  s.history.emplace_back(std::vector<double>{}, z0);
  s.z_max = problem.z_upper;
  s.z_lower = problem.z_lower;
  s.w_accum.assign(s.n_z, 0.0);
  for (int j = 0; j < s.n_z; ++j) {
    s.vmm_queue.emplace_back(j, +1);
    s.vmm_queue.emplace_back(j, -1);
  }
  s.vmm_lb_attained.assign(s.n_z, 0);
  s.vmm_ub_attained.assign(s.n_z, 0);
  s.rng = Rng(substream_seed(seed, 0x6d6761ULL));
  return s;
}

namespace {

// Folds unconsumed history entries into the accumulator, so that after the
// call w_accum equals the next HSJ / HSJ-rel weight.
void fold_history(MgaState& state, bool indicator) {
  for (; state.accum_upto < state.history.size(); ++state.accum_upto) {
    const auto& z = state.history[state.accum_upto].second;
    for (int j = 0; j < state.n_z; ++j) {
      if (indicator)
        state.w_accum[j] += hsj_nonzero(z[j], state.z_max[j]) ? 1.0 : 0.0;
      else
        state.w_accum[j] += state.z_max[j] > 0 ? z[j] / state.z_max[j] : 0.0;
    }
  }
}

}  // namespace

void mga_record(MgaState& state, const std::vector<double>& w,
                const std::vector<double>& z) {
  // unit weights are explicit min/max solves of one variable; record whether
  // its bounds were attained (that direction's extreme is then known)
  int unit_var = -1;
  int nonzeros = 0;
  for (int j = 0; j < state.n_z; ++j) {
    if (w.size() == static_cast<size_t>(state.n_z) && w[j] != 0.0) {
      ++nonzeros;
      if (std::abs(std::abs(w[j]) - 1.0) <= 1e-12) unit_var = j;
    }
  }
  if (nonzeros == 1 && unit_var >= 0) {
    const double lo = state.z_lower[unit_var], hi = state.z_max[unit_var];
    const double tol = kAttainTol * (1.0 + std::max(std::abs(lo), std::abs(hi)));
    if (z[unit_var] <= lo + tol) state.vmm_lb_attained[unit_var] = 1;
    if (z[unit_var] >= hi - tol) state.vmm_ub_attained[unit_var] = 1;
  }
  state.history.emplace_back(w, z);
}

std::vector<double> next_weight_hsj(MgaState& state) {
  fold_history(state, /*indicator=*/true);
  return state.w_accum;
}

std::vector<double> next_weight_hsjrel(MgaState& state) {
  fold_history(state, /*indicator=*/false);
  return state.w_accum;
}

std::vector<double> next_weight_random(MgaState& state) {
  std::vector<double> w(state.n_z);
  for (int j = 0; j < state.n_z; ++j) w[j] = state.rng.uniform(-1.0, 1.0);
  return w;
}

std::vector<double> next_weight_vmm(MgaState& state) {
  while (!state.vmm_queue.empty()) {
    auto [var, sign] = state.vmm_queue.front();
    state.vmm_queue.pop_front();
    if (sign > 0 && state.vmm_lb_attained[var]) continue;
    if (sign < 0 && state.vmm_ub_attained[var]) continue;
    std::vector<double> w(state.n_z, 0.0);
    w[var] = sign;
    return w;
  }
  return next_weight_random(state);
}

std::vector<double> next_weight_erg(MgaState& state) {
  const int k = 1 + static_cast<int>(state.rng.below(state.n_z));
  std::vector<int> idx(state.n_z);
  for (int j = 0; j < state.n_z; ++j) idx[j] = j;
  std::vector<double> w(state.n_z, 0.0);
  for (int pick = 0; pick < k; ++pick) {
    const int r = pick + static_cast<int>(state.rng.below(state.n_z - pick));
    std::swap(idx[pick], idx[r]);
    w[idx[pick]] = state.rng.uniform01() < 0.5 ? -1.0 : 1.0;
  }
  return w;
}

std::vector<double> next_weight_spores(MgaState& state) {
  std::vector<double> base = next_weight_hsjrel(state);
  std::vector<double> w(state.n_z);
  for (int j = 0; j < state.n_z; ++j) w[j] = state.params.alpha * base[j];
  w[state.spores_next_boost] += state.params.beta;
  state.spores_next_boost = (state.spores_next_boost + 1) % state.n_z;
  return w;
}

std::vector<double> next_weight(MgaState& state) {
  switch (state.method) {
    case MgaMethod::kHsj: return next_weight_hsj(state);
    case MgaMethod::kHsjRel: return next_weight_hsjrel(state);
    case MgaMethod::kRandom: return next_weight_random(state);
    case MgaMethod::kVmm: return next_weight_vmm(state);
    case MgaMethod::kErg: return next_weight_erg(state);
    case MgaMethod::kSpores: return next_weight_spores(state);
  }
  throw InputError("unknown MGA method");
}

WeightedStepResult mga_step(const SolverGateway& gateway,
                            const ExplorationProblem& problem,
                            const std::vector<double>& w, bool vertex_refine) {
  return weighted_step(gateway, problem, w, vertex_refine);
}

ExplorationResult run_mga(const SolverGateway& gateway,
                          const ExplorationProblem& problem, MgaMethod method,
                          int iterations, uint64_t seed, const MgaRunOptions& options,
                          const IterationHook& hook) {
  if (iterations < 1) throw InputError("run_mga: iterations must be >= 1");

  std::vector<double> x_star = problem.x_star;
  if (static_cast<int>(x_star.size()) != problem.model.num_vars())
    x_star = optimal_value(gateway, problem.model).second;
  const std::vector<double> z0 = problem.project(x_star);

  auto [inner, outer] = init_regions(gateway, problem, {z0},
                                     {PointTag{PointTag::kOptimum, -1}}, options.init);
  MgaState state = make_mga_state(method, problem, z0, seed, options.params);

  ExplorationResult out;
  const auto run_start = Clock::now();
  double bound_cap = kInf;
  for (int iter = 1; iter <= iterations; ++iter) {
    IterationRecord rec;
    rec.iteration = iter;
    rec.method = to_string(method);

    auto t3 = Clock::now();
    const std::vector<double> w = next_weight(state);
    const bool degenerate = inf_norm(w) < 1e-12;
    if (degenerate) ++out.degenerate_weights;
    WeightedStepResult step = mga_step(gateway, problem, w, options.params.vertex_refine);
    mga_record(state, w, step.z);
    rec.t_step3_ms = ms_since(t3);

    auto t4 = Clock::now();
    auto addp = inner_add_point(inner, step.z, PointTag{PointTag::kMga, iter});
    inner = std::move(addp.inner);
    if (!degenerate) {
      // w'z >= w'z_k holds across the near-optimal space (supporting
      // hyperplane through the optimum of the weighted solve)
      Halfspace h;
      h.normal.resize(w.size());
      for (size_t j = 0; j < w.size(); ++j) h.normal[j] = -w[j];
      h.offset = -dot(w, step.z);
      h.provenance = CutProvenance::kMgaSupport;
      auto addh = outer_add_halfspace(outer, std::move(h), inner);
      outer = std::move(addh.outer);
      if (addh.added) rec.cuts_added = 1;
    }
    rec.t_step4_ms = ms_since(t4);

    if (options.metric_every > 0 && (iter % options.metric_every) == 0) {
      auto t2 = Clock::now();
      MaxminOptions mm = options.metric_milp;
      mm.t_upper_hint = std::min(mm.t_upper_hint, bound_cap);
      TrialResult metric = furthest_point(gateway, outer, inner, mm);
      if (std::isfinite(metric.bound))
        bound_cap = std::min(bound_cap, metric.bound * (1.0 + 1e-9) + 1e-9);
      rec.t_step2_ms = ms_since(t2);
      rec.d_io = metric.d_io;
      rec.bound = metric.bound;
      rec.has_metric = true;
      out.final_d = metric.d_io;
    }

    rec.inner_m = inner.size();
    rec.outer_k = static_cast<int>(outer.halfspaces.size());
    rec.cum_ms = ms_since(run_start);
    out.trace.push_back(rec);
    if (hook) hook(out.trace.back(), inner, outer);
  }

  // no convergence certificate is claimed for the literature baselines
  out.converged = false;
  out.inner = std::move(inner);
  out.outer = std::move(outer);
  return out;
}

}  // namespace nearopt
