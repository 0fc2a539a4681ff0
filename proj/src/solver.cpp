#include "nearopt/solver.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdlib>
#include <sstream>

#include "Highs.h"

namespace nearopt {

const char* to_string(LpStatus s) {
  switch (s) {
    case LpStatus::kOptimal: return "optimal";
    case LpStatus::kInfeasible: return "infeasible";
    case LpStatus::kUnbounded: return "unbounded";
    case LpStatus::kNumericalFailure: return "numerical-failure";
  }
  return "?";
}

const char* to_string(MilpStatus s) {
  switch (s) {
    case MilpStatus::kOptimal: return "optimal";
    case MilpStatus::kGapLimit: return "gap-limit";
    case MilpStatus::kTimeLimit: return "time-limit";
    case MilpStatus::kInfeasible: return "infeasible";
  }
  return "?";
}

int SolverModel::add_col(double lb, double ub, double cost, bool integer) {
  col_lower.push_back(lb);
  col_upper.push_back(ub);
  col_cost.push_back(cost);
  col_integer.push_back(integer ? 1 : 0);
  return num_cols() - 1;
}

void SolverModel::add_row(double lb, double ub,
                          std::vector<std::pair<int, double>> coeffs) {
  rows.push_back({lb, ub, std::move(coeffs)});
}

double max_violation(const SolverModel& m, const std::vector<double>& x) {
  double worst = 0.0;
  for (int j = 0; j < m.num_cols(); ++j) {
    worst = std::max(worst, m.col_lower[j] - x[j]);
    worst = std::max(worst, x[j] - m.col_upper[j]);
  }
  for (const auto& r : m.rows) {
    double v = 0.0;
    for (const auto& [i, c] : r.coeffs) v += c * x[i];
    worst = std::max(worst, r.lower - v);
    worst = std::max(worst, v - r.upper);
  }
  return worst;
}

SolverModel to_solver_model(const LinearProgram& m) {
  SolverModel s;
  for (const auto& v : m.variables) s.add_col(v.lower, v.upper, 0.0);
  for (const auto& [i, c] : m.objective) s.col_cost[i] = c;
  for (const auto& r : m.inequalities) s.add_row(-kInf, r.rhs, r.coeffs);
  for (const auto& r : m.equalities) s.add_row(r.rhs, r.rhs, r.coeffs);
  return s;
}

SolverSettings SolverSettings::from_env() {
  SolverSettings s;
  if (const char* env = std::getenv("NEAROPT_SOLVER")) s.backend = env;
  return s;
}

namespace {

constexpr double kHighsInfSub = 1e30;

double clamp_inf(double v) {
  if (v == kInf) return kHighsInfSub;
  if (v == -kInf) return -kHighsInfSub;
  return v;
}

HighsModel to_highs(const SolverModel& m) {
  HighsModel h;
  HighsLp& lp = h.lp_;
  lp.num_col_ = m.num_cols();
  lp.num_row_ = m.num_rows();
  lp.sense_ = m.maximize ? ObjSense::kMaximize : ObjSense::kMinimize;
  lp.col_cost_ = m.col_cost;
  lp.col_lower_.reserve(m.num_cols());
  lp.col_upper_.reserve(m.num_cols());
  for (int j = 0; j < m.num_cols(); ++j) {
    lp.col_lower_.push_back(clamp_inf(m.col_lower[j]));
    lp.col_upper_.push_back(clamp_inf(m.col_upper[j]));
  }
  lp.a_matrix_.format_ = MatrixFormat::kRowwise;
  lp.a_matrix_.start_.assign(1, 0);
  for (const auto& r : m.rows) {
    lp.row_lower_.push_back(clamp_inf(r.lower));
    lp.row_upper_.push_back(clamp_inf(r.upper));
    for (const auto& [i, c] : r.coeffs) {
      lp.a_matrix_.index_.push_back(i);
      lp.a_matrix_.value_.push_back(c);
    }
    lp.a_matrix_.start_.push_back(static_cast<int>(lp.a_matrix_.index_.size()));
  }
  bool any_int = false;
  for (auto f : m.col_integer) any_int |= (f != 0);
  if (any_int) {
    lp.integrality_.reserve(m.num_cols());
    for (auto f : m.col_integer)
      lp.integrality_.push_back(f ? HighsVarType::kInteger : HighsVarType::kContinuous);
  }
  return h;
}

void apply_settings(Highs& h, const SolverSettings& s) {
  h.setOptionValue("output_flag", false);
  h.setOptionValue("threads", s.threads);
  h.setOptionValue("random_seed", s.seed);
}

LpStatus map_lp_status(HighsModelStatus st) {
  switch (st) {
    case HighsModelStatus::kOptimal: return LpStatus::kOptimal;
    case HighsModelStatus::kInfeasible: return LpStatus::kInfeasible;
    case HighsModelStatus::kUnbounded: return LpStatus::kUnbounded;
    default: return LpStatus::kNumericalFailure;
  }
}

RawLpResult extract_lp_result(Highs& h) {
  RawLpResult r;
  HighsModelStatus st = h.getModelStatus();
  if (st == HighsModelStatus::kUnboundedOrInfeasible) {
    // disambiguate: rerun without presolve
    h.setOptionValue("presolve", "off");
    h.run();
    st = h.getModelStatus();
  }
  r.status = map_lp_status(st);
  if (r.status == LpStatus::kOptimal) {
    const HighsSolution& sol = h.getSolution();
    r.objective = h.getObjectiveValue();
    r.col_value = sol.col_value;
    r.row_value = sol.row_value;
    r.row_dual = sol.row_dual;
    r.col_dual = sol.col_dual;
  }
  return r;
}

// Stationarity identity c'x == sum(pi * row_value) + sum(reduced_cost * x):
// holds when the returned duals are consistent, a cheap stand-in for the
// primal/dual objective comparison.
[[maybe_unused]] bool dual_identity_ok(const SolverModel& m, const RawLpResult& r) {
  double lhs = 0.0;
  for (int j = 0; j < m.num_cols(); ++j) lhs += m.col_cost[j] * r.col_value[j];
  double rhs = 0.0;
  for (int i = 0; i < m.num_rows(); ++i) rhs += r.row_dual[i] * r.row_value[i];
  for (int j = 0; j < m.num_cols(); ++j) rhs += r.col_dual[j] * r.col_value[j];
  return std::abs(lhs - rhs) <= 1e-5 * (1.0 + std::abs(lhs));
}

}  // namespace

SolverGateway::SolverGateway(SolverSettings settings) : settings_(std::move(settings)) {
  if (settings_.backend != "highs")
    throw SolverError("solver backend '" + settings_.backend +
                      "' unavailable (supported: highs)");
}

std::string SolverGateway::settings_string() const {
  std::ostringstream os;
  os << "backend=" << settings_.backend << " version=" << HIGHS_VERSION_MAJOR << "."
     << HIGHS_VERSION_MINOR << "." << HIGHS_VERSION_PATCH
     << " threads=" << settings_.threads << " seed=" << settings_.seed
     << " lp_tolerance=" << settings_.lp_tolerance;
  return os.str();
}

RawLpResult SolverGateway::solve_raw_lp(const SolverModel& m,
                                        const std::vector<double>* warm_start) const {
  Highs h;
  apply_settings(h, settings_);
  if (h.passModel(to_highs(m)) != HighsStatus::kOk)
    throw SolverError("backend rejected LP model");
  if (warm_start && static_cast<int>(warm_start->size()) == m.num_cols()) {
    HighsSolution sol;
    sol.col_value = *warm_start;
    h.setSolution(sol);
  }
  if (h.run() == HighsStatus::kError) throw SolverError("LP solve failed");
  RawLpResult r = extract_lp_result(h);
  assert(r.status != LpStatus::kOptimal || dual_identity_ok(m, r));
  return r;
}

LpSolution SolverGateway::solve_lp(const LinearProgram& m,
                                   const std::vector<double>* warm_start) const {
  const SolverModel sm = to_solver_model(m);
  RawLpResult raw = solve_raw_lp(sm, warm_start);
  LpSolution out;
  out.status = raw.status;
  out.objective = raw.objective;
  if (raw.status != LpStatus::kOptimal) return out;
  out.primal = raw.col_value;
  const int ni = static_cast<int>(m.inequalities.size());
  out.duals_ineq.resize(ni);
  for (int i = 0; i < ni; ++i) out.duals_ineq[i] = std::max(0.0, -raw.row_dual[i]);
  out.duals_eq.assign(raw.row_dual.begin() + ni, raw.row_dual.end());
  assert(max_violation(sm, out.primal) <= 1e-6);
  return out;
}

MilpSolution SolverGateway::solve_milp(const SolverModel& m,
                                       const MilpOptions& opt) const {
  if (opt.rel_gap < 0 || opt.abs_gap < 0) throw SolverError("MIP gaps must be >= 0");
  Highs h;
  apply_settings(h, settings_);
  h.setOptionValue("mip_rel_gap", opt.rel_gap);
  h.setOptionValue("mip_abs_gap", opt.abs_gap);
  h.setOptionValue("time_limit", opt.time_limit_s);
  if (h.passModel(to_highs(m)) != HighsStatus::kOk)
    throw SolverError("backend rejected MILP model");
  if (h.run() == HighsStatus::kError) throw SolverError("MILP solve failed");

  MilpSolution out;
  const HighsModelStatus st = h.getModelStatus();
  const HighsInfo& info = h.getInfo();
  const bool have_sol = info.primal_solution_status == kSolutionStatusFeasible;
  if (st == HighsModelStatus::kInfeasible) {
    out.status = MilpStatus::kInfeasible;
    return out;
  }
  if (!have_sol) {
    // time limit (or other interrupt) with no incumbent; never report as
    // infeasible
    out.status = MilpStatus::kTimeLimit;
    out.bound = info.mip_dual_bound;
    return out;
  }
  out.objective = h.getObjectiveValue();
  out.bound = info.mip_dual_bound;
  out.incumbent = h.getSolution().col_value;

  const double abs_gap = std::abs(out.bound - out.objective);
  const double rel_gap = abs_gap / std::max(1.0, std::abs(out.objective));
  if (st == HighsModelStatus::kTimeLimit) {
    out.status = MilpStatus::kTimeLimit;
  } else if (abs_gap <= 1e-9 * std::max(1.0, std::abs(out.objective))) {
    out.status = MilpStatus::kOptimal;
  } else {
    out.status = MilpStatus::kGapLimit;
    // report which configured criterion allowed termination
    if (opt.abs_gap > 0 && abs_gap <= opt.abs_gap)
      out.gap_criterion = GapCriterion::kAbsolute;
    if (opt.rel_gap > 0 && rel_gap <= opt.rel_gap &&
        (out.gap_criterion == GapCriterion::kNone || opt.rel_gap * std::max(1.0, std::abs(out.objective)) >= opt.abs_gap))
      out.gap_criterion = GapCriterion::kRelative;
    if (out.gap_criterion == GapCriterion::kNone)
      out.gap_criterion = GapCriterion::kAbsolute;
  }

  out.pool.push_back(out.incumbent);
  if (opt.pool_size > 1) collect_pool(m, opt, out);
  for (const auto& p : out.pool) {
    if (max_violation(m, p) > 1e-6)
      throw SolverError("MILP pool entry violates constraints");
  }
  return out;
}

// Fills the pool with further feasible points whose objective stays within
// the configured gaps of the incumbent. The backend has no native pool, so
// binary no-good cuts exclude previous integer patterns one at a time. Only
// applicable to 0/1 integers; with none, the pool stays at the incumbent.
void SolverGateway::collect_pool(const SolverModel& m, const MilpOptions& opt,
                                 MilpSolution& out) const {
  std::vector<int> bins;
  for (int j = 0; j < m.num_cols(); ++j) {
    if (!m.col_integer[j]) continue;
    if (m.col_lower[j] < -1e-9 || m.col_upper[j] > 1.0 + 1e-9) return;
    bins.push_back(j);
  }
  if (bins.empty()) return;

  const double ref = out.objective;
  const double allowance = std::max(opt.abs_gap, opt.rel_gap * std::max(1.0, std::abs(ref)));
  SolverModel work = m;
  std::vector<double> last = out.incumbent;
  while (static_cast<int>(out.pool.size()) < opt.pool_size) {
    // exclude the binary pattern of `last`
    std::vector<std::pair<int, double>> coeffs;
    double rhs = 1.0;  // sum_{j in zeros} x_j + sum_{j in ones} (1 - x_j) >= 1
    for (int j : bins) {
      if (last[j] > 0.5) {
        coeffs.emplace_back(j, -1.0);
        rhs -= 1.0;
      } else {
        coeffs.emplace_back(j, 1.0);
      }
    }
    work.add_row(rhs, kInf, std::move(coeffs));

    Highs h;
    apply_settings(h, settings_);
    h.setOptionValue("mip_rel_gap", opt.rel_gap);
    h.setOptionValue("mip_abs_gap", opt.abs_gap);
    h.setOptionValue("time_limit", opt.time_limit_s);
    if (h.passModel(to_highs(work)) != HighsStatus::kOk) return;
    if (h.run() == HighsStatus::kError) return;
    const HighsInfo& info = h.getInfo();
    if (info.primal_solution_status != kSolutionStatusFeasible) return;
    const double obj = h.getObjectiveValue();
    const double degradation = m.maximize ? ref - obj : obj - ref;
    if (degradation > allowance) return;
    last = h.getSolution().col_value;
    out.pool.push_back(last);
  }
}

// ---------------------------------------------------------------------------

struct IncrementalLp::Impl {
  Highs highs;
  SolverModel model;  // mirror for violation checks / sizes
};

IncrementalLp::IncrementalLp(const SolverModel& m, const SolverSettings& settings)
    : impl_(std::make_unique<Impl>()) {
  apply_settings(impl_->highs, settings);
  impl_->model = m;
  if (impl_->highs.passModel(to_highs(m)) != HighsStatus::kOk)
    throw SolverError("backend rejected incremental LP");
}

IncrementalLp::~IncrementalLp() = default;
IncrementalLp::IncrementalLp(IncrementalLp&&) noexcept = default;
IncrementalLp& IncrementalLp::operator=(IncrementalLp&&) noexcept = default;

void IncrementalLp::set_row_bounds(int row, double lo, double hi) {
  impl_->highs.changeRowBounds(row, clamp_inf(lo), clamp_inf(hi));
  impl_->model.rows[row].lower = lo;
  impl_->model.rows[row].upper = hi;
}

void IncrementalLp::set_col_bounds(int col, double lo, double hi) {
  impl_->highs.changeColBounds(col, clamp_inf(lo), clamp_inf(hi));
  impl_->model.col_lower[col] = lo;
  impl_->model.col_upper[col] = hi;
}

void IncrementalLp::set_objective(const std::vector<double>& dense_cost,
                                  bool maximize) {
  std::vector<int> idx(dense_cost.size());
  for (size_t j = 0; j < dense_cost.size(); ++j) idx[j] = static_cast<int>(j);
  impl_->highs.changeColsCost(static_cast<int>(dense_cost.size()), idx.data(),
                              dense_cost.data());
  impl_->highs.changeObjectiveSense(maximize ? ObjSense::kMaximize
                                             : ObjSense::kMinimize);
  impl_->model.col_cost = dense_cost;
  impl_->model.maximize = maximize;
}

int IncrementalLp::add_row(double lo, double hi,
                           const std::vector<std::pair<int, double>>& coeffs) {
  std::vector<int> idx;
  std::vector<double> val;
  for (const auto& [i, c] : coeffs) {
    idx.push_back(i);
    val.push_back(c);
  }
  impl_->highs.addRow(clamp_inf(lo), clamp_inf(hi), static_cast<int>(idx.size()),
                      idx.data(), val.data());
  impl_->model.add_row(lo, hi, coeffs);
  return impl_->model.num_rows() - 1;
}

RawLpResult IncrementalLp::solve() {
  if (impl_->highs.run() == HighsStatus::kError)
    throw SolverError("incremental LP solve failed");
  return extract_lp_result(impl_->highs);
}

}  // namespace nearopt
