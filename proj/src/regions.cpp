#include "nearopt/regions.hpp"

#include <algorithm>
#include <cmath>

#include "nearopt/explore_lps.hpp"

namespace nearopt {

namespace {
constexpr double kDedupTol = 1e-8;
constexpr double kCutKeepTol = 1e-6;  // accepted cuts must keep inner points

double inf_norm(const std::vector<double>& v) {
  double n = 0.0;
  for (double x : v) n = std::max(n, std::abs(x));
  return n;
}

double inf_dist(const std::vector<double>& a, const std::vector<double>& b) {
  double n = 0.0;
  for (size_t i = 0; i < a.size(); ++i) n = std::max(n, std::abs(a[i] - b[i]));
  return n;
}
}  // namespace

const char* to_string(CutProvenance p) {
  switch (p) {
    case CutProvenance::kBound: return "bound";
    case CutProvenance::kCostCut: return "cost-cut";
    case CutProvenance::kDualCut: return "dual-cut";
    case CutProvenance::kValueCut: return "value-cut";
    case CutProvenance::kModelRow: return "model-row";
    case CutProvenance::kMgaSupport: return "mga-support";
  }
  return "?";
}

std::optional<CutProvenance> cut_provenance_from_string(const std::string& s) {
  for (CutProvenance p :
       {CutProvenance::kBound, CutProvenance::kCostCut, CutProvenance::kDualCut,
        CutProvenance::kValueCut, CutProvenance::kModelRow, CutProvenance::kMgaSupport})
    if (s == to_string(p)) return p;
  return std::nullopt;
}

double Halfspace::evaluate(const std::vector<double>& z) const {
  double v = -offset;
  for (size_t j = 0; j < normal.size(); ++j) v += normal[j] * z[j];
  return v;
}

Halfspace normalized(Halfspace h) {
  const double n = inf_norm(h.normal);
  if (n <= 0.0) throw InputError("halfspace with zero normal");
  for (double& c : h.normal) c /= n;
  h.offset /= n;
  return h;
}

std::string PointTag::label() const {
  switch (kind) {
    case kOptimum: return "optimum";
    case kKnown: return "known";
    case kMga: return "mga:" + std::to_string(iteration);
    case kOracle: return "oracle:" + std::to_string(iteration);
  }
  return "?";
}

MembershipResult inner_contains(const SolverGateway& gateway, const InnerApprox& inner,
                                const std::vector<double>& z, double tol) {
  const int m = inner.size();
  const int nz = inner.n_z();
  SolverModel lp;
  for (int i = 0; i < m; ++i) lp.add_col(0.0, 1.0, 0.0);   // lambda
  const int s_col = lp.add_col(0.0, kInf, 1.0);            // distance
  for (int j = 0; j < nz; ++j) {
    std::vector<std::pair<int, double>> neg, pos;
    for (int i = 0; i < m; ++i) {
      const double zij = inner.points[i][j];
      if (zij != 0.0) {
        neg.emplace_back(i, -zij);
        pos.emplace_back(i, zij);
      }
    }
    neg.emplace_back(s_col, -1.0);
    pos.emplace_back(s_col, -1.0);
    lp.add_le(std::move(neg), -z[j]);  // z_j - (Z'l)_j <= s
    lp.add_le(std::move(pos), z[j]);   // (Z'l)_j - z_j <= s
  }
  std::vector<std::pair<int, double>> sum;
  for (int i = 0; i < m; ++i) sum.emplace_back(i, 1.0);
  lp.add_eq(std::move(sum), 1.0);

  RawLpResult r = gateway.solve_raw_lp(lp);
  if (r.status != LpStatus::kOptimal)
    throw SolverError("hull membership LP did not solve to optimality");
  MembershipResult out;
  out.distance = std::max(0.0, r.objective);
  out.member = out.distance <= tol;
  out.lambda.assign(r.col_value.begin(), r.col_value.begin() + m);
  out.separator.resize(nz);
  for (int j = 0; j < nz; ++j)
    out.separator[j] = (-r.row_dual[2 * j]) - (-r.row_dual[2 * j + 1]);
  return out;
}

AddPointResult inner_add_point(const InnerApprox& inner, const std::vector<double>& z,
                               PointTag tag, const SolverGateway* gateway) {
  AddPointResult out{inner, false, false};
  for (const auto& p : inner.points) {
    if (inf_dist(p, z) <= kDedupTol) return out;
  }
  if (gateway && inner.size() >= 1)
    out.redundant = inner_contains(*gateway, inner, z, kDedupTol).member;
  out.inner.points.push_back(z);
  out.inner.tags.push_back(tag);
  out.inner.redundant.push_back(out.redundant ? 1 : 0);
  out.added = true;
  return out;
}

InnerApprox inner_pruned(const SolverGateway& gateway, const InnerApprox& inner) {
  InnerApprox out;
  out.z_names = inner.z_names;
  const int m = inner.size();
  std::vector<uint8_t> keep(m, 1);
  for (int i = 0; i < m; ++i) {
    InnerApprox rest;
    rest.z_names = inner.z_names;
    for (int k = 0; k < m; ++k)
      if (k != i && keep[k]) rest.points.push_back(inner.points[k]);
    if (rest.points.empty()) continue;
    if (inner_contains(gateway, rest, inner.points[i], kDedupTol).member) keep[i] = 0;
  }
  for (int i = 0; i < m; ++i) {
    if (!keep[i]) continue;
    out.points.push_back(inner.points[i]);
    out.tags.push_back(inner.tags[i]);
    out.redundant.push_back(0);
  }
  return out;
}

AddHalfspaceResult outer_add_halfspace(const OuterApprox& outer, Halfspace h,
                                       const InnerApprox& inner) {
  h = normalized(std::move(h));
  for (const auto& p : inner.points) {
    if (h.evaluate(p) > kCutKeepTol)
      throw InputError("invalid cut: halfspace excludes a stored inner point (" +
                       std::string(to_string(h.provenance)) + ")");
  }
  AddHalfspaceResult out{outer, false};

  // implied by the box alone (up to noise)?
  double box_max = 0.0;
  for (int j = 0; j < outer.n_z(); ++j)
    box_max += h.normal[j] > 0 ? h.normal[j] * outer.z_upper[j]
                               : h.normal[j] * outer.z_lower[j];
  const double dom_tol = 1e-8 * (1.0 + std::abs(h.offset));
  if (box_max <= h.offset + dom_tol) return out;

  for (auto& existing : out.outer.halfspaces) {
    if (inf_dist(existing.normal, h.normal) <= 1e-9) {
      if (h.offset >= existing.offset - dom_tol) return out;  // weaker duplicate
      existing = h;                                           // tightened
      out.added = true;
      return out;
    }
  }
  out.outer.halfspaces.push_back(std::move(h));
  out.added = true;
  return out;
}

bool outer_contains(const OuterApprox& outer, const std::vector<double>& z,
                    double tol) {
  for (int j = 0; j < outer.n_z(); ++j) {
    if (z[j] < outer.z_lower[j] - tol || z[j] > outer.z_upper[j] + tol) return false;
  }
  for (const auto& h : outer.halfspaces)
    if (h.evaluate(z) > tol) return false;
  return true;
}

namespace {

// Unit-row projection: every row has a single coefficient. Returns per-row
// (x index, coefficient) or nullopt.
std::optional<std::vector<std::pair<int, double>>> unit_rows(
    const ExplorationProblem& p) {
  std::vector<std::pair<int, double>> out;
  for (const auto& row : p.projection) {
    if (row.coeffs.size() != 1 || row.coeffs[0].second == 0.0) return std::nullopt;
    out.push_back(row.coeffs[0]);
  }
  return out;
}

bool cost_cut_auto_valid(const ExplorationProblem& p,
                         const std::vector<std::pair<int, double>>& units) {
  // The explored part of the cost must be exactly (S c)'z and the remaining
  // cost terms must be nonnegative for every feasible x.
  std::vector<bool> explored(p.model.num_vars(), false);
  for (const auto& [i, c] : units) {
    if (c != 1.0) return false;
    explored[i] = true;
  }
  for (const auto& [i, c] : p.model.objective) {
    if (explored[i]) continue;
    const auto& v = p.model.variables[i];
    const bool nonneg = (c > 0 && v.lower >= 0) || (c < 0 && v.upper <= 0) || c == 0;
    if (!nonneg) return false;
  }
  return true;
}

// One interval-tightening sweep of the box against a halfspace.
void tighten_box(std::vector<double>& lo, std::vector<double>& hi, const Halfspace& h) {
  const int nz = static_cast<int>(lo.size());
  for (int j = 0; j < nz; ++j) {
    if (h.normal[j] == 0.0) continue;
    double rest = 0.0;
    bool rest_finite = true;
    for (int k = 0; k < nz; ++k) {
      if (k == j) continue;
      const double contrib = h.normal[k] > 0 ? h.normal[k] * lo[k] : h.normal[k] * hi[k];
      if (!std::isfinite(contrib) && h.normal[k] != 0.0) rest_finite = false;
      if (h.normal[k] != 0.0) rest += contrib;
    }
    if (!rest_finite) continue;
    const double room = (h.offset - rest) / h.normal[j];
    if (h.normal[j] > 0)
      hi[j] = std::min(hi[j], room);
    else
      lo[j] = std::max(lo[j], room);
  }
}

}  // namespace

std::pair<InnerApprox, OuterApprox> init_regions(
    const SolverGateway& gateway, const ExplorationProblem& problem,
    const std::vector<std::vector<double>>& known_points,
    const std::vector<PointTag>& tags, const InitRegionOptions& options) {
  const int nz = problem.n_z();
  const auto units = unit_rows(problem);

  std::vector<Halfspace> candidates;
  bool cost_cut = options.cost_cut == InitRegionOptions::kOn;
  if (options.cost_cut == InitRegionOptions::kAuto && units)
    cost_cut = cost_cut_auto_valid(problem, *units);
  if (cost_cut) {
    Halfspace h;
    h.provenance = CutProvenance::kCostCut;
    h.normal.assign(nz, 0.0);
    for (int j = 0; j < nz; ++j)
      for (const auto& [i, c] : problem.projection[j].coeffs)
        h.normal[j] += c * problem.model.objective_coeff(i);
    h.offset = problem.budget;
    if (inf_norm(h.normal) > 0) candidates.push_back(std::move(h));
  }
  if (options.import_model_rows && units) {
    // x index -> z row for the unit projection
    std::vector<int> z_of(problem.model.num_vars(), -1);
    for (int j = 0; j < nz; ++j) z_of[(*units)[j].first] = j;
    for (const auto& row : problem.model.inequalities) {
      Halfspace h;
      h.provenance = CutProvenance::kModelRow;
      h.normal.assign(nz, 0.0);
      h.offset = row.rhs;
      bool in_span = true;
      for (const auto& [i, c] : row.coeffs) {
        if (z_of[i] < 0) {
          in_span = false;
          break;
        }
        h.normal[z_of[i]] += c / (*units)[z_of[i]].second;
      }
      if (in_span && inf_norm(h.normal) > 0) candidates.push_back(std::move(h));
    }
  }

  // The box must end up finite; unbounded directions may be rescued by the
  // cost cut (or an imported row).
  std::vector<double> lo = problem.z_lower, hi = problem.z_upper;
  for (int pass = 0; pass < 2; ++pass)
    for (const auto& h : candidates) tighten_box(lo, hi, h);
  for (int j = 0; j < nz; ++j) {
    if (!std::isfinite(lo[j]) || !std::isfinite(hi[j]))
      throw InputError("exploratory direction '" + problem.z_names[j] +
                       "' is unbounded and no cost cut bounds it");
  }

  InnerApprox inner;
  inner.z_names = problem.z_names;
  for (size_t k = 0; k < known_points.size(); ++k) {
    const auto& z = known_points[k];
    NearOptProjection proj = project_to_near_optimal(gateway, problem, z);
    if (proj.status != LpStatus::kOptimal || proj.distance > options.verify_tol)
      throw InputError("known point " + std::to_string(k) +
                       " fails near-optimality verification (distance " +
                       std::to_string(proj.distance) + ")");
    auto res = inner_add_point(inner, z, k < tags.size() ? tags[k] : PointTag{},
                               &gateway);
    inner = std::move(res.inner);
  }
  if (inner.size() < 1) throw InputError("init_regions needs at least one known point");

  OuterApprox outer;
  outer.z_names = problem.z_names;
  outer.z_lower = lo;
  outer.z_upper = hi;
  for (auto& h : candidates) {
    auto res = outer_add_halfspace(outer, std::move(h), inner);
    outer = std::move(res.outer);
  }
  return {std::move(inner), std::move(outer)};
}

}  // namespace nearopt
