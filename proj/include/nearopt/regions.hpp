#pragma once
#include <optional>
#include <string>
#include <vector>

#include "nearopt/model.hpp"
#include "nearopt/solver.hpp"

namespace nearopt {

enum class CutProvenance {
  kBound,
  kCostCut,
  kDualCut,
  kValueCut,
  kModelRow,
  kMgaSupport,
};

const char* to_string(CutProvenance p);
std::optional<CutProvenance> cut_provenance_from_string(const std::string& s);

// normal' z <= offset, stored with unit infinity-norm normal.
struct Halfspace {
  std::vector<double> normal;
  double offset = 0.0;
  CutProvenance provenance = CutProvenance::kBound;

  double evaluate(const std::vector<double>& z) const;  // normal'z - offset
};

// Scales to unit infinity-norm; throws InputError on a zero normal.
Halfspace normalized(Halfspace h);

struct PointTag {
  enum Kind { kOptimum, kKnown, kMga, kOracle } kind = kKnown;
  int iteration = -1;  // MGA/ORACLE iteration that produced the point
  std::string label() const;
};

// Implicit convex hull of verified near-optimal points (V-representation
// only; membership questions are LPs against `points`).
struct InnerApprox {
  std::vector<std::string> z_names;
  std::vector<std::vector<double>> points;
  std::vector<PointTag> tags;
  std::vector<uint8_t> redundant;  // interior at insertion time

  int size() const { return static_cast<int>(points.size()); }
  int n_z() const { return static_cast<int>(z_names.size()); }
};

// Halfspace list plus the bounding box; compact by construction.
struct OuterApprox {
  std::vector<std::string> z_names;
  std::vector<double> z_lower, z_upper;
  std::vector<Halfspace> halfspaces;

  int n_z() const { return static_cast<int>(z_names.size()); }
};

struct MembershipResult {
  bool member = false;
  double distance = 0.0;            // infinity-norm distance to the hull
  std::vector<double> lambda;       // convex-combination certificate (member)
  std::vector<double> separator;    // evidence: separator'z > max_i separator'p_i
};

// Solves min s s.t. |Z'lambda - z|_inf <= s, sum lambda = 1, lambda >= 0 and
// reports membership at `tol`. Non-membership also returns a separating
// functional from the duals.
MembershipResult inner_contains(const SolverGateway& gateway, const InnerApprox& inner,
                                const std::vector<double>& z, double tol);

struct AddPointResult {
  InnerApprox inner;
  bool added = false;      // false: duplicate within 1e-8
  bool redundant = false;  // already inside the previous hull (when checked)
};

// Appends z (caller guarantees near-optimality). When a gateway is supplied
// the point is also classified as interior/exterior of the current hull.
AddPointResult inner_add_point(const InnerApprox& inner, const std::vector<double>& z,
                               PointTag tag, const SolverGateway* gateway = nullptr);

// Drops points that lie in the hull of the others (leave-one-out membership).
InnerApprox inner_pruned(const SolverGateway& gateway, const InnerApprox& inner);

struct AddHalfspaceResult {
  OuterApprox outer;
  bool added = false;  // false: dominated or duplicate
};

// Appends after normalization. Parallel-weaker duplicates and cuts implied by
// the box are dropped. A halfspace that excludes a stored inner point (beyond
// 1e-6) is an invalid cut and raises InputError.
AddHalfspaceResult outer_add_halfspace(const OuterApprox& outer, Halfspace h,
                                       const InnerApprox& inner);

bool outer_contains(const OuterApprox& outer, const std::vector<double>& z,
                    double tol = 1e-9);

struct InitRegionOptions {
  // tristate: enable the (S c)' z <= budget cut; kAuto enables it when every
  // non-explored cost term is guaranteed nonnegative (and the projection is
  // made of unit rows).
  enum CostCut { kAuto, kOn, kOff } cost_cut = kAuto;
  bool import_model_rows = true;
  double verify_tol = 1e-6;
};

// Step-1 construction: verified known points become the inner approximation;
// the z box, the cost cut and importable model rows become the outer one.
std::pair<InnerApprox, OuterApprox> init_regions(
    const SolverGateway& gateway, const ExplorationProblem& problem,
    const std::vector<std::vector<double>>& known_points,
    const std::vector<PointTag>& tags, const InitRegionOptions& options = {});

}  // namespace nearopt
