#include "nearopt/sampler.hpp"

#include <omp.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "nearopt/explore_lps.hpp"
#include "nearopt/rng.hpp"

namespace nearopt {

ChebyshevResult chebyshev_center(const SolverGateway& gateway,
                                 const OuterApprox& outer) {
  const int nz = outer.n_z();
  SolverModel lp;
  lp.maximize = true;
  for (int j = 0; j < nz; ++j) lp.add_col(-kInf, kInf, 0.0);
  const int r_col = lp.add_col(0.0, kInf, 1.0);
  for (int j = 0; j < nz; ++j) {
    lp.add_le({{j, 1.0}, {r_col, 1.0}}, outer.z_upper[j]);
    lp.add_le({{j, -1.0}, {r_col, 1.0}}, -outer.z_lower[j]);
  }
  for (const auto& h : outer.halfspaces) {
    double l1 = 0.0;
    std::vector<std::pair<int, double>> row;
    for (int j = 0; j < nz; ++j) {
      if (h.normal[j] != 0.0) row.emplace_back(j, h.normal[j]);
      l1 += std::abs(h.normal[j]);
    }
    row.emplace_back(r_col, l1);
    lp.add_le(std::move(row), h.offset);
  }
  RawLpResult r = gateway.solve_raw_lp(lp);
  if (r.status != LpStatus::kOptimal)
    throw SolverError("chebyshev center: outer region is empty");
  ChebyshevResult out;
  out.center.assign(r.col_value.begin(), r.col_value.begin() + nz);
  out.radius = r.col_value[r_col];
  return out;
}

namespace {

// Persistent hull-membership query: distance(z, hull) <= tol. Only the
// 2 n_z target row bounds change between calls.
class HullMembership {
 public:
  HullMembership(const InnerApprox& inner, const SolverSettings& settings)
      : nz_(inner.n_z()) {
    const int m = inner.size();
    SolverModel lp;
    for (int i = 0; i < m; ++i) lp.add_col(0.0, 1.0, 0.0);
    const int s_col = lp.add_col(0.0, kInf, 1.0);
    for (int j = 0; j < nz_; ++j) {
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
      lp.add_le(std::move(neg), 0.0);
      lp.add_le(std::move(pos), 0.0);
    }
    std::vector<std::pair<int, double>> sum;
    for (int i = 0; i < m; ++i) sum.emplace_back(i, 1.0);
    lp.add_eq(std::move(sum), 1.0);
    inc_.emplace(lp, settings);
  }

  bool contains(const std::vector<double>& z, double tol) {
    for (int j = 0; j < nz_; ++j) {
      inc_->set_row_bounds(2 * j, -kInf, -z[j]);
      inc_->set_row_bounds(2 * j + 1, -kInf, z[j]);
    }
    RawLpResult r = inc_->solve();
    return r.status == LpStatus::kOptimal && r.objective <= tol;
  }

 private:
  int nz_;
  std::optional<IncrementalLp> inc_;
};

struct Walk {
  std::vector<double> centroid;
  Eigen::MatrixXd basis;  // n_z x dim
  int dim = 0;
  std::vector<double> lo, hi;  // bounding box of the points
};

Walk make_walk(const InnerApprox& inner, bool affine_span) {
  const int nz = inner.n_z();
  const int m = inner.size();
  Walk w;
  w.centroid.assign(nz, 0.0);
  for (const auto& p : inner.points)
    for (int j = 0; j < nz; ++j) w.centroid[j] += p[j] / m;
  w.lo.assign(nz, kInf);
  w.hi.assign(nz, -kInf);
  for (const auto& p : inner.points)
    for (int j = 0; j < nz; ++j) {
      w.lo[j] = std::min(w.lo[j], p[j]);
      w.hi[j] = std::max(w.hi[j], p[j]);
    }
  Eigen::MatrixXd offs(nz, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < nz; ++j) offs(j, i) = inner.points[i][j] - w.centroid[j];
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(offs, Eigen::ComputeThinU);
  const double smax = svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
  int rank = 0;
  for (int i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > 1e-9 * std::max(1.0, smax)) ++rank;
  if (rank < nz && !affine_span)
    throw InputError(
        "hull has an empty interior (affine dimension " + std::to_string(rank) +
        " < " + std::to_string(nz) + "); rerun with affine-span sampling");
  if (rank == 0)
    throw InputError("hull is a single point; nothing to sample");
  w.dim = rank;
  w.basis = svd.matrixU().leftCols(rank);
  return w;
}

}  // namespace

SampleBatch hit_and_run(const SolverGateway& gateway, const InnerApprox& inner,
                        int k, uint64_t seed, const HitAndRunOptions& options) {
  if (k < 1) throw InputError("hit_and_run: k must be >= 1");
  if (inner.size() < 1) throw InputError("hit_and_run: empty inner approximation");
  const int nz = inner.n_z();
  const int burn_in = options.burn_in >= 0 ? options.burn_in : 100 * nz;
  const Walk walk = make_walk(inner, options.affine_span);

  double box_diam = 0.0;
  for (int j = 0; j < nz; ++j) box_diam = std::max(box_diam, walk.hi[j] - walk.lo[j]);

  const int n_chains = std::max(1, std::min(options.n_chains, k));
  std::vector<int> chain_count(n_chains, k / n_chains);
  for (int c = 0; c < k % n_chains; ++c) ++chain_count[c];

  std::vector<std::vector<std::vector<double>>> chain_samples(n_chains);
  const SolverSettings settings = gateway.settings();

#pragma omp parallel for schedule(dynamic, 1) if (options.parallel)
  for (int c = 0; c < n_chains; ++c) {
    Rng rng(substream_seed(seed, static_cast<uint64_t>(c)));
    HullMembership membership(inner, settings);
    std::vector<double> pos = walk.centroid;
    std::vector<double> dir(nz), probe(nz);

    auto chord_end = [&](double sign) {
      // largest |t| with pos + t*dir inside, found against the membership LP
      double t_hi = kInf;
      for (int j = 0; j < nz; ++j) {
        const double d = sign * dir[j];
        if (d > 1e-300) t_hi = std::min(t_hi, (walk.hi[j] - pos[j]) / d);
        else if (d < -1e-300) t_hi = std::min(t_hi, (walk.lo[j] - pos[j]) / d);
      }
      t_hi = std::max(0.0, t_hi);
      auto inside = [&](double t) {
        for (int j = 0; j < nz; ++j) probe[j] = pos[j] + sign * t * dir[j];
        return membership.contains(probe, options.membership_tol);
      };
      if (inside(t_hi)) return t_hi;
      double lo = 0.0, hi = t_hi;
      for (int it = 0; it < 20; ++it) {
        const double mid = (lo + hi) / 2.0;
        (inside(mid) ? lo : hi) = mid;
      }
      return lo;
    };

    auto step = [&]() {
      std::vector<double> g(walk.dim);
      double norm = 0.0;
      for (int t = 0; t < walk.dim; ++t) {
        g[t] = rng.normal();
        norm += g[t] * g[t];
      }
      norm = std::sqrt(std::max(norm, 1e-300));
      for (int j = 0; j < nz; ++j) {
        double v = 0.0;
        for (int t = 0; t < walk.dim; ++t) v += walk.basis(j, t) * g[t] / norm;
        dir[j] = v;
      }
      const double t_plus = chord_end(+1.0);
      const double t_minus = chord_end(-1.0);
      const double t = -t_minus + (t_plus + t_minus) * rng.uniform01();
      for (int j = 0; j < nz; ++j) pos[j] += t * dir[j];
    };

    for (int it = 0; it < burn_in; ++it) step();
    chain_samples[c].reserve(chain_count[c]);
    for (int s = 0; s < chain_count[c]; ++s) {
      for (int it = 0; it < options.thinning; ++it) step();
      chain_samples[c].push_back(pos);
    }
  }

  SampleBatch out;
  out.method = SampleBatch::kHitAndRun;
  out.seed = seed;
  out.burn_in = burn_in;
  out.thinning = options.thinning;
  out.affine_dim = walk.dim;
  for (const auto& chain : chain_samples)
    out.points.insert(out.points.end(), chain.begin(), chain.end());
  return out;
}

MostDistantResult most_distant_design(const SolverGateway& gateway,
                                      const OuterApprox& outer,
                                      const std::vector<std::vector<double>>& cloud,
                                      const MostDistantOptions& options) {
  if (cloud.empty()) throw InputError("most_distant_design: empty cloud");
  const int nz = outer.n_z();
  const int m = static_cast<int>(cloud.size());

  SolverModel lp;
  lp.maximize = true;
  for (int j = 0; j < nz; ++j) lp.add_col(outer.z_lower[j], outer.z_upper[j], 0.0);
  double delta_cap = 0.0;
  std::vector<double> span(nz);
  for (int j = 0; j < nz; ++j) {
    double lo = outer.z_lower[j], hi = outer.z_upper[j];
    for (const auto& p : cloud) {
      lo = std::min(lo, p[j]);
      hi = std::max(hi, p[j]);
    }
    span[j] = hi - lo;
    delta_cap += span[j];
  }
  const int delta_col = lp.add_col(0.0, delta_cap, 1.0);
  std::vector<std::vector<int>> e_col(m, std::vector<int>(nz));
  std::vector<std::vector<int>> s_col(m, std::vector<int>(nz));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < nz; ++j) {
      e_col[i][j] = lp.add_col(0.0, span[j], 0.0);
      s_col[i][j] = lp.add_col(0.0, 1.0, 0.0, /*integer=*/true);
    }

  for (const auto& h : outer.halfspaces) {
    std::vector<std::pair<int, double>> row;
    for (int j = 0; j < nz; ++j)
      if (h.normal[j] != 0.0) row.emplace_back(j, h.normal[j]);
    lp.add_le(std::move(row), h.offset);
  }
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < nz; ++j) {
      const double zij = cloud[i][j];
      const double big_m = 2.0 * span[j] + 1e-9;
      const int e = e_col[i][j], s = s_col[i][j];
      lp.add_le({{j, 1.0}, {e, -1.0}}, zij);    // e >= z_j - z_ij
      lp.add_le({{j, -1.0}, {e, -1.0}}, -zij);  // e >= z_ij - z_j
      // e <= z_j - z_ij + M(1-s), e <= z_ij - z_j + M s: s picks the sign
      lp.add_le({{e, 1.0}, {j, -1.0}, {s, big_m}}, big_m - zij);
      lp.add_le({{e, 1.0}, {j, 1.0}, {s, -big_m}}, zij);
    }
    std::vector<std::pair<int, double>> row{{delta_col, 1.0}};
    for (int j = 0; j < nz; ++j) row.emplace_back(e_col[i][j], -1.0);
    lp.add_le(std::move(row), 0.0);
  }

  MilpSolution sol = gateway.solve_milp(lp, options.milp);
  if (!sol.has_incumbent())
    throw SolverError(std::string("most_distant_design MILP: ") + to_string(sol.status));
  MostDistantResult out;
  out.z.assign(sol.incumbent.begin(), sol.incumbent.begin() + nz);
  out.delta = sol.objective;
  out.status = sol.status;
  return out;
}

SampleBatch diverse_set(const SolverGateway& gateway, const OuterApprox& outer,
                        int k, std::vector<std::vector<double>> seed_cloud,
                        const ExplorationProblem* problem, double tol,
                        const MostDistantOptions& options) {
  if (k < 1) throw InputError("diverse_set: k must be >= 1");
  if (seed_cloud.empty()) throw InputError("diverse_set: empty seed cloud");
  SampleBatch out;
  out.method = SampleBatch::kDiverse;
  for (int t = 0; t < k; ++t) {
    MostDistantResult far = most_distant_design(gateway, outer, seed_cloud, options);
    std::vector<double> design = far.z;
    if (problem) {
      NearOptProjection proj = project_to_near_optimal(gateway, *problem, far.z);
      if (proj.status != LpStatus::kOptimal)
        throw SolverError("diverse_set: certification solve failed");
      // certified design; proj.distance <= tol holds once the regions have
      // converged to tol
      design = proj.z_feasible;
      (void)tol;
    }
    out.points.push_back(design);
    out.deltas.push_back(far.delta);
    seed_cloud.push_back(design);
  }
  return out;
}

}  // namespace nearopt
