#include "nearopt/geometry.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

namespace nearopt::geom {

namespace {

constexpr double kGeomTol = 1e-7;

bool contained(const HalfspaceSet& hs, const Point& p, double tol) {
  for (size_t i = 0; i < hs.normals.size(); ++i) {
    double v = -hs.offsets[i];
    for (size_t j = 0; j < p.size(); ++j) v += hs.normals[i][j] * p[j];
    if (v > tol) return false;
  }
  return true;
}

void dedup(std::vector<Point>& pts, double tol) {
  std::vector<Point> out;
  for (const auto& p : pts) {
    bool seen = false;
    for (const auto& q : out) {
      double d = 0.0;
      for (size_t j = 0; j < p.size(); ++j) d = std::max(d, std::abs(p[j] - q[j]));
      if (d <= tol) {
        seen = true;
        break;
      }
    }
    if (!seen) out.push_back(p);
  }
  pts = std::move(out);
}

double region_scale(const HalfspaceSet& hs) {
  double s = 1.0;
  for (double b : hs.offsets) s = std::max(s, std::abs(b));
  return s;
}

// vertices on the given plane, ordered around the facet centroid
std::vector<Point> facet_loop(const std::vector<Point>& verts,
                              const std::vector<double>& normal, double offset,
                              double tol) {
  std::vector<Point> on;
  for (const auto& v : verts) {
    double d = -offset;
    for (int j = 0; j < 3; ++j) d += normal[j] * v[j];
    if (std::abs(d) <= tol) on.push_back(v);
  }
  if (on.size() < 3) return {};
  Eigen::Vector3d n(normal[0], normal[1], normal[2]);
  n.normalize();
  Eigen::Vector3d t1 = std::abs(n.x()) < 0.9 ? Eigen::Vector3d::UnitX().cross(n)
                                             : Eigen::Vector3d::UnitY().cross(n);
  t1.normalize();
  Eigen::Vector3d t2 = n.cross(t1);
  Eigen::Vector3d c = Eigen::Vector3d::Zero();
  for (const auto& v : on) c += Eigen::Vector3d(v[0], v[1], v[2]);
  c /= static_cast<double>(on.size());
  std::sort(on.begin(), on.end(), [&](const Point& a, const Point& b) {
    Eigen::Vector3d pa = Eigen::Vector3d(a[0], a[1], a[2]) - c;
    Eigen::Vector3d pb = Eigen::Vector3d(b[0], b[1], b[2]) - c;
    return std::atan2(pa.dot(t2), pa.dot(t1)) < std::atan2(pb.dot(t2), pb.dot(t1));
  });
  return on;
}

double fan_volume(const std::vector<Point>& verts,
                  const std::vector<std::vector<Point>>& facets) {
  Eigen::Vector3d c = Eigen::Vector3d::Zero();
  for (const auto& v : verts) c += Eigen::Vector3d(v[0], v[1], v[2]);
  c /= static_cast<double>(verts.size());
  double vol = 0.0;
  for (const auto& loop : facets) {
    for (size_t k = 1; k + 1 < loop.size(); ++k) {
      Eigen::Vector3d a = Eigen::Vector3d(loop[0][0], loop[0][1], loop[0][2]) - c;
      Eigen::Vector3d b = Eigen::Vector3d(loop[k][0], loop[k][1], loop[k][2]) - c;
      Eigen::Vector3d d =
          Eigen::Vector3d(loop[k + 1][0], loop[k + 1][1], loop[k + 1][2]) - c;
      vol += std::abs(a.dot(b.cross(d))) / 6.0;
    }
  }
  return vol;
}

}  // namespace

HalfspaceSet to_halfspace_set(const OuterApprox& outer) {
  HalfspaceSet hs;
  const int nz = outer.n_z();
  for (int j = 0; j < nz; ++j) {
    if (!std::isfinite(outer.z_lower[j]) || !std::isfinite(outer.z_upper[j]))
      throw InputError("halfspace set requires a finite box");
    std::vector<double> e(nz, 0.0);
    e[j] = 1.0;
    hs.normals.push_back(e);
    hs.offsets.push_back(outer.z_upper[j]);
    e[j] = -1.0;
    hs.normals.push_back(e);
    hs.offsets.push_back(-outer.z_lower[j]);
  }
  for (const auto& h : outer.halfspaces) {
    hs.normals.push_back(h.normal);
    hs.offsets.push_back(h.offset);
  }
  return hs;
}

std::vector<Point> convex_hull_2d(std::vector<Point> pts) {
  dedup(pts, 1e-12);
  if (pts.size() <= 2) return pts;
  std::sort(pts.begin(), pts.end());
  auto cross = [](const Point& o, const Point& a, const Point& b) {
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
  };
  std::vector<Point> hull(2 * pts.size());
  size_t k = 0;
  for (const auto& p : pts) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 1e-12) --k;
    hull[k++] = p;
  }
  const size_t lower = k + 1;
  for (auto it = pts.rbegin(); it != pts.rend(); ++it) {
    while (k >= lower && cross(hull[k - 2], hull[k - 1], *it) <= 1e-12) --k;
    hull[k++] = *it;
  }
  hull.resize(k - 1);
  return hull;
}

double polygon_area(const std::vector<Point>& ccw) {
  double s = 0.0;
  const size_t n = ccw.size();
  if (n < 3) return 0.0;
  for (size_t i = 0; i < n; ++i) {
    const auto& a = ccw[i];
    const auto& b = ccw[(i + 1) % n];
    s += a[0] * b[1] - b[0] * a[1];
  }
  return std::abs(s) / 2.0;
}

std::vector<Point> vertices_2d(const HalfspaceSet& hs) {
  const double tol = kGeomTol * region_scale(hs);
  std::vector<Point> verts;
  const size_t n = hs.normals.size();
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = i + 1; j < n; ++j) {
      const double a1 = hs.normals[i][0], b1 = hs.normals[i][1];
      const double a2 = hs.normals[j][0], b2 = hs.normals[j][1];
      const double det = a1 * b2 - a2 * b1;
      if (std::abs(det) < 1e-10) continue;
      Point p = {(hs.offsets[i] * b2 - hs.offsets[j] * b1) / det,
                 (a1 * hs.offsets[j] - a2 * hs.offsets[i]) / det};
      if (contained(hs, p, tol)) verts.push_back(std::move(p));
    }
  }
  dedup(verts, tol);
  return verts;
}

std::vector<Point> vertices_3d(const HalfspaceSet& hs) {
  const double tol = kGeomTol * region_scale(hs);
  std::vector<Point> verts;
  const size_t n = hs.normals.size();
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j)
      for (size_t k = j + 1; k < n; ++k) {
        Eigen::Matrix3d A;
        Eigen::Vector3d b(hs.offsets[i], hs.offsets[j], hs.offsets[k]);
        for (int c = 0; c < 3; ++c) {
          A(0, c) = hs.normals[i][c];
          A(1, c) = hs.normals[j][c];
          A(2, c) = hs.normals[k][c];
        }
        if (std::abs(A.determinant()) < 1e-10) continue;
        Eigen::Vector3d x = A.partialPivLu().solve(b);
        Point p = {x[0], x[1], x[2]};
        if (contained(hs, p, tol)) verts.push_back(std::move(p));
      }
  dedup(verts, tol);
  return verts;
}

double volume_2d(const HalfspaceSet& hs) {
  std::vector<Point> verts = vertices_2d(hs);
  return polygon_area(convex_hull_2d(std::move(verts)));
}

double volume_3d(const HalfspaceSet& hs) {
  std::vector<Point> verts = vertices_3d(hs);
  if (verts.size() < 4) return 0.0;
  const double tol = kGeomTol * region_scale(hs) * 10.0;
  std::vector<std::vector<Point>> facets;
  for (size_t i = 0; i < hs.normals.size(); ++i) {
    double nn = 0.0;
    for (double c : hs.normals[i]) nn = std::max(nn, std::abs(c));
    auto loop = facet_loop(verts, hs.normals[i], hs.offsets[i], tol * nn);
    if (!loop.empty()) facets.push_back(std::move(loop));
  }
  return fan_volume(verts, facets);
}

double hull_volume_3d(const std::vector<Point>& pts) {
  if (pts.size() < 4) return 0.0;
  double scale = 1.0;
  for (const auto& p : pts)
    for (double c : p) scale = std::max(scale, std::abs(c));
  const double tol = kGeomTol * scale;

  std::vector<std::vector<Point>> facets;
  std::vector<std::pair<std::vector<double>, double>> seen_planes;
  const size_t n = pts.size();
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j)
      for (size_t k = j + 1; k < n; ++k) {
        Eigen::Vector3d a(pts[i][0], pts[i][1], pts[i][2]);
        Eigen::Vector3d b(pts[j][0], pts[j][1], pts[j][2]);
        Eigen::Vector3d c(pts[k][0], pts[k][1], pts[k][2]);
        Eigen::Vector3d nrm = (b - a).cross(c - a);
        if (nrm.norm() < 1e-10 * std::max(1.0, scale * scale)) continue;
        nrm.normalize();
        double off = nrm.dot(a);
        // supporting side check
        bool above = false, below = false;
        for (const auto& p : pts) {
          const double d = nrm.dot(Eigen::Vector3d(p[0], p[1], p[2])) - off;
          above |= d > tol;
          below |= d < -tol;
        }
        if (above && below) continue;
        if (above) {
          nrm = -nrm;
          off = -off;
        }
        std::vector<double> nv = {nrm[0], nrm[1], nrm[2]};
        bool dup = false;
        for (const auto& [pn, po] : seen_planes) {
          double d = std::abs(po - off);
          for (int t = 0; t < 3; ++t) d = std::max(d, std::abs(pn[t] - nv[t]));
          if (d <= 1e-6 * std::max(1.0, scale)) {
            dup = true;
            break;
          }
        }
        if (dup) continue;
        auto loop = facet_loop(pts, nv, off, tol);
        if (!loop.empty()) {
          facets.push_back(std::move(loop));
          seen_planes.emplace_back(std::move(nv), off);
        }
      }
  if (facets.empty()) return 0.0;
  return fan_volume(pts, facets);
}

}  // namespace nearopt::geom
