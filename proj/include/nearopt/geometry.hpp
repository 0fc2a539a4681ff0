#pragma once
#include <vector>

#include "nearopt/regions.hpp"

namespace nearopt::geom {

using Point = std::vector<double>;

// halfspace rows a'z <= b, box included as explicit rows
struct HalfspaceSet {
  std::vector<std::vector<double>> normals;
  std::vector<double> offsets;
  int dim() const { return normals.empty() ? 0 : static_cast<int>(normals[0].size()); }
};

HalfspaceSet to_halfspace_set(const OuterApprox& outer);

// CCW hull of a 2D point cloud (monotone chain; collinear points dropped).
std::vector<Point> convex_hull_2d(std::vector<Point> pts);
double polygon_area(const std::vector<Point>& ccw);

// Vertices of a (bounded) 2D/3D halfspace intersection: pairwise/triple
// intersections filtered by containment.
std::vector<Point> vertices_2d(const HalfspaceSet& hs);
std::vector<Point> vertices_3d(const HalfspaceSet& hs);

double volume_2d(const HalfspaceSet& hs);
double volume_3d(const HalfspaceSet& hs);

// Hull volume of a 3D point cloud via its supporting planes (every plane
// through three points with all points on one side).
double hull_volume_3d(const std::vector<Point>& pts);

}  // namespace nearopt::geom
