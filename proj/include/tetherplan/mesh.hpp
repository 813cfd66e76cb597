#pragma once

#include <array>
#include <string>
#include <vector>

#include "tetherplan/geometry.hpp"

namespace tetherplan {

/// Triangulated inspection surface with outward unit normals.
struct TriangleMesh {
  std::vector<Vec3> vertices;
  std::vector<std::array<int, 3>> triangles;
  std::vector<Vec3> normals;    // per triangle, unit length
  std::vector<Vec3> centroids;  // per triangle

  std::size_t triangle_count() const { return triangles.size(); }
  bool empty() const { return triangles.empty(); }
};

/// Computes per-triangle normals (right-handed winding) and centroids.
/// Throws std::invalid_argument on out-of-range indices or degenerate
/// triangles.
void finalize_mesh(TriangleMesh& mesh);

/// Loads the OBJ subset used here: `v x y z` and `f i j k` lines
/// (1-based indices, triangles only). `#` comments and blank lines are
/// skipped; any other keyword is an error.
TriangleMesh load_obj_mesh(const std::string& path);

/// Open tube around `base + t*axis`, t in [0, length]; lateral surface only.
TriangleMesh make_tube_mesh(const Vec3& base, const Vec3& axis, double radius,
                            double length, int radial_segments,
                            int axial_segments);

/// Axis-aligned closed box, two triangles per face, normals outward.
TriangleMesh make_box_mesh(const Vec3& center, const Vec3& half_extents);

}  // namespace tetherplan
