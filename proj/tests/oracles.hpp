#pragma once

// Independent reference implementations used only by tests. These must not
// share code paths with the library primitives they check.

#include <random>
#include <vector>

#include "tetherplan/geometry.hpp"
#include "tetherplan/sdf_grid.hpp"
#include "tetherplan/tether.hpp"

namespace oracles {

using tetherplan::SdfGrid;
using tetherplan::TetherOptions;
using tetherplan::TetherPath;
using tetherplan::Vec3;

/// Distance from p to the nearest occupied voxel center, by exhaustive scan.
double brute_force_distance(const SdfGrid& grid, const Vec3& p);

/// Analytic point-to-segment distance, independent of the library helpers.
double point_segment_distance(const Vec3& a, const Vec3& b, const Vec3& p);

/// 2D planar point for the visibility-graph oracle (z is ignored).
struct Vec2 {
  double x = 0.0, y = 0.0;
};

/// Shortest path length from start to goal around a convex polygon
/// (vertices counterclockwise), computed with a visibility graph and
/// Dijkstra. Segments intersecting the open polygon interior are blocked.
double convex_polygon_geodesic(const std::vector<Vec2>& polygon, Vec2 start,
                               Vec2 goal);

/// Regular convex polygon, radius r, n vertices, rotated by phase.
std::vector<Vec2> regular_polygon(Vec2 center, double r, int n, double phase);

/// Shortest collision-free path length on a planar 8-connected grid at the
/// given spacing; cells with distance_at < margin are blocked. Returns a
/// negative value when no path exists.
double planar_grid_dijkstra(const SdfGrid& grid, const Vec3& start,
                            const Vec3& goal, double margin, double spacing,
                            const tetherplan::Aabb& area);

/// Steps the vehicle along a waypoint polyline at the given stride, updating
/// the tether each step; returns the settled tether at the end.
TetherPath drag_tether(const TetherPath& initial,
                       const std::vector<Vec3>& route, double stride,
                       const SdfGrid& grid, const TetherOptions& opt);

/// Zigzag polyline with n nodes from a to b, seeded lateral noise.
std::vector<Vec3> make_zigzag(const Vec3& a, const Vec3& b, int n,
                              double amplitude, std::mt19937_64& rng);

}  // namespace oracles
