#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tetherplan/coverage.hpp"
#include "tetherplan/geometry.hpp"
#include "tetherplan/mesh.hpp"
#include "tetherplan/point_cloud.hpp"
#include "tetherplan/sdf_grid.hpp"

namespace tetherplan {

enum class PlannerKind { kReact, kBaseline };

struct CylinderSpec {
  Vec3 base{Vec3::Zero()};
  Vec3 axis{0, 0, 1};
  double radius = 0.35;
  double length = 1.0;
};

struct BoxSpec {
  Vec3 center{Vec3::Zero()};
  Vec3 half_extents{0.5, 0.5, 0.5};
};

struct HelixSpec {
  Vec3 base{Vec3::Zero()};
  Vec3 axis{0, 0, 1};
  double radius = 0.9;
  double pitch = 0.35;
  double turns = 3.0;
  int waypoints_per_turn = 12;
};

struct MeshCylinderSpec {
  Vec3 base{Vec3::Zero()};
  Vec3 axis{0, 0, 1};
  double radius = 0.35;
  double length = 1.0;
  int radial_segments = 36;
  int axial_segments = 20;
};

/// Flat key-value mission description; see scenarios/ for the schema.
struct Scenario {
  // map
  double resolution = 0.05;
  double truncation = 1.0;
  Aabb bounds;
  std::vector<CylinderSpec> cylinders;
  std::vector<BoxSpec> boxes;
  std::string point_cloud_file;  // optional extra map source

  // inspection surface
  std::string mesh_file;
  std::optional<MeshCylinderSpec> mesh_cylinder;

  // mission
  Vec3 anchor{Vec3::Zero()};
  Vec3 start{Vec3::Zero()};
  std::optional<HelixSpec> helix;
  std::string waypoints_file;
  double l_max = 10.0;
  double reach_radius = 0.15;
  double recovery_headroom = 0.0;

  // tether / planner
  double delta = 0.05;
  double margin_vehicle = 0.12;
  double margin_tether = 0.05;
  double lookahead = 0.3;
  double offset_gain = 1.0;
  int refine_max_iter = 25;
  double rrt_step = 0.0;  // 0 -> 5 * resolution
  int rrt_max_iterations = 5000;
  double rrt_goal_bias = 0.1;
  int rrt_post_goal_iterations = 800;
  int pivot_stride = 1;

  // camera
  CameraModel camera;

  // vehicle / loop
  double dt = 0.1;
  double max_speed = 0.4;
  double max_yaw_rate = 2.0;
  double max_mission_time = 1800.0;

  PlannerKind planner = PlannerKind::kReact;
  std::uint64_t seed = 1;

  double rrt_step_or_default() const {
    return rrt_step > 0.0 ? rrt_step : 5.0 * resolution;
  }
};

/// Parses the flat key-value format ('#' comments, unknown keys rejected).
Scenario load_scenario(const std::string& path);

/// Map, inspection mesh, and waypoint list realized from a scenario.
struct Environment {
  SdfGrid grid;
  TriangleMesh mesh;
  std::vector<Vec3> waypoints;
};

/// Samples primitive surfaces into a cloud, builds the SDF, loads or
/// generates the mesh, and produces waypoints (file or helix, nudged out of
/// collision). Relative file paths resolve against the scenario directory.
Environment build_environment(const Scenario& scenario);

/// Helical waypoint sequence around base + t*axis.
std::vector<Vec3> make_helix_waypoints(const HelixSpec& spec);

/// Surface samples of the primitives at the given spacing.
PointCloud sample_primitives(const std::vector<CylinderSpec>& cylinders,
                             const std::vector<BoxSpec>& boxes, double spacing);

}  // namespace tetherplan
