#include "tetherplan/scenario.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace tetherplan {

namespace {

struct LineParser {
  std::string path;
  int line_no = 0;
  std::istringstream ss;

  [[noreturn]] void fail(const std::string& what) const {
    throw std::runtime_error(path + ":" + std::to_string(line_no) + ": " + what);
  }

  double num() {
    double v;
    if (!(ss >> v)) fail("expected a number");
    return v;
  }
  int integer() { return static_cast<int>(std::llround(num())); }
  Vec3 vec3() {
    const double x = num(), y = num(), z = num();
    return Vec3(x, y, z);
  }
  std::string word() {
    std::string w;
    if (!(ss >> w)) fail("expected a token");
    return w;
  }
  void done() {
    std::string extra;
    if (ss >> extra) fail("unexpected trailing token '" + extra + "'");
  }
};

void orthonormal_frame(const Vec3& axis, Vec3& e1, Vec3& e2) {
  const Vec3 a = axis.normalized();
  Vec3 ref = std::abs(a.z()) < 0.9 ? Vec3(0, 0, 1) : Vec3(1, 0, 0);
  e1 = a.cross(ref).normalized();
  e2 = a.cross(e1).normalized();
}

std::string resolve_path(const std::string& scenario_path,
                         const std::string& file) {
  std::filesystem::path p(file);
  if (p.is_absolute()) return file;
  return (std::filesystem::path(scenario_path).parent_path() / p).string();
}

}  // namespace

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open scenario file: " + path);

  Scenario s;
  bool have_bounds_min = false, have_bounds_max = false;
  std::string line;
  LineParser p;
  p.path = path;

  while (std::getline(in, line)) {
    ++p.line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      std::istringstream probe(line);
      std::string tok;
      if (probe >> tok) p.fail("expected 'key = value'");
      continue;
    }
    std::string key;
    {
      std::istringstream ks(line.substr(0, eq));
      if (!(ks >> key)) p.fail("missing key");
      std::string extra;
      if (ks >> extra) p.fail("malformed key");
    }
    p.ss = std::istringstream(line.substr(eq + 1));

    if (key == "resolution") s.resolution = p.num();
    else if (key == "truncation") s.truncation = p.num();
    else if (key == "bounds_min") { s.bounds.min = p.vec3(); have_bounds_min = true; }
    else if (key == "bounds_max") { s.bounds.max = p.vec3(); have_bounds_max = true; }
    else if (key == "cylinder") {
      CylinderSpec c;
      c.base = p.vec3();
      c.axis = p.vec3();
      c.radius = p.num();
      c.length = p.num();
      s.cylinders.push_back(c);
    } else if (key == "box") {
      BoxSpec b;
      b.center = p.vec3();
      b.half_extents = p.vec3();
      s.boxes.push_back(b);
    } else if (key == "point_cloud") s.point_cloud_file = resolve_path(path, p.word());
    else if (key == "mesh") s.mesh_file = resolve_path(path, p.word());
    else if (key == "mesh_cylinder") {
      MeshCylinderSpec m;
      m.base = p.vec3();
      m.axis = p.vec3();
      m.radius = p.num();
      m.length = p.num();
      m.radial_segments = p.integer();
      m.axial_segments = p.integer();
      s.mesh_cylinder = m;
    } else if (key == "anchor") s.anchor = p.vec3();
    else if (key == "start") s.start = p.vec3();
    else if (key == "helix") {
      HelixSpec h;
      h.base = p.vec3();
      h.axis = p.vec3();
      h.radius = p.num();
      h.pitch = p.num();
      h.turns = p.num();
      h.waypoints_per_turn = p.integer();
      s.helix = h;
    } else if (key == "waypoints_file") s.waypoints_file = resolve_path(path, p.word());
    else if (key == "l_max") s.l_max = p.num();
    else if (key == "reach_radius") s.reach_radius = p.num();
    else if (key == "recovery_headroom") s.recovery_headroom = p.num();
    else if (key == "delta") s.delta = p.num();
    else if (key == "margin_vehicle") s.margin_vehicle = p.num();
    else if (key == "margin_tether") s.margin_tether = p.num();
    else if (key == "lookahead") s.lookahead = p.num();
    else if (key == "offset_gain") s.offset_gain = p.num();
    else if (key == "refine_max_iter") s.refine_max_iter = p.integer();
    else if (key == "rrt_step") s.rrt_step = p.num();
    else if (key == "rrt_max_iterations") s.rrt_max_iterations = p.integer();
    else if (key == "rrt_goal_bias") s.rrt_goal_bias = p.num();
    else if (key == "rrt_post_goal_iterations") s.rrt_post_goal_iterations = p.integer();
    else if (key == "pivot_stride") s.pivot_stride = p.integer();
    else if (key == "camera_fov_deg") s.camera.fov_deg = p.num();
    else if (key == "camera_range") s.camera.range = p.num();
    else if (key == "dt") s.dt = p.num();
    else if (key == "max_speed") s.max_speed = p.num();
    else if (key == "max_yaw_rate") s.max_yaw_rate = p.num();
    else if (key == "max_mission_time") s.max_mission_time = p.num();
    else if (key == "seed") s.seed = static_cast<std::uint64_t>(p.num());
    else if (key == "planner") {
      const std::string v = p.word();
      if (v == "react") s.planner = PlannerKind::kReact;
      else if (v == "baseline") s.planner = PlannerKind::kBaseline;
      else p.fail("planner must be 'react' or 'baseline'");
    } else {
      p.fail("unknown key '" + key + "'");
    }
    p.done();
  }

  if (!have_bounds_min || !have_bounds_max) {
    throw std::runtime_error(path + ": bounds_min and bounds_max are required");
  }
  if (s.resolution <= 0 || s.truncation < s.resolution) {
    throw std::runtime_error(path + ": need resolution > 0 and truncation >= resolution");
  }
  if (s.delta <= 0 || s.dt <= 0 || s.l_max <= 0 || s.reach_radius <= 0) {
    throw std::runtime_error(path + ": lengths and dt must be positive");
  }
  return s;
}

PointCloud sample_primitives(const std::vector<CylinderSpec>& cylinders,
                             const std::vector<BoxSpec>& boxes,
                             double spacing) {
  PointCloud cloud;
  for (const CylinderSpec& c : cylinders) {
    Vec3 e1, e2;
    orthonormal_frame(c.axis, e1, e2);
    const Vec3 dir = c.axis.normalized();
    const int n_axial = std::max(2, static_cast<int>(std::ceil(c.length / spacing)) + 1);
    const int n_ang = std::max(
        8, static_cast<int>(std::ceil(2.0 * M_PI * c.radius / spacing)));
    for (int ia = 0; ia < n_axial; ++ia) {
      const double h = c.length * ia / (n_axial - 1);
      for (int k = 0; k < n_ang; ++k) {
        const double th = 2.0 * M_PI * k / n_ang;
        cloud.points.push_back(c.base + dir * h +
                               c.radius * (std::cos(th) * e1 + std::sin(th) * e2));
      }
    }
    // end caps, so paths cannot cut through the hollow interior
    const int n_rad = std::max(1, static_cast<int>(std::ceil(c.radius / spacing)));
    for (int ir = 0; ir <= n_rad; ++ir) {
      const double r = c.radius * ir / n_rad;
      const int n_c = std::max(4, static_cast<int>(std::ceil(2.0 * M_PI * r / spacing)));
      for (int k = 0; k < n_c; ++k) {
        const double th = 2.0 * M_PI * k / n_c;
        const Vec3 rim = r * (std::cos(th) * e1 + std::sin(th) * e2);
        cloud.points.push_back(c.base + rim);
        cloud.points.push_back(c.base + dir * c.length + rim);
      }
    }
  }
  for (const BoxSpec& b : boxes) {
    const Vec3& h = b.half_extents;
    for (int axis = 0; axis < 3; ++axis) {
      const int u = (axis + 1) % 3, v = (axis + 2) % 3;
      const int nu = std::max(2, static_cast<int>(std::ceil(2 * h[u] / spacing)) + 1);
      const int nv = std::max(2, static_cast<int>(std::ceil(2 * h[v] / spacing)) + 1);
      for (int side : {-1, 1}) {
        for (int iu = 0; iu < nu; ++iu) {
          for (int iv = 0; iv < nv; ++iv) {
            Vec3 q = b.center;
            q[axis] += side * h[axis];
            q[u] += -h[u] + 2 * h[u] * iu / (nu - 1);
            q[v] += -h[v] + 2 * h[v] * iv / (nv - 1);
            cloud.points.push_back(q);
          }
        }
      }
    }
  }
  return cloud;
}

std::vector<Vec3> make_helix_waypoints(const HelixSpec& spec) {
  std::vector<Vec3> out;
  Vec3 e1, e2;
  orthonormal_frame(spec.axis, e1, e2);
  const Vec3 dir = spec.axis.normalized();
  const int n = std::max(1, static_cast<int>(std::llround(spec.turns * spec.waypoints_per_turn)));
  out.reserve(n + 1);
  for (int k = 0; k <= n; ++k) {
    const double t = static_cast<double>(k) / spec.waypoints_per_turn;  // turns
    const double th = 2.0 * M_PI * t;
    out.push_back(spec.base + dir * (spec.pitch * t) +
                  spec.radius * (std::cos(th) * e1 + std::sin(th) * e2));
  }
  return out;
}

Environment build_environment(const Scenario& s) {
  Environment env;

  PointCloud cloud = sample_primitives(s.cylinders, s.boxes, s.resolution * 0.5);
  if (!s.point_cloud_file.empty()) {
    const PointCloud extra = load_point_cloud(s.point_cloud_file);
    cloud.points.insert(cloud.points.end(), extra.points.begin(),
                        extra.points.end());
  }
  env.grid = build_sdf(cloud, s.bounds, s.resolution, s.truncation);

  if (!s.mesh_file.empty()) {
    env.mesh = load_obj_mesh(s.mesh_file);
  } else if (s.mesh_cylinder) {
    const MeshCylinderSpec& m = *s.mesh_cylinder;
    env.mesh = make_tube_mesh(m.base, m.axis, m.radius, m.length,
                              m.radial_segments, m.axial_segments);
  }

  if (!s.waypoints_file.empty()) {
    env.waypoints = load_point_cloud(s.waypoints_file).points;
  } else if (s.helix) {
    env.waypoints = make_helix_waypoints(*s.helix);
  }
  if (env.waypoints.empty()) {
    throw std::runtime_error("scenario produced no waypoints");
  }

  // Nudge any waypoint that violates the vehicle margin radially outward
  // from the helix axis (or skyward without one).
  for (Vec3& w : env.waypoints) {
    if (!env.grid.is_in_collision(w, s.margin_vehicle)) continue;
    Vec3 dir(0, 0, 1);
    if (s.helix) {
      const Vec3 axis = s.helix->axis.normalized();
      const Vec3 rel = w - s.helix->base;
      const Vec3 radial = rel - axis * rel.dot(axis);
      if (radial.norm() > 1e-9) dir = radial.normalized();
    }
    for (int tries = 0; tries < 100; ++tries) {
      w += dir * (s.resolution * 0.5);
      if (!env.grid.is_in_collision(w, s.margin_vehicle)) break;
    }
  }
  return env;
}

}  // namespace tetherplan
