#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include "oracles.hpp"
#include "tetherplan/mesh.hpp"
#include "tetherplan/point_cloud.hpp"
#include "tetherplan/sdf_grid.hpp"

using namespace tetherplan;

namespace {

std::string write_temp(const std::string& name, const std::string& content) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream out(path);
  out << content;
  return path.string();
}

SdfGrid grid_around_points(const std::vector<Vec3>& pts, double res,
                           double trunc, double pad = 1.5) {
  PointCloud cloud;
  cloud.points = pts;
  Aabb box;
  box.min = Vec3::Constant(1e9);
  box.max = Vec3::Constant(-1e9);
  for (const Vec3& p : pts) {
    box.min = box.min.cwiseMin(p);
    box.max = box.max.cwiseMax(p);
  }
  if (pts.empty()) {
    box.min = Vec3::Zero();
    box.max = Vec3::Zero();
  }
  box = box.inflated(pad);
  return build_sdf(cloud, box, res, trunc);
}

}  // namespace

TEST_CASE("load_point_cloud parses one point per line") {
  const auto path = write_temp("pc_ok.xyz", "0 0 0\n1 2 3\n");
  const PointCloud c = load_point_cloud(path);
  REQUIRE(c.size() == 2);
  CHECK(c.points[0] == Vec3(0, 0, 0));
  CHECK(c.points[1] == Vec3(1, 2, 3));
}

TEST_CASE("load_point_cloud accepts empty files and blank lines") {
  CHECK(load_point_cloud(write_temp("pc_empty.xyz", "")).empty());
  CHECK(load_point_cloud(write_temp("pc_blank.xyz", "\n  \n")).empty());
}

TEST_CASE("load_point_cloud reports the offending line") {
  const auto path = write_temp("pc_bad.xyz", "0 0\n");
  CHECK_THROWS_WITH_AS(load_point_cloud(path),
                       doctest::Contains(":1:"), std::runtime_error);
  CHECK_THROWS_AS(load_point_cloud(write_temp("pc_bad2.xyz", "1 2 3 4\n")),
                  std::runtime_error);
  CHECK_THROWS_AS(load_point_cloud("/nonexistent/file.xyz"),
                  std::runtime_error);
}

TEST_CASE("build_sdf distance from a single occupied voxel") {
  const SdfGrid g = grid_around_points({Vec3(0, 0, 0)}, 0.1, 2.0);
  const double d = g.distance_at(Vec3(1, 0, 0));
  CHECK(d == doctest::Approx(1.0).epsilon(0.2));
  CHECK(std::abs(d - 1.0) <= 0.1 * std::sqrt(3.0));
}

TEST_CASE("build_sdf on an empty cloud is free everywhere") {
  PointCloud cloud;
  const SdfGrid g = build_sdf(cloud, {Vec3(-1, -1, -1), Vec3(1, 1, 1)}, 0.1, 2.0);
  CHECK(g.distance_at(Vec3(0, 0, 0)) == doctest::Approx(2.0));
  CHECK(g.distance_at(Vec3(0.7, -0.3, 0.2)) == doctest::Approx(2.0));
  CHECK(g.occupied_count() == 0);
}

TEST_CASE("build_sdf midpoint of two points") {
  const SdfGrid g =
      grid_around_points({Vec3(0, 0, 0), Vec3(1, 0, 0)}, 0.1, 2.0);
  const double d = g.distance_at(Vec3(0.5, 0, 0));
  CHECK(std::abs(d - 0.5) <= 0.1 * std::sqrt(3.0));
}

TEST_CASE("build_sdf rejects bad arguments") {
  PointCloud cloud;
  CHECK_THROWS_AS(build_sdf(cloud, {Vec3(0, 0, 0), Vec3(1, 1, 1)}, -0.1, 1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(build_sdf(cloud, {Vec3(0, 0, 0), Vec3(1, 1, 1)}, 0.2, 0.1),
                  std::invalid_argument);
  CHECK_THROWS_AS(build_sdf(cloud, {Vec3(0, 0, 0), Vec3(0, 1, 1)}, 0.1, 1.0),
                  std::invalid_argument);
}

TEST_CASE("build_sdf warns when bounds exclude every point") {
  PointCloud cloud;
  cloud.points = {Vec3(10, 10, 10)};
  const SdfGrid g = build_sdf(cloud, {Vec3(0, 0, 0), Vec3(1, 1, 1)}, 0.1, 1.0);
  CHECK(g.all_free_warning());
  CHECK(g.clipped_points() == 1);
  CHECK(g.distance_at(Vec3(0.5, 0.5, 0.5)) == doctest::Approx(1.0));
}

TEST_CASE("distance_at conventions") {
  const SdfGrid g = grid_around_points({Vec3(0, 0, 0)}, 0.1, 2.0);
  // at the occupied voxel center
  CHECK(g.distance_at(Vec3(0.05, 0.05, 0.05)) <= 0.0);
  // far outside the grid box
  CHECK(g.distance_at(Vec3(100, 100, 100)) == doctest::Approx(2.0));
}

TEST_CASE("distance_at interpolates linearly between voxel centers") {
  const SdfGrid g = grid_around_points({Vec3(0, 0, 0)}, 0.1, 2.0);
  // two adjacent free voxel centers along +x from the occupied voxel
  const Vec3 c1 = Vec3(0.05, 0.05, 0.05) + Vec3(0.4, 0, 0);
  const Vec3 c2 = Vec3(0.05, 0.05, 0.05) + Vec3(0.5, 0, 0);
  const double v1 = g.distance_at(c1);
  const double v2 = g.distance_at(c2);
  const double mid = g.distance_at((c1 + c2) / 2);
  CHECK(mid == doctest::Approx((v1 + v2) / 2).epsilon(1e-9));
}

TEST_CASE("is_in_collision thresholds") {
  const SdfGrid g = grid_around_points({Vec3(0, 0, 0)}, 0.05, 2.0);
  CHECK_FALSE(g.is_in_collision(Vec3(1.0, 0, 0), 0.1));
  CHECK(g.is_in_collision(Vec3(0.025, 0.025, 0.025), 1e-6));

  // point at distance 0.149 from the occupied voxel center, margin 0.15;
  // placed along a lattice axis so interpolation is exact
  const Vec3 center(0.025, 0.025, 0.025);
  const Vec3 q = center + Vec3(0.149, 0, 0);
  CHECK(oracles::brute_force_distance(g, q) == doctest::Approx(0.149));
  CHECK(g.is_in_collision(q, 0.15));
}

TEST_CASE("is_in_collision margin monotonicity") {
  const SdfGrid g =
      grid_around_points({Vec3(0, 0, 0), Vec3(0.4, 0.2, -0.1)}, 0.05, 1.0);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int k = 0; k < 200; ++k) {
    const Vec3 p(u(rng), u(rng), u(rng));
    const double m1 = std::abs(u(rng)) * 0.5;
    const double m2 = m1 + std::abs(u(rng)) * 0.5;
    if (g.is_in_collision(p, m1)) CHECK(g.is_in_collision(p, m2));
  }
}

TEST_CASE("line_of_sight basics") {
  const SdfGrid empty = grid_around_points({}, 0.1, 2.0);
  CHECK(empty.line_of_sight(Vec3(-1, 0, 0), Vec3(1, 0.5, 0.2), 0.2));

  const SdfGrid g = grid_around_points({Vec3(0, 0, 0)}, 0.05, 2.0);
  CHECK_FALSE(g.line_of_sight(Vec3(-0.5, 0.025, 0.025), Vec3(0.5, 0.025, 0.025),
                              0.05));
}

TEST_CASE("line_of_sight grazing clearance") {
  // single occupied voxel; segment passes at 1.3 x margin
  const SdfGrid g = grid_around_points({Vec3(0, 0, 0)}, 0.03, 2.0);
  const Vec3 center(0.015, 0.015, 0.015);
  const double margin = 0.15;
  const Vec3 a = center + Vec3(-1.0, 1.3 * margin, 0);
  const Vec3 b = center + Vec3(1.0, 1.3 * margin, 0);
  CHECK(oracles::point_segment_distance(a, b, center) ==
        doctest::Approx(1.3 * margin));
  CHECK(g.line_of_sight(a, b, margin));
}

TEST_CASE("line_of_sight symmetry and single-point consistency") {
  const SdfGrid g =
      grid_around_points({Vec3(0, 0, 0), Vec3(0.3, 0.3, 0)}, 0.05, 1.0);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int k = 0; k < 100; ++k) {
    const Vec3 a(u(rng), u(rng), u(rng));
    const Vec3 b(u(rng), u(rng), u(rng));
    const double m = 0.02 + 0.2 * std::abs(u(rng));
    CHECK(g.line_of_sight(a, b, m) == g.line_of_sight(b, a, m));
    CHECK(g.line_of_sight(a, a, m) == !g.is_in_collision(a, m));
  }
}

TEST_CASE("distance_at Lipschitz bound") {
  const SdfGrid g = grid_around_points(
      {Vec3(0, 0, 0), Vec3(0.5, -0.2, 0.3), Vec3(-0.4, 0.4, 0)}, 0.05, 1.0);
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(-1.2, 1.2);
  const double slack = 2.0 * 0.05 * std::sqrt(3.0);
  for (int k = 0; k < 300; ++k) {
    const Vec3 p(u(rng), u(rng), u(rng));
    const Vec3 q(u(rng), u(rng), u(rng));
    CHECK(std::abs(g.distance_at(p) - g.distance_at(q)) <=
          (p - q).norm() + slack);
  }
}

TEST_CASE("distance_at matches brute force on a random cloud") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-0.8, 0.8);
  std::vector<Vec3> pts;
  for (int k = 0; k < 150; ++k) pts.emplace_back(u(rng), u(rng), u(rng));
  const SdfGrid g = grid_around_points(pts, 0.08, 1.5, 0.8);
  const double tol = 0.08 * std::sqrt(3.0);
  for (int k = 0; k < 100; ++k) {
    const Vec3 q(u(rng), u(rng), u(rng));
    CHECK(std::abs(g.distance_at(q) - oracles::brute_force_distance(g, q)) <=
          tol + 1e-9);
  }
}

TEST_CASE("obj loader round trip") {
  const auto path = write_temp("mesh_ok.obj",
                               "# simple\n"
                               "v 0 0 0\nv 1 0 0\nv 0 1 0\n"
                               "f 1 2 3\n");
  const TriangleMesh m = load_obj_mesh(path);
  REQUIRE(m.triangle_count() == 1);
  CHECK(m.normals[0].norm() == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(m.normals[0].z() == doctest::Approx(1.0));
  CHECK(m.centroids[0] == Vec3(1.0 / 3, 1.0 / 3, 0));
}

TEST_CASE("obj loader rejects unsupported content") {
  CHECK_THROWS_AS(load_obj_mesh(write_temp("mesh_quad.obj",
                                           "v 0 0 0\nv 1 0 0\nv 1 1 0\nv 0 1 0\n"
                                           "f 1 2 3 4\n")),
                  std::runtime_error);
  CHECK_THROWS_AS(load_obj_mesh(write_temp("mesh_kw.obj", "vn 0 0 1\n")),
                  std::runtime_error);
  CHECK_THROWS_AS(load_obj_mesh(write_temp("mesh_idx.obj",
                                           "v 0 0 0\nv 1 0 0\nv 0 1 0\nf 1 2 9\n")),
                  std::invalid_argument);
}

TEST_CASE("tube mesh has outward unit normals") {
  const TriangleMesh m =
      make_tube_mesh(Vec3(0, 0, 0), Vec3(0, 0, 1), 0.35, 2.0, 24, 10);
  REQUIRE(m.triangle_count() == 24 * 10 * 2);
  for (std::size_t t = 0; t < m.triangle_count(); ++t) {
    CHECK(m.normals[t].norm() == doctest::Approx(1.0).epsilon(1e-6));
    Vec3 radial = m.centroids[t];
    radial.z() = 0.0;
    CHECK(m.normals[t].dot(radial.normalized()) > 0.8);
  }
}
