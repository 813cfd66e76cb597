#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "tetherplan/coverage.hpp"

using namespace tetherplan;

namespace {

TriangleMesh single_triangle(const Vec3& center, bool flip = false) {
  TriangleMesh m;
  m.vertices = {center + Vec3(0, -0.1, -0.1), center + Vec3(0, 0.1, -0.1),
                center + Vec3(0, 0, 0.15)};
  if (flip) {
    m.triangles.push_back({0, 2, 1});
  } else {
    m.triangles.push_back({0, 1, 2});
  }
  finalize_mesh(m);
  return m;
}

TriangleMesh quad_strip(int quads) {
  // flat strip of triangles in the y-z plane, normals along -x
  TriangleMesh m;
  for (int k = 0; k <= quads; ++k) {
    m.vertices.push_back(Vec3(1.0, 0.2 * k, 0));
    m.vertices.push_back(Vec3(1.0, 0.2 * k, 0.2));
  }
  for (int k = 0; k < quads; ++k) {
    m.triangles.push_back({2 * k, 2 * k + 1, 2 * k + 2});
    m.triangles.push_back({2 * k + 1, 2 * k + 3, 2 * k + 2});
  }
  finalize_mesh(m);
  return m;
}

}  // namespace

TEST_CASE("visibility conditions") {
  const CameraModel cam{70.0, 2.0};
  const Vec3 pos(0, 0, 0);
  const Vec3 ahead(1, 0, 0);

  SUBCASE("facing triangle straight ahead is visible") {
    const TriangleMesh m = single_triangle(Vec3(1, 0, 0), true);
    CHECK(m.normals[0].x() == doctest::Approx(-1.0));
    CHECK(visible_triangles(pos, ahead, cam, m).size() == 1);
  }
  SUBCASE("back-facing triangle is culled") {
    const TriangleMesh m = single_triangle(Vec3(1, 0, 0), false);
    CHECK(m.normals[0].x() == doctest::Approx(1.0));
    CHECK(visible_triangles(pos, ahead, cam, m).empty());
  }
  SUBCASE("outside the field of view cone") {
    // bearing 40 degrees off axis against a 35-degree half angle
    const double th = 40.0 * M_PI / 180.0;
    const TriangleMesh m =
        single_triangle(Vec3(std::cos(th), std::sin(th), 0), true);
    CHECK(visible_triangles(pos, ahead, cam, m).empty());
  }
  SUBCASE("outside the range") {
    const TriangleMesh m = single_triangle(Vec3(2.5, 0, 0), true);
    CHECK(visible_triangles(pos, ahead, cam, m).empty());
  }
}

TEST_CASE("coverage ratio accumulates unique triangles") {
  const TriangleMesh m = quad_strip(2);  // 4 triangles
  REQUIRE(m.triangle_count() == 4);
  CoverageTracker tracker(m);
  const CameraModel cam{70.0, 1.5};

  // sees the first two triangles only
  const Vec3 pos(0.1, 0.1, 0.1);
  const Vec3 dir = (m.centroids[0] - pos).normalized();
  const double r1 = tracker.update_and_ratio(pos, dir, cam);
  CHECK(r1 == doctest::Approx(0.5));

  // re-observation changes nothing
  const double r2 = tracker.update_and_ratio(pos, dir, cam);
  CHECK(r2 == doctest::Approx(r1));

  // a second pose completes the strip
  const Vec3 pos2(0.1, 0.35, 0.1);
  const Vec3 dir2 = (m.centroids[3] - pos2).normalized();
  const double r3 = tracker.update_and_ratio(pos2, dir2, cam);
  CHECK(r3 == doctest::Approx(1.0));
}

TEST_CASE("empty mesh reports full coverage") {
  TriangleMesh m;
  CoverageTracker tracker(m);
  CHECK(tracker.ratio() == doctest::Approx(1.0));
  CHECK(tracker.update_and_ratio(Vec3(0, 0, 0), Vec3(1, 0, 0), CameraModel{}) ==
        doctest::Approx(1.0));
}

TEST_CASE("ratio is monotone and order-invariant") {
  const TriangleMesh m = make_box_mesh(Vec3(0, 0, 0), Vec3(0.2, 0.2, 0.2));
  const CameraModel cam{70.0, 1.5};

  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<Vec3> poses;
  for (int k = 0; k < 30; ++k) {
    Vec3 p(u(rng), u(rng), u(rng));
    if (p.norm() < 0.45) p = p.normalized() * 0.6;
    poses.push_back(p);
  }

  CoverageTracker fwd(m);
  double prev = 0.0;
  for (const Vec3& p : poses) {
    const double r = fwd.update_and_ratio(p, (-p).normalized(), cam);
    CHECK(r >= prev - 1e-12);
    prev = r;
  }

  std::vector<Vec3> shuffled = poses;
  std::shuffle(shuffled.begin(), shuffled.end(), rng);
  CoverageTracker rev(m);
  double last = 0.0;
  for (const Vec3& p : shuffled) {
    last = rev.update_and_ratio(p, (-p).normalized(), cam);
  }
  CHECK(last == doctest::Approx(prev));
}

TEST_CASE("a full orbit of a convex mesh reaches complete coverage") {
  const TriangleMesh m = make_box_mesh(Vec3(0, 0, 0), Vec3(0.2, 0.2, 0.2));
  const CameraModel cam{70.0, 1.5};
  CoverageTracker tracker(m);
  double ratio = 0.0;
  // poses over a sphere of directions, view aimed at the mesh center
  for (int iy = -2; iy <= 2; ++iy) {
    for (int k = 0; k < 12; ++k) {
      const double th = 2.0 * M_PI * k / 12;
      const double phi = iy * (M_PI / 5.0);
      const Vec3 p = 0.8 * Vec3(std::cos(th) * std::cos(phi),
                                std::sin(th) * std::cos(phi), std::sin(phi));
      ratio = tracker.update_and_ratio(p, (-p).normalized(), cam);
    }
  }
  CHECK(ratio == doctest::Approx(1.0));
}
