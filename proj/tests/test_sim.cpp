#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "tetherplan/simulator.hpp"

using namespace tetherplan;

namespace {

Scenario free_space_scenario() {
  Scenario s;
  s.resolution = 0.1;
  s.truncation = 1.0;
  s.bounds = {Vec3(-4, -4, -2), Vec3(4, 4, 2)};
  s.anchor = Vec3(-2, 0, 0);
  s.start = Vec3(-1.8, 0, 0);
  HelixSpec h;
  h.base = Vec3(0, 0, -0.3);
  h.axis = Vec3(0, 0, 1);
  h.radius = 1.0;
  h.pitch = 0.3;
  h.turns = 1.0;
  h.waypoints_per_turn = 6;
  s.helix = h;
  s.l_max = 12.0;
  s.delta = 0.1;
  s.margin_tether = 0.05;
  s.margin_vehicle = 0.1;
  s.dt = 0.1;
  s.max_speed = 0.5;
  s.max_mission_time = 300.0;
  s.reach_radius = 0.15;
  return s;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("step_vehicle clamps translation and lands exactly") {
  VehicleState v;
  v.position = Vec3(0, 0, 0);
  v.max_speed = 0.5;
  SUBCASE("partial move toward a far target") {
    const VehicleState n =
        step_vehicle(v, Vec3(1, 0, 0), Vec3(1, 0, 0), 0.1);
    CHECK((n.position - Vec3(0.05, 0, 0)).norm() < 1e-12);
  }
  SUBCASE("holding position") {
    const VehicleState n = step_vehicle(v, v.position, Vec3(1, 0, 0), 0.1);
    CHECK((n.position - v.position).norm() == 0.0);
  }
  SUBCASE("landing on a near target") {
    const VehicleState n =
        step_vehicle(v, Vec3(0.01, 0, 0), Vec3(1, 0, 0), 0.1);
    CHECK((n.position - Vec3(0.01, 0, 0)).norm() < 1e-12);
  }
  SUBCASE("yaw rate limit") {
    v.max_yaw_rate = 1.0;
    v.yaw = 0.0;
    const VehicleState n =
        step_vehicle(v, v.position, Vec3(0, 1, 0), 0.1);  // bearing pi/2
    CHECK(n.yaw == doctest::Approx(0.1));
  }
}

TEST_CASE("trivial free-space mission completes for both planners") {
  const Scenario s = free_space_scenario();
  const Environment env = build_environment(s);
  for (const PlannerKind kind : {PlannerKind::kReact, PlannerKind::kBaseline}) {
    const MissionLog log = run_mission(s, env, kind, 1);
    CHECK_FALSE(log.summary.aborted);
    CHECK(log.summary.completed_waypoints == env.waypoints.size());
    REQUIRE_FALSE(log.rows.empty());
    CHECK(log.rows.back().mode == (kind == PlannerKind::kReact
                                       ? PlannerMode::kRecovery
                                       : PlannerMode::kNormal));
    CHECK(log.summary.total_time ==
          doctest::Approx(log.summary.inspection_time +
                          log.summary.recovery_time));
    // tether end stays with the vehicle
    for (const LogRow& row : log.rows) {
      CHECK(row.tether_length >= 0.0);
    }
    // exceedance accounting identity
    double exceed = 0.0;
    for (const LogRow& row : log.rows) {
      if (row.tether_length > s.l_max) exceed += s.dt;
    }
    CHECK(log.summary.exceedance_duration == doctest::Approx(exceed));
  }
}

TEST_CASE("mission rows are deterministic for a fixed seed") {
  const Scenario s = free_space_scenario();
  const Environment env = build_environment(s);
  const MissionLog a = run_mission(s, env, PlannerKind::kReact, 7);
  const MissionLog b = run_mission(s, env, PlannerKind::kReact, 7);
  REQUIRE(a.rows.size() == b.rows.size());
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    CHECK((a.rows[i].position - b.rows[i].position).norm() == 0.0);
    CHECK(a.rows[i].tether_length == b.rows[i].tether_length);
    CHECK(a.rows[i].coverage == b.rows[i].coverage);
  }
}

TEST_CASE("time budget aborts with a partial log") {
  Scenario s = free_space_scenario();
  s.max_mission_time = 1.0;  // cannot finish in ten ticks
  const Environment env = build_environment(s);
  const MissionLog log = run_mission(s, env, PlannerKind::kBaseline, 1);
  CHECK(log.summary.aborted);
  CHECK(log.rows.size() == 10);
  CHECK(log.summary.completed_waypoints < env.waypoints.size());
}

TEST_CASE("write_log emits the four CSV artifacts") {
  const Scenario s = free_space_scenario();
  const Environment env = build_environment(s);
  const MissionLog log = run_mission(s, env, PlannerKind::kBaseline, 1);
  const auto dir =
      (std::filesystem::temp_directory_path() / "tp_logs").string();
  write_log(log, dir);

  const std::string mission = slurp(dir + "/mission.csv");
  CHECK(mission.rfind("time,x,y,z,", 0) == 0);
  std::size_t lines = 0;
  for (char c : mission) lines += (c == '\n');
  CHECK(lines == log.rows.size() + 1);

  CHECK(slurp(dir + "/summary.csv").rfind("key,value", 0) == 0);
  const std::string tether = slurp(dir + "/tether_final.csv");
  CHECK(tether.rfind("node_index,x,y,z", 0) == 0);
  CHECK_FALSE(log.final_tether.empty());
  CHECK(slurp(dir + "/timing.csv").rfind("replan_index", 0) == 0);
}

TEST_CASE("write_log with an empty log produces header-only files") {
  MissionLog log;
  const auto dir =
      (std::filesystem::temp_directory_path() / "tp_logs_empty").string();
  write_log(log, dir);
  CHECK(slurp(dir + "/mission.csv") ==
        "time,x,y,z,target_x,target_y,target_z,tether_length,mode,phase,"
        "waypoint_index,coverage,replan_event,soft_limit\n");
  CHECK(slurp(dir + "/tether_final.csv") == "node_index,x,y,z\n");
}
