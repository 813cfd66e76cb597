#pragma once

#include <string>
#include <vector>

#include "tetherplan/planner.hpp"
#include "tetherplan/scenario.hpp"

namespace tetherplan {

struct VehicleState {
  Vec3 position{Vec3::Zero()};
  double yaw = 0.0;
  double max_speed = 0.4;
  double max_yaw_rate = 2.0;
};

/// First-order kinematic tracker: moves toward the target at up to
/// max_speed * dt and turns the yaw toward the look-at bearing at up to
/// max_yaw_rate * dt.
VehicleState step_vehicle(const VehicleState& state, const Vec3& target,
                          const Vec3& look_at, double dt);

enum class MissionPhase { kInspect, kReturn };

struct LogRow {
  double time = 0.0;
  Vec3 position{Vec3::Zero()};
  Vec3 target{Vec3::Zero()};
  double tether_length = 0.0;
  PlannerMode mode = PlannerMode::kNormal;
  MissionPhase phase = MissionPhase::kInspect;
  std::size_t waypoint_index = 0;
  double coverage = 0.0;
  bool replan_event = false;
  bool soft_limit = false;
};

struct MissionSummary {
  std::string planner;
  double inspection_time = 0.0;
  double recovery_time = 0.0;  // baseline: charged disentangling estimate
  double total_time = 0.0;
  double final_coverage = 0.0;
  double max_tether_length = 0.0;
  double exceedance_duration = 0.0;  // dt * rows with length > l_max
  double final_tether_length = 0.0;
  double anchor_to_end_distance = 0.0;
  bool aborted = false;
  std::size_t completed_waypoints = 0;
  std::size_t total_waypoints = 0;
  std::uint64_t seed = 0;
};

struct MissionLog {
  std::vector<LogRow> rows;
  std::vector<double> replan_wall_seconds;  // one entry per replan event
  std::vector<Vec3> final_tether;
  MissionSummary summary;
};

/// Runs one mission: per tick, tether update -> planner -> vehicle step ->
/// coverage -> log. After the last waypoint the return phase runs: react
/// flies home via the disentanglement search; the baseline's disentangling
/// return is charged as recovery time from the final taut tether length
/// (the logged rows and final tether keep its end-of-inspection state).
MissionLog run_mission(const Scenario& scenario, const Environment& env,
                       PlannerKind kind, std::uint64_t seed);

/// Convenience overload building the environment internally.
MissionLog run_mission(const Scenario& scenario, PlannerKind kind,
                       std::uint64_t seed);

/// Writes mission.csv, summary.csv, tether_final.csv, and timing.csv into
/// dir (created if missing). mission.csv is deterministic for a fixed seed;
/// wall-clock timings go to timing.csv only.
void write_log(const MissionLog& log, const std::string& dir);

}  // namespace tetherplan
