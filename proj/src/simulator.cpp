#include "tetherplan/simulator.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace tetherplan {

VehicleState step_vehicle(const VehicleState& state, const Vec3& target,
                          const Vec3& look_at, double dt) {
  if (dt <= 0.0) throw std::invalid_argument("step_vehicle: dt must be > 0");
  VehicleState next = state;
  const Vec3 d = target - state.position;
  const double dist = d.norm();
  if (dist > 1e-12) {
    const double move = std::min(state.max_speed * dt, dist);
    next.position = state.position + d * (move / dist);
  }
  const Vec3 h = look_at - next.position;
  const double hn = std::hypot(h.x(), h.y());
  if (hn > 1e-9) {
    const double desired = std::atan2(h.y(), h.x());
    const double delta = wrap_angle(desired - state.yaw);
    const double turn = std::clamp(delta, -state.max_yaw_rate * dt,
                                   state.max_yaw_rate * dt);
    next.yaw = wrap_angle(state.yaw + turn);
  }
  return next;
}

namespace {

Vec3 yaw_direction(double yaw) { return Vec3(std::cos(yaw), std::sin(yaw), 0.0); }

// The simulator aims the camera at the structure axis when a helix is
// configured, otherwise at the current target.
Vec3 look_at_point(const Scenario& s, const Vec3& pos, const Vec3& target) {
  if (!s.helix) return target;
  const Vec3 axis = s.helix->axis.normalized();
  const double len =
      s.helix->pitch * s.helix->turns + 1e-9;
  const double t = std::clamp((pos - s.helix->base).dot(axis), 0.0, len);
  return s.helix->base + axis * t;
}

RecoverySearchConfig search_config(const Scenario& s, const SdfGrid& grid,
                                   std::uint64_t seed) {
  RecoverySearchConfig cfg;
  cfg.delta = s.delta;
  cfg.margin_tether = s.margin_tether;
  cfg.margin_vehicle = s.margin_vehicle;
  cfg.sample_bounds = grid.bounds().inflated(s.margin_vehicle);
  cfg.rrt_step = s.rrt_step_or_default();
  cfg.rrt_max_iterations = s.rrt_max_iterations;
  cfg.rrt_goal_bias = s.rrt_goal_bias;
  cfg.rrt_post_goal_iterations = s.rrt_post_goal_iterations;
  cfg.pivot_stride = s.pivot_stride;
  cfg.seed = seed;
  return cfg;
}

RefineConfig refine_config(const Scenario& s) {
  RefineConfig cfg;
  cfg.margin = s.margin_vehicle;
  cfg.offset_gain = s.offset_gain;
  cfg.max_iter = s.refine_max_iter;
  cfg.resample_spacing = s.delta;
  return cfg;
}

const char* mode_name(PlannerMode m) {
  return m == PlannerMode::kNormal ? "NORMAL" : "RECOVERY";
}
const char* phase_name(MissionPhase p) {
  return p == MissionPhase::kInspect ? "INSPECT" : "RETURN";
}

}  // namespace

MissionLog run_mission(const Scenario& scenario, const Environment& env,
                       PlannerKind kind, std::uint64_t seed) {
  const SdfGrid& grid = env.grid;

  TetherOptions topt;
  topt.spacing = scenario.delta;
  topt.margin = scenario.margin_tether;

  Mission mission;
  mission.waypoints = env.waypoints;
  mission.l_max = scenario.l_max;
  mission.reach_radius = scenario.reach_radius;

  PlannerConfig pcfg;
  pcfg.lookahead = scenario.lookahead;
  pcfg.recovery_headroom = scenario.recovery_headroom;
  pcfg.search = search_config(scenario, grid, mix_seed(seed, 0x11));
  pcfg.refine = refine_config(scenario);
  EntanglementPlanner planner(mission, pcfg);

  VehicleState vehicle;
  vehicle.position = scenario.start;
  vehicle.max_speed = scenario.max_speed;
  vehicle.max_yaw_rate = scenario.max_yaw_rate;
  {
    const Vec3 h = look_at_point(scenario, vehicle.position, env.waypoints[0]) -
                   vehicle.position;
    if (std::hypot(h.x(), h.y()) > 1e-9) vehicle.yaw = std::atan2(h.y(), h.x());
  }

  TetherPath tether;
  tether.spacing = scenario.delta;
  tether.nodes = {scenario.anchor};
  {
    const TetherUpdateResult r =
        update_tether(tether, vehicle.position, grid, topt);
    if (r.rov_rejected) {
      throw std::runtime_error("run_mission: start position violates the tether margin");
    }
    tether = r.path;
  }

  CoverageTracker coverage(env.mesh);
  MissionLog log;
  log.summary.planner = kind == PlannerKind::kReact ? "react" : "baseline";
  log.summary.seed = seed;
  log.summary.total_waypoints = env.waypoints.size();

  MissionPhase phase = MissionPhase::kInspect;
  std::size_t baseline_k = 0;
  std::vector<Vec3> return_path;
  bool return_soft = false;
  double inspect_ticks = 0.0, return_ticks = 0.0;
  bool done = false, aborted = false;
  const int max_ticks =
      static_cast<int>(std::ceil(scenario.max_mission_time / scenario.dt));

  for (int tick = 0; tick < max_ticks && !done; ++tick) {
    const double t = tick * scenario.dt;

    const TetherUpdateResult tres =
        update_tether(tether, vehicle.position, grid, topt);
    if (!tres.rov_rejected) tether = tres.path;
    const double tether_len = compute_length(tether);

    Vec3 target = vehicle.position;
    PlannerMode mode = PlannerMode::kNormal;
    bool replan_event = false, soft = false;
    std::size_t k_logged = 0;

    if (phase == MissionPhase::kInspect) {
      if (kind == PlannerKind::kReact) {
        const StepResult step = planner.step(tether, vehicle.position, grid);
        target = step.target;
        mode = planner.state().mode;
        soft = step.soft_limit;
        k_logged = planner.state().waypoint_index;
        if (step.entered_recovery) {
          replan_event = true;
          log.replan_wall_seconds.push_back(step.search_wall_seconds);
        }
        if (step.mission_complete) {
          // Switch to the flown return: disentangle back toward the start.
          const auto t0 = std::chrono::steady_clock::now();
          RecoverySearchConfig rcfg =
              search_config(scenario, grid, mix_seed(seed, 0x9e70));
          PathQuery home;
          home.start = scenario.anchor;
          home.goal = scenario.start;
          home.margin = scenario.margin_tether;
          home.bounds = rcfg.sample_bounds;
          home.step = scenario.rrt_step_or_default();
          home.max_iterations = scenario.rrt_max_iterations;
          home.goal_bias = scenario.rrt_goal_bias;
          home.post_goal_iterations = scenario.rrt_post_goal_iterations;
          home.rng_seed = mix_seed(seed, 0x401);
          const PlannedPath taut_home = plan_shortest_path(home, grid);
          const double t_home = taut_home.ok()
                                    ? taut_home.length
                                    : (scenario.start - scenario.anchor).norm();
          const double bound = 1.15 * t_home + 2.0 * scenario.delta;
          const RecoverySearchResult ret = de_entanglement_search(
              tether, scenario.start, bound, grid, rcfg);
          return_soft = !ret.feasible;
          std::vector<Vec3> raw = ret.hard_failure
                                      ? std::vector<Vec3>{vehicle.position,
                                                          scenario.start}
                                      : ret.recovery_path;
          const RefineResult refined =
              refine_recovery_path(raw, grid, refine_config(scenario));
          return_path = refined.path;
          phase = MissionPhase::kReturn;
          replan_event = true;
          log.replan_wall_seconds.push_back(
              std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                            t0)
                  .count());
          target = follow_path(return_path, vehicle.position, scenario.lookahead);
          mode = PlannerMode::kRecovery;
        }
      } else {
        k_logged = baseline_k;
        if (baseline_k < env.waypoints.size()) {
          target = env.waypoints[baseline_k];
          if (reached_waypoint(vehicle.position, env.waypoints[baseline_k],
                               scenario.reach_radius)) {
            ++baseline_k;
          }
        }
        if (baseline_k >= env.waypoints.size()) {
          // Disentangling return charged from the final taut tether length.
          log.summary.completed_waypoints = baseline_k;
          log.summary.recovery_time =
              (tether_len + (scenario.start - scenario.anchor).norm()) /
              scenario.max_speed;
          done = true;
        }
      }
    } else {
      mode = PlannerMode::kRecovery;
      soft = return_soft;
      k_logged = env.waypoints.size();
      target = follow_path(return_path, vehicle.position, scenario.lookahead);
      if (reached_waypoint(vehicle.position, return_path.back(),
                           scenario.reach_radius)) {
        done = true;
      }
    }

    if (done && kind == PlannerKind::kBaseline) {
      // Final state row for the baseline is the inspection-end state.
      LogRow row;
      row.time = t;
      row.position = vehicle.position;
      row.target = target;
      row.tether_length = tether_len;
      row.mode = mode;
      row.phase = phase;
      row.waypoint_index = k_logged;
      row.coverage = coverage.ratio();
      log.rows.push_back(row);
      inspect_ticks += 1.0;
      break;
    }

    vehicle = step_vehicle(vehicle, target,
                           look_at_point(scenario, vehicle.position, target),
                           scenario.dt);
    const double cov = coverage.update_and_ratio(
        vehicle.position, yaw_direction(vehicle.yaw), scenario.camera);

    LogRow row;
    row.time = t;
    row.position = vehicle.position;
    row.target = target;
    row.tether_length = tether_len;
    row.mode = mode;
    row.phase = phase;
    row.waypoint_index = k_logged;
    row.coverage = cov;
    row.replan_event = replan_event;
    row.soft_limit = soft;
    log.rows.push_back(row);

    if (phase == MissionPhase::kInspect) {
      inspect_ticks += 1.0;
    } else {
      return_ticks += 1.0;
    }
    if (done && phase == MissionPhase::kReturn) {
      log.summary.completed_waypoints = env.waypoints.size();
    }
    if (tick + 1 >= max_ticks) aborted = true;
  }

  // Settle the tether at the final vehicle position.
  {
    const TetherUpdateResult r =
        update_tether(tether, vehicle.position, grid, topt);
    if (!r.rov_rejected) tether = r.path;
  }
  log.final_tether = tether.nodes;

  MissionSummary& sum = log.summary;
  sum.aborted = aborted;
  if (kind == PlannerKind::kReact) {
    sum.completed_waypoints = planner.state().waypoint_index;
    sum.recovery_time = return_ticks * scenario.dt;
  }
  sum.inspection_time = inspect_ticks * scenario.dt;
  sum.total_time = sum.inspection_time + sum.recovery_time;
  sum.final_coverage = coverage.ratio();
  sum.final_tether_length = compute_length(tether);
  sum.anchor_to_end_distance = (vehicle.position - scenario.anchor).norm();
  for (const LogRow& row : log.rows) {
    sum.max_tether_length = std::max(sum.max_tether_length, row.tether_length);
    if (row.tether_length > scenario.l_max) {
      sum.exceedance_duration += scenario.dt;
    }
  }
  sum.max_tether_length = std::max(sum.max_tether_length, sum.final_tether_length);
  return log;
}

MissionLog run_mission(const Scenario& scenario, PlannerKind kind,
                       std::uint64_t seed) {
  const Environment env = build_environment(scenario);
  return run_mission(scenario, env, kind, seed);
}

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

}  // namespace

void write_log(const MissionLog& log, const std::string& dir) {
  std::filesystem::create_directories(dir);
  {
    std::ofstream out(dir + "/mission.csv");
    if (!out) throw std::runtime_error("cannot write " + dir + "/mission.csv");
    out << "time,x,y,z,target_x,target_y,target_z,tether_length,mode,phase,"
           "waypoint_index,coverage,replan_event,soft_limit\n";
    for (const LogRow& r : log.rows) {
      out << fmt(r.time) << ',' << fmt(r.position.x()) << ','
          << fmt(r.position.y()) << ',' << fmt(r.position.z()) << ','
          << fmt(r.target.x()) << ',' << fmt(r.target.y()) << ','
          << fmt(r.target.z()) << ',' << fmt(r.tether_length) << ','
          << mode_name(r.mode) << ',' << phase_name(r.phase) << ','
          << r.waypoint_index << ',' << fmt(r.coverage) << ','
          << (r.replan_event ? 1 : 0) << ',' << (r.soft_limit ? 1 : 0) << '\n';
    }
  }
  {
    const MissionSummary& s = log.summary;
    std::ofstream out(dir + "/summary.csv");
    if (!out) throw std::runtime_error("cannot write " + dir + "/summary.csv");
    out << "key,value\n";
    out << "planner," << s.planner << '\n';
    out << "inspection_time," << fmt(s.inspection_time) << '\n';
    out << "recovery_time," << fmt(s.recovery_time) << '\n';
    out << "total_time," << fmt(s.total_time) << '\n';
    out << "final_coverage," << fmt(s.final_coverage) << '\n';
    out << "max_tether_length," << fmt(s.max_tether_length) << '\n';
    out << "exceedance_duration," << fmt(s.exceedance_duration) << '\n';
    out << "final_tether_length," << fmt(s.final_tether_length) << '\n';
    out << "anchor_to_end_distance," << fmt(s.anchor_to_end_distance) << '\n';
    out << "aborted," << (s.aborted ? 1 : 0) << '\n';
    out << "completed_waypoints," << s.completed_waypoints << '\n';
    out << "total_waypoints," << s.total_waypoints << '\n';
    out << "seed," << s.seed << '\n';
  }
  {
    std::ofstream out(dir + "/tether_final.csv");
    if (!out) {
      throw std::runtime_error("cannot write " + dir + "/tether_final.csv");
    }
    out << "node_index,x,y,z\n";
    for (std::size_t i = 0; i < log.final_tether.size(); ++i) {
      const Vec3& p = log.final_tether[i];
      out << i << ',' << fmt(p.x()) << ',' << fmt(p.y()) << ',' << fmt(p.z())
          << '\n';
    }
  }
  {
    std::ofstream out(dir + "/timing.csv");
    if (!out) throw std::runtime_error("cannot write " + dir + "/timing.csv");
    out << "replan_index,wall_seconds\n";
    for (std::size_t i = 0; i < log.replan_wall_seconds.size(); ++i) {
      out << i << ',' << fmt(log.replan_wall_seconds[i]) << '\n';
    }
  }
}

}  // namespace tetherplan
