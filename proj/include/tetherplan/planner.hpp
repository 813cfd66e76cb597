#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "tetherplan/geometry.hpp"
#include "tetherplan/rrt_star.hpp"
#include "tetherplan/sdf_grid.hpp"
#include "tetherplan/tether.hpp"

namespace tetherplan {

struct Mission {
  std::vector<Vec3> waypoints;
  double l_max = 10.0;
  double reach_radius = 0.15;
};

enum class PlannerMode { kNormal, kRecovery };

struct PlannerState {
  PlannerMode mode = PlannerMode::kNormal;
  std::size_t waypoint_index = 0;
  std::vector<Vec3> recovery_path;
  bool soft_limit_active = false;
};

struct RecoverySearchResult {
  std::vector<Vec3> recovery_path;  // starts at the vehicle's current position
  int pivot_index = -1;
  bool feasible = false;
  double predicted_length = 0.0;
  int pivots_evaluated = 0;
  int plans_failed = 0;
  bool hard_failure = false;  // fallback shortest path also failed
};

struct RecoverySearchConfig {
  double delta = 0.05;
  double margin_tether = 0.05;   // clearance used for tether simulation
  double margin_vehicle = 0.1;   // clearance used when refining for flight
  Aabb sample_bounds;
  double rrt_step = 0.25;
  int rrt_max_iterations = 5000;
  double rrt_goal_bias = 0.1;
  int rrt_post_goal_iterations = 0;
  std::uint64_t seed = 0;
  int pivot_stride = 1;  // >1 coarsens the backward scan (latency knob)
  // Spacing (in multiples of delta) of the simulated vehicle positions used
  // for the transient length check along the new path segment.
  int transient_spacing = 10;
  int tether_max_sweeps = 50;
};

/// Backward search along the tether for the largest-index pivot from which
/// retrace + newly planned path keeps the predicted taut length within
/// l_max. Falls back to the direct path with feasible=false when no pivot
/// qualifies.
RecoverySearchResult de_entanglement_search(const TetherPath& tether,
                                            const Vec3& waypoint, double l_max,
                                            const SdfGrid& grid,
                                            const RecoverySearchConfig& cfg);

struct RefineConfig {
  double margin = 0.1;
  double offset_gain = 1.0;
  int max_iter = 25;
  int perturb_samples = 20;
  int window = 8;
  double resample_spacing = 0.0;  // 0 -> no resample after smoothing
  std::uint64_t seed = 0;
};

struct RefineResult {
  std::vector<Vec3> path;
  bool collision_free = false;
};

/// Centroid offsetting, random perturbation of violating points, and
/// windowed cubic smoothing, looped until the path clears the margin.
/// Endpoints are preserved exactly. When no iteration produces a clear
/// path, the last collision-free intermediate (or the input, if it was
/// clear) is returned; otherwise collision_free is false and the path
/// carries the best effort.
RefineResult refine_recovery_path(const std::vector<Vec3>& input,
                                  const SdfGrid& grid,
                                  const RefineConfig& cfg);

/// Point at arc length (s* + lookahead) along the path, where s* is the
/// arc length of the path point closest to p_rov; clamped to the path end.
Vec3 follow_path(const std::vector<Vec3>& path, const Vec3& p_rov,
                 double lookahead);

inline bool reached_waypoint(const Vec3& p_rov, const Vec3& w,
                             double reach_radius) {
  return (p_rov - w).norm() <= reach_radius;
}

struct PlannerConfig {
  double lookahead = 0.3;
  // Recovery searches target l_max minus this headroom, so one recovery
  // restores slack instead of leaving the tether at the limit.
  double recovery_headroom = 0.0;
  RecoverySearchConfig search;
  RefineConfig refine;
};

struct StepResult {
  Vec3 target{Vec3::Zero()};
  bool mission_complete = false;
  bool entered_recovery = false;
  bool exited_recovery = false;
  bool soft_limit = false;
  int pivot_index = -1;
  double search_wall_seconds = 0.0;  // wall clock; not for deterministic logs
};

/// Dual-mode target generator: NORMAL tracks waypoints and watches the
/// tether length; RECOVERY follows a disentanglement path until its end.
class EntanglementPlanner {
 public:
  EntanglementPlanner(Mission mission, PlannerConfig config)
      : mission_(std::move(mission)), config_(std::move(config)) {}

  StepResult step(const TetherPath& tether, const Vec3& p_rov,
                  const SdfGrid& grid);

  const PlannerState& state() const { return state_; }
  const Mission& mission() const { return mission_; }
  PlannerConfig& config() { return config_; }

 private:
  Mission mission_;
  PlannerConfig config_;
  PlannerState state_;
  std::uint64_t search_counter_ = 0;
};

}  // namespace tetherplan
