#include "tetherplan/planner.hpp"

#include <algorithm>
#include <chrono>
#include <limits>
#include <cmath>
#include <random>

namespace tetherplan {

namespace {

PathQuery make_query(const RecoverySearchConfig& cfg, const Vec3& start,
                     const Vec3& goal, std::uint64_t seed) {
  PathQuery q;
  q.start = start;
  q.goal = goal;
  q.margin = cfg.margin_tether;
  q.bounds = cfg.sample_bounds;
  q.step = cfg.rrt_step;
  q.max_iterations = cfg.rrt_max_iterations;
  q.goal_bias = cfg.rrt_goal_bias;
  q.post_goal_iterations = cfg.rrt_post_goal_iterations;
  q.resample_spacing = cfg.delta;
  q.rng_seed = seed;
  return q;
}

TetherOptions tether_options(const RecoverySearchConfig& cfg) {
  TetherOptions opt;
  opt.spacing = cfg.delta;
  opt.margin = cfg.margin_tether;
  opt.max_sweeps = cfg.tether_max_sweeps;
  return opt;
}

// Simulates flying the new segment from the pivot while the retraced tether
// prefix is attached, sampling intermediate vehicle positions. Intermediate
// samples are held below l_max minus the sampling slack so that positions
// between samples stay within l_max + delta.
bool transient_lengths_ok(const TetherPath& tether, int pivot_index,
                          const std::vector<Vec3>& new_segment, double l_max,
                          const SdfGrid& grid,
                          const RecoverySearchConfig& cfg) {
  TetherPath sim;
  sim.spacing = cfg.delta;
  sim.nodes.assign(tether.nodes.begin(),
                   tether.nodes.begin() + pivot_index + 1);
  const TetherOptions opt = tether_options(cfg);
  const double spacing = cfg.transient_spacing * cfg.delta;
  const double slack = (cfg.transient_spacing - 1) * cfg.delta;

  std::vector<Vec3> samples = resample_polyline(new_segment, spacing);
  for (std::size_t k = 1; k < samples.size(); ++k) {
    const TetherUpdateResult r = update_tether(sim, samples[k], grid, opt);
    if (r.rov_rejected) return false;
    sim = r.path;
    const bool last = (k + 1 == samples.size());
    const double limit = last ? l_max : l_max - slack;
    if (compute_length(sim) > limit) return false;
  }
  return true;
}

}  // namespace

RecoverySearchResult de_entanglement_search(const TetherPath& tether,
                                            const Vec3& waypoint, double l_max,
                                            const SdfGrid& grid,
                                            const RecoverySearchConfig& cfg) {
  RecoverySearchResult out;
  const int n = static_cast<int>(tether.nodes.size());
  const TetherOptions opt = tether_options(cfg);
  const int stride = std::max(1, cfg.pivot_stride);

  for (int i = n - 1; i >= 0; i -= (i == 0 ? 1 : std::min(stride, i))) {
    const Vec3& pivot = tether.nodes[i];
    ++out.pivots_evaluated;
    const PlannedPath plan = plan_shortest_path(
        make_query(cfg, pivot, waypoint, mix_seed(cfg.seed, i)), grid);
    if (!plan.ok()) {
      ++out.plans_failed;
      continue;
    }

    TetherPath augmented;
    augmented.spacing = cfg.delta;
    augmented.nodes.assign(tether.nodes.begin(), tether.nodes.begin() + i + 1);
    for (const Vec3& p : plan.points) augmented.nodes.push_back(p);
    augmented.nodes = dedupe_polyline(augmented.nodes);

    const TetherUpdateResult settled = settle_tether(augmented, grid, opt);
    const double predicted = compute_length(settled.path);
    if (predicted > l_max) continue;
    if (!transient_lengths_ok(tether, i, plan.points, l_max, grid, cfg)) {
      continue;
    }

    std::vector<Vec3> recovery(tether.nodes.rbegin(),
                               tether.nodes.rbegin() + (n - i));
    for (const Vec3& p : plan.points) recovery.push_back(p);
    out.recovery_path = dedupe_polyline(recovery);
    out.pivot_index = i;
    out.feasible = true;
    out.predicted_length = predicted;
    return out;
  }

  // Soft-limit fallback: direct path from the vehicle end.
  const PlannedPath plan = plan_shortest_path(
      make_query(cfg, tether.nodes.back(), waypoint, mix_seed(cfg.seed, n)),
      grid);
  if (!plan.ok()) {
    out.hard_failure = true;
    return out;
  }
  TetherPath augmented = tether;
  for (const Vec3& p : plan.points) augmented.nodes.push_back(p);
  augmented.nodes = dedupe_polyline(augmented.nodes);
  const TetherUpdateResult settled = settle_tether(augmented, grid, opt);
  out.recovery_path = plan.points;
  out.pivot_index = n - 1;
  out.feasible = false;
  out.predicted_length = compute_length(settled.path);
  return out;
}

namespace {

bool polyline_clear(const std::vector<Vec3>& path, const SdfGrid& grid,
                    double margin) {
  if (path.empty()) return false;
  if (path.size() == 1) return !grid.is_in_collision(path[0], margin);
  for (std::size_t i = 1; i < path.size(); ++i) {
    if (!grid.line_of_sight(path[i - 1], path[i], margin)) return false;
  }
  return true;
}

double worst_violation(const std::vector<Vec3>& path, const SdfGrid& grid,
                       double margin) {
  double worst = 0.0;
  for (const Vec3& p : path) {
    worst = std::max(worst, margin - grid.distance_at(p));
  }
  return worst;
}

void offset_from_centroid(std::vector<Vec3>& path, double amount) {
  Vec3 centroid = Vec3::Zero();
  for (const Vec3& p : path) centroid += p;
  centroid /= static_cast<double>(path.size());
  for (std::size_t k = 1; k + 1 < path.size(); ++k) {
    const Vec3 dir = path[k] - centroid;
    const double d = dir.norm();
    if (d > 1e-9) path[k] += dir / d * amount;
  }
}

void perturb_violating(std::vector<Vec3>& path, const SdfGrid& grid,
                       const RefineConfig& cfg, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (std::size_t k = 1; k + 1 < path.size(); ++k) {
    if (!grid.is_in_collision(path[k], cfg.margin)) continue;
    for (int t = 0; t < cfg.perturb_samples; ++t) {
      Vec3 dir(gauss(rng), gauss(rng), gauss(rng));
      const double dn = dir.norm();
      if (dn < 1e-9) continue;
      const Vec3 cand = path[k] + dir / dn * (u01(rng) * 2.0 * cfg.margin);
      if (!grid.is_in_collision(cand, cfg.margin)) {
        path[k] = cand;
        break;
      }
    }
  }
}

// Windowed least-squares cubic (Savitzky-Golay style) per coordinate;
// endpoints pinned.
void smooth_cubic(std::vector<Vec3>& path, int window) {
  const int n = static_cast<int>(path.size());
  if (n < 5 || window < 5) return;
  std::vector<Vec3> out = path;
  const int half = window / 2;
  for (int k = 1; k + 1 < n; ++k) {
    int lo = std::max(0, k - half);
    int hi = std::min(n - 1, lo + window - 1);
    lo = std::max(0, hi - window + 1);
    const int m = hi - lo + 1;
    if (m < 5) continue;
    Eigen::MatrixXd a(m, 4);
    Eigen::MatrixXd b(m, 3);
    for (int r = 0; r < m; ++r) {
      const double t = static_cast<double>(lo + r - k);
      a(r, 0) = 1.0;
      a(r, 1) = t;
      a(r, 2) = t * t;
      a(r, 3) = t * t * t;
      b.row(r) = path[lo + r].transpose();
    }
    // value at t = 0 is the constant coefficient
    const Eigen::MatrixXd coef = a.colPivHouseholderQr().solve(b);
    out[k] = coef.row(0).transpose();
  }
  path = std::move(out);
}

}  // namespace

RefineResult refine_recovery_path(const std::vector<Vec3>& input,
                                  const SdfGrid& grid,
                                  const RefineConfig& cfg) {
  RefineResult res;
  if (input.size() <= 2) {
    res.path = input;
    res.collision_free = polyline_clear(input, grid, cfg.margin);
    return res;
  }
  const bool input_clear = polyline_clear(input, grid, cfg.margin);
  std::vector<Vec3> best_clear;
  std::vector<Vec3> best_effort = input;
  double best_violation = worst_violation(input, grid, cfg.margin);

  std::mt19937_64 rng(cfg.seed);
  std::vector<Vec3> cur = input;
  const Vec3 first = input.front();
  const Vec3 last = input.back();

  const auto consider = [&](const std::vector<Vec3>& p) {
    if (polyline_clear(p, grid, cfg.margin)) {
      best_clear = p;
      return true;
    }
    const double v = worst_violation(p, grid, cfg.margin);
    if (v < best_violation) {
      best_violation = v;
      best_effort = p;
    }
    return false;
  };

  for (int iter = 0; iter < cfg.max_iter; ++iter) {
    offset_from_centroid(cur, cfg.offset_gain * cfg.margin);
    bool clear = consider(cur);
    if (!clear) {
      perturb_violating(cur, grid, cfg, rng);
      clear = consider(cur);
    }
    smooth_cubic(cur, cfg.window);
    if (cfg.resample_spacing > 0.0) {
      cur = resample_polyline(dedupe_polyline(cur), cfg.resample_spacing);
    }
    cur.front() = first;
    cur.back() = last;
    if (consider(cur)) break;
  }

  if (!best_clear.empty()) {
    res.path = best_clear;
    res.collision_free = true;
  } else if (input_clear) {
    res.path = input;
    res.collision_free = true;
  } else {
    res.path = best_effort;
    res.collision_free = false;
  }
  return res;
}

Vec3 follow_path(const std::vector<Vec3>& path, const Vec3& p_rov,
                 double lookahead) {
  if (path.empty()) return p_rov;
  if (path.size() == 1) return path[0];

  // Arc length of the closest point on the polyline.
  double best_d2 = std::numeric_limits<double>::infinity();
  double best_s = 0.0;
  double acc = 0.0;
  for (std::size_t i = 1; i < path.size(); ++i) {
    const Vec3 q = closest_point_on_segment(path[i - 1], path[i], p_rov);
    const double d2 = (q - p_rov).squaredNorm();
    if (d2 < best_d2) {
      best_d2 = d2;
      best_s = acc + (q - path[i - 1]).norm();
    }
    acc += (path[i] - path[i - 1]).norm();
  }

  double target_s = best_s + lookahead;
  if (target_s >= acc) return path.back();
  for (std::size_t i = 1; i < path.size(); ++i) {
    const double seg = (path[i] - path[i - 1]).norm();
    if (target_s <= seg) {
      return seg > 1e-12 ? Vec3(path[i - 1] + (path[i] - path[i - 1]) *
                                                  (target_s / seg))
                         : path[i];
    }
    target_s -= seg;
  }
  return path.back();
}

StepResult EntanglementPlanner::step(const TetherPath& tether,
                                     const Vec3& p_rov, const SdfGrid& grid) {
  StepResult out;
  if (state_.waypoint_index >= mission_.waypoints.size()) {
    out.target = p_rov;
    out.mission_complete = true;
    return out;
  }

  const double length = compute_length(tether);

  if (state_.mode == PlannerMode::kNormal) {
    if (length > mission_.l_max) {
      const auto t0 = std::chrono::steady_clock::now();
      RecoverySearchConfig search = config_.search;
      search.seed = mix_seed(config_.search.seed, ++search_counter_);
      const Vec3& waypoint = mission_.waypoints[state_.waypoint_index];
      const double bound = std::max(0.1 * mission_.l_max,
                                    mission_.l_max - config_.recovery_headroom);
      RecoverySearchResult found =
          de_entanglement_search(tether, waypoint, bound, grid, search);
      if (found.hard_failure) {
        // No recovery available at all: hold position.
        out.target = p_rov;
        out.soft_limit = true;
        state_.soft_limit_active = true;
        return out;
      }
      RefineConfig refine = config_.refine;
      refine.seed = mix_seed(search.seed, 0x5eedULL);
      const RefineResult refined =
          refine_recovery_path(found.recovery_path, grid, refine);
      state_.mode = PlannerMode::kRecovery;
      state_.recovery_path = refined.path;
      state_.soft_limit_active = !found.feasible;
      out.entered_recovery = true;
      out.pivot_index = found.pivot_index;
      out.soft_limit = state_.soft_limit_active;
      out.target = follow_path(state_.recovery_path, p_rov, config_.lookahead);
      out.search_wall_seconds =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
              .count();
      return out;
    }
    const Vec3& waypoint = mission_.waypoints[state_.waypoint_index];
    out.target = waypoint;
    if (reached_waypoint(p_rov, waypoint, mission_.reach_radius)) {
      ++state_.waypoint_index;
      if (state_.waypoint_index >= mission_.waypoints.size()) {
        out.mission_complete = true;
      }
    }
    out.soft_limit = state_.soft_limit_active;
    return out;
  }

  // RECOVERY: follow the path; at its end, hand control back to NORMAL.
  out.target = follow_path(state_.recovery_path, p_rov, config_.lookahead);
  out.soft_limit = state_.soft_limit_active;
  if (!state_.recovery_path.empty() &&
      reached_waypoint(p_rov, state_.recovery_path.back(),
                       mission_.reach_radius)) {
    state_.mode = PlannerMode::kNormal;
    state_.recovery_path.clear();
    state_.soft_limit_active = false;
    out.exited_recovery = true;
  }
  return out;
}

}  // namespace tetherplan
