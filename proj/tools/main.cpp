#include <cstdio>
#include <exception>
#include <fstream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "tetherplan/simulator.hpp"

namespace {

using tetherplan::MissionLog;
using tetherplan::PlannerKind;
using tetherplan::Scenario;

void print_summary(const MissionLog& log) {
  const auto& s = log.summary;
  std::printf("%-9s inspection %7.1f s  recovery %7.1f s  total %7.1f s  "
              "coverage %5.1f%%  max tether %6.2f m  exceedance %6.1f s%s\n",
              s.planner.c_str(), s.inspection_time, s.recovery_time,
              s.total_time, 100.0 * s.final_coverage, s.max_tether_length,
              s.exceedance_duration, s.aborted ? "  [ABORTED]" : "");
}

int run_one(const Scenario& scenario, PlannerKind kind, std::uint64_t seed,
            const std::string& out_dir, MissionLog* out_log = nullptr) {
  const MissionLog log = tetherplan::run_mission(scenario, kind, seed);
  tetherplan::write_log(log, out_dir);
  print_summary(log);
  if (out_log) *out_log = log;
  return log.summary.aborted ? 3 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Entanglement-aware tethered inspection simulator"};
  app.require_subcommand(1);

  std::string scenario_path, out_dir = "out", planner_name = "react";
  std::optional<std::uint64_t> seed_override;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--scenario", scenario_path, "Scenario file")->required();
    cmd->add_option("--out", out_dir, "Output directory");
    cmd->add_option("--seed", seed_override, "Override the scenario RNG seed");
  };

  CLI::App* run = app.add_subcommand("run", "Run one mission");
  add_common(run);
  run->add_option("--planner", planner_name, "react|baseline")
      ->check(CLI::IsMember({"react", "baseline"}));

  CLI::App* compare =
      app.add_subcommand("compare", "Run react and baseline, joint summary");
  add_common(compare);

  CLI11_PARSE(app, argc, argv);

  try {
    Scenario scenario = tetherplan::load_scenario(scenario_path);
    const std::uint64_t seed = seed_override.value_or(scenario.seed);

    if (run->parsed()) {
      const PlannerKind kind = planner_name == "react" ? PlannerKind::kReact
                                                       : PlannerKind::kBaseline;
      return run_one(scenario, kind, seed, out_dir);
    }

    MissionLog react_log, baseline_log;
    const int rc1 = run_one(scenario, PlannerKind::kReact, seed,
                            out_dir + "/react", &react_log);
    const int rc2 = run_one(scenario, PlannerKind::kBaseline, seed,
                            out_dir + "/baseline", &baseline_log);
    {
      std::ofstream out(out_dir + "/compare_summary.csv");
      out << "metric,react,baseline\n";
      const auto& a = react_log.summary;
      const auto& b = baseline_log.summary;
      char buf[256];
      std::snprintf(buf, sizeof(buf), "inspection_time,%.6f,%.6f\n",
                    a.inspection_time, b.inspection_time);
      out << buf;
      std::snprintf(buf, sizeof(buf), "recovery_time,%.6f,%.6f\n",
                    a.recovery_time, b.recovery_time);
      out << buf;
      std::snprintf(buf, sizeof(buf), "total_time,%.6f,%.6f\n", a.total_time,
                    b.total_time);
      out << buf;
      std::snprintf(buf, sizeof(buf), "final_coverage,%.6f,%.6f\n",
                    a.final_coverage, b.final_coverage);
      out << buf;
      std::snprintf(buf, sizeof(buf), "max_tether_length,%.6f,%.6f\n",
                    a.max_tether_length, b.max_tether_length);
      out << buf;
      std::snprintf(buf, sizeof(buf), "exceedance_duration,%.6f,%.6f\n",
                    a.exceedance_duration, b.exceedance_duration);
      out << buf;
      std::snprintf(buf, sizeof(buf), "final_tether_length,%.6f,%.6f\n",
                    a.final_tether_length, b.final_tether_length);
      out << buf;
    }
    return rc1 != 0 ? rc1 : rc2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
