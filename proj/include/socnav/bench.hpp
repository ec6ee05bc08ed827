/*
 * bench.hpp
 * socnav
 *
 * Copyright 2026 The socnav Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef SOCNAV_BENCH_HPP
#define SOCNAV_BENCH_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "socnav/config.hpp"
#include "socnav/dwa.hpp"
#include "socnav/episode.hpp"
#include "socnav/scenario.hpp"

namespace socnav {

inline constexpr int kReportSchemaVersion = 1;

enum class LocalPlannerKind { DWA, ExternalPolicy, ScriptedFollower };

const char *local_planner_name(LocalPlannerKind k);
std::optional<LocalPlannerKind> parse_local_planner(const std::string &name);

struct PlannerCombo {
  GlobalPlannerKind global = GlobalPlannerKind::PPP;
  LocalPlannerKind local = LocalPlannerKind::ScriptedFollower;

  /// "<global>+<local>", e.g. "ppp+scripted".
  std::string name() const;
  static std::optional<PlannerCombo> parse(const std::string &text);
  bool operator==(const PlannerCombo &) const = default;
};

/// Pure-pursuit waypoint tracker without any obstacle or pedestrian avoidance.
struct FollowerConfig {
  double heading_gain = 2.0;
  /// Drive at full speed only when the waypoint bearing is within this angle.
  double align_angle = kPi / 6.0;
  /// Carrot distance along the waypoint polyline.
  double lookahead = 0.4;
  bool operator==(const FollowerConfig &) const = default;
};

Action scripted_follower(const Pose &pose, const Vec2 &target, const FollowerConfig &cfg, double v_max,
                         double omega_max);

/**
 * Pure-pursuit carrot: projects `robot` onto the segment ending at the current
 * waypoint (starting at the previous one, or at the robot for cursor 0) and
 * walks `lookahead` meters along the remaining polyline.
 */
Vec2 pursuit_target(const Waypoints &wp, const Vec2 &robot, double lookahead);

/// First waypoint at or after the cursor that is at least `lookahead` from `robot`; the last one otherwise.
Vec2 lookahead_target(const Waypoints &wp, const Vec2 &robot, double lookahead);

struct BenchConfig {
  std::uint64_t seed = 1;
  std::vector<std::string> maps = {"gen:101", "gen:102", "gen:103", "gen:104", "gen:105", "gen:106"};
  int episodes_per_map = 50;
  std::vector<int> ped_counts = {3, 4, 5, 6, 7, 8, 9, 10};
  std::vector<CrowdMode> modes = {CrowdMode::Cooperative, CrowdMode::Uncooperative};
  std::vector<PlannerCombo> combos = {{GlobalPlannerKind::PPP, LocalPlannerKind::DWA},
                                      {GlobalPlannerKind::AStar, LocalPlannerKind::DWA},
                                      {GlobalPlannerKind::FixedAtStart, LocalPlannerKind::DWA}};
  double psv_dist = 0.45;
  /// Local goal distance along the waypoint list handed to DWA.
  double dwa_lookahead = 1.0;
  /// TS over successful episodes (false) or over all episodes (true).
  bool ts_over_all = false;
  /// 0 picks the hardware concurrency.
  int threads = 0;
  std::string output = "bench_out";
  std::string policy_endpoint = "127.0.0.1:5556";
  bool write_replays = false;

  EpisodeConfig episode;
  DwaConfig dwa;
  MapGenParams mapgen;
  ScenarioParams scenario;
  FollowerConfig follower;

  void validate() const;
};

const KeyRegistry<BenchConfig> &bench_registry();

/// DWA settings with the robot limits taken from the episode config.
DwaConfig effective_dwa(const BenchConfig &cfg);

struct EpisodeResult {
  int map_index = 0;
  std::string map_ref;
  int episode_index = 0;
  PlannerCombo combo;
  CrowdMode mode = CrowdMode::Cooperative;
  int n_peds = 0;
  std::uint64_t seed = 0;
  Outcome outcome = Outcome::Running;
  int steps = 0;
  double total_return = 0.0;
  /// Steps whose nearest-pedestrian center distance fell below psv_dist.
  int psv_steps = 0;
  double min_ped_distance = 0.0;
  int replans = 0;
  int wall_hits = 0;
  bool aborted = false;
  std::string abort_reason;

  double psv_percent() const { return steps > 0 ? 100.0 * psv_steps / steps : 0.0; }
};

struct MetricsReport {
  int episodes = 0;
  int aborted = 0;
  double sr = 0.0;
  /// NaN when no episode qualifies.
  double ts = 0.0;
  double psv = 0.0;
  double co = 0.0;
  double to = 0.0;
};

/// Aggregates non-aborted results; throws InvalidArgument when none remain.
MetricsReport aggregate(const std::vector<EpisodeResult> &results, bool ts_over_all = false);

/// Answers observations with normalized actions (the ExternalPolicy local planner).
class PolicyConnection {
 public:
  virtual ~PolicyConnection() = default;
  /// First message of an episode; returns the first action.
  virtual std::array<double, 2> start(const Observation &obs) = 0;
  /// Reports a transition; returns the next action (ignored when terminal).
  virtual std::optional<std::array<double, 2>> next(const StepResult &result) = 0;
};

/// Connects to a policy server speaking the JSON-lines protocol. Throws Error(Disconnected).
std::unique_ptr<PolicyConnection> connect_policy(const std::string &endpoint);

struct EpisodeRun {
  EpisodeResult result;
  /// Set when replays are requested.
  std::string replay;
};

/// Runs one scenario under one combo to termination.
EpisodeRun run_episode(const std::shared_ptr<const World> &world, const PlannerCombo &combo,
                       const Scenario &scenario, const BenchConfig &cfg, bool keep_replay = false);

struct WorkItem {
  int map_index = 0;
  int episode_index = 0;
  int n_peds = 0;
  CrowdMode mode = CrowdMode::Cooperative;
  std::uint64_t seed = 0;
};

/// Deterministic episode schedule: mode and crowd size cycle over the episode index.
std::vector<WorkItem> bench_schedule(const BenchConfig &cfg);

struct BenchOutput {
  std::vector<EpisodeResult> results;
  std::vector<std::string> replays;
};

/// Runs every (scenario, combo) pair. Results are ordered by map, episode, then combo.
BenchOutput run_bench(const BenchConfig &cfg, const std::function<void(std::size_t, std::size_t)> &progress = {});

std::string episodes_csv(const std::vector<EpisodeResult> &results);
std::string summary_csv(const std::vector<EpisodeResult> &results, const BenchConfig &cfg);
std::string report_json(const std::vector<EpisodeResult> &results, const BenchConfig &cfg);
std::string summary_table(const std::vector<EpisodeResult> &results, const BenchConfig &cfg);

/// Writes episodes.csv, summary.csv, report.json, summary.txt (and replays/) under cfg.output.
void write_bench_outputs(const BenchOutput &out, const BenchConfig &cfg);

}  // namespace socnav

#endif  // SOCNAV_BENCH_HPP
