#pragma once

// Closed-loop episodes on a synthetic world, offline replay of a recorded
// sensor stream, and speed / risk sweeps over an exported map snapshot.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "travmap/config.hpp"
#include "travmap/pipeline.hpp"
#include "travmap/planner.hpp"
#include "travmap/world.hpp"

namespace travmap {

struct TickRecord {
  int n = 0;
  double t = 0.0;
  VehicleState state;          ///< at the start of the tick
  double command_speed = 0.0;  ///< speed the first planned control asks for
  double roughness = 0.0;      ///< measured after the step
  double true_roughness = 0.0;
  double speed_limit = 0.0;    ///< NaN when the vehicle cell is unmapped
  double alpha_s = 0.0;
  int lap = 0;
  double progress = 0.0;  ///< m along the course, after the step
  std::string terrain;
  bool lethal = false;
  double min_cost = 0.0;
  double mean_cost = 0.0;
  std::vector<std::string> events;
};

struct LapMetrics {
  int lap = 0;
  int ticks = 0;
  double duration = 0.0;
  int interventions = 0;  ///< ticks spent on a lethal cell
  int undesirable = 0;    ///< ticks on terrain with true roughness > R_max + 0.1
  double avg_speed = 0.0;
  double avg_roughness = 0.0;
};

struct EpisodeResult {
  bool completed = false;
  std::string abort_reason;  ///< empty unless aborted
  double sim_time = 0.0;
  std::vector<TickRecord> ticks;
  std::vector<LapMetrics> laps;
  LapMetrics total;  ///< lap = -1, over every tick
  std::vector<std::filesystem::path> snapshots;
};

struct TickView {
  const TickRecord& record;
  const Pipeline& pipeline;
  const World& world;
};

struct EpisodeOptions {
  /// Writes episode.jsonl, metrics.csv, snapshots/ and (when the config asks) sensors.jsonl.
  std::optional<std::filesystem::path> output_dir;
  /// Called after every tick; return false to stop the episode early.
  std::function<bool(const TickView&)> on_tick;
};

EpisodeResult run_episode(const World& world, const RunConfig& config, const EpisodeOptions& options = {});

std::string tick_record_json(const TickRecord& record);
std::string metrics_csv(const EpisodeResult& result);

struct ReplayResult {
  int sense_records = 0;
  int proprio_records = 0;
  int warnings = 0;  ///< malformed or truncated records; replay stops at the first one
  std::vector<std::filesystem::path> snapshots;
  std::string error_csv;  ///< t,cells,mean_abs_error
};

/// Feeds a recorded sensors.jsonl through the mapping pipeline. Snapshots land in
/// out/snapshots with the same names as the live run.
ReplayResult replay(const std::filesystem::path& log, const RunConfig& config, const std::filesystem::path& out_dir);

struct SweepRequest {
  std::vector<double> speeds;  ///< cost layers
  std::vector<double> r_max;   ///< speed-limit layers
  std::optional<double> alpha;  ///< alpha_R for cost layers and alpha_S for speed layers; snapshot values otherwise
};

/// Refits the models from the snapshot's buffer checkpoint and writes one CSV per
/// condition: cost_v<speed>.csv and speed_limit_r<rmax>.csv. Layers are monotone
/// envelopes (cost over lower speeds, limit over lower budgets), so a sweep is
/// non-decreasing per cell. Returns the written paths.
std::vector<std::filesystem::path> export_maps(const std::filesystem::path& snapshot_meta, const SweepRequest& request,
                                               const std::filesystem::path& out_dir);

}  // namespace travmap
