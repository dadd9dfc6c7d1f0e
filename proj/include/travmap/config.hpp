#pragma once

// Run configuration for simulate / replay. JSON on disk; relative paths are
// resolved against the directory holding the config file.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "travmap/bev_map.hpp"
#include "travmap/estimator.hpp"
#include "travmap/experience_buffer.hpp"
#include "travmap/planner.hpp"
#include "travmap/proprioception.hpp"
#include "travmap/world.hpp"

namespace travmap {

/// Where a one-shot label takes its descriptor from. Exactly one source is set.
struct PinSpec {
  std::optional<Vector> descriptor;
  std::optional<std::filesystem::path> snapshot;  ///< sidecar meta of an exported map
  CellIndex cell;                                 ///< with `snapshot`
  std::optional<std::string> class_name;          ///< simulator only: medoid cell of that class in the first scan showing 3+ cells
  double roughness = 1.0;
  std::vector<double> speeds{1.0, 3.0, 5.0};
};

struct ClusterFitSpec {
  int k = 8;
  int samples_per_class = 200;
  std::uint64_t seed = 1;
};

struct RefitSpec {
  int min_new_samples = 16;
  double max_interval = 1.0;  ///< s
};

struct RunConfig {
  std::filesystem::path base_dir = ".";

  WorldSpec world = default_world_spec();
  std::optional<std::filesystem::path> clusters_path;
  ClusterFitSpec cluster_fit;
  RoughnessParams roughness = default_roughness_params();
  std::filesystem::path output_dir = "out";

  std::uint64_t seed = 1;
  int laps = 1;
  double tick = 0.1;        ///< s
  double max_time = 600.0;  ///< s of simulated time per episode
  double stuck_timeout = 30.0;
  double lookahead = 15.0;  ///< m along the course to the planner goal

  SensorSpec sensor;
  double proprio_rate = 100.0;     ///< Hz
  double proprio_duration = 1.0;   ///< s of signal per experience sample
  double min_experience_speed = 0.5;  ///< m/s; slower windows only drive the alpha_S update

  GridGeometry grid;
  double beta = 0.3;
  double weight_cap = 100.0;
  int ood_radius = 1;

  BufferConfig buffer;
  GprHyper cost_hyper{0.25, 1.0, 1e-3};
  GprHyper speed_hyper{9.0, 1.0, 0.1};
  double roughness_norm = 0.1;
  double query_speed = 4.0;  ///< m/s at which the cost layer is rasterised
  RefitSpec refit;
  RiskState risk;
  MppiParams planner;
  VehicleParams vehicle;

  std::vector<PinSpec> pins;
  double snapshot_interval = 10.0;  ///< s; 0 disables periodic snapshots
  bool record_sensors = true;       ///< write the sensor stream needed by replay

  void validate() const;
};

/// Parses JSON text. Unknown keys are rejected so typos do not silently fall back to defaults.
RunConfig parse_run_config(const std::string& json_text, const std::filesystem::path& base_dir = ".");
RunConfig load_run_config(const std::filesystem::path& path);

/// Clusters from the configured file, or fitted on embeddings sampled from the world.
ClusterSet resolve_clusters(const RunConfig& config, const World& world);

}  // namespace travmap
