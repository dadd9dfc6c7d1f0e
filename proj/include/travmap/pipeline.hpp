#pragma once

// The mapping and learning half of the loop, shared by the live simulator and
// by offline replay so both produce the same maps from the same inputs.

#include <cstdint>
#include <filesystem>
#include <memory>
#include <span>
#include <vector>

#include "travmap/config.hpp"

namespace travmap {

struct ExperienceOutcome {
  double roughness = 0.0;
  bool inserted = false;      ///< false when the vehicle cell is unmapped or the vehicle is too slow
  double speed_limit = 0.0;   ///< at the vehicle cell before the update; NaN when unknown
  double alpha_s = 0.0;       ///< after the update
};

struct ModelUpdate {
  bool refit = false;
  int pins_applied = 0;
  RasterizeStats raster;
};

class Pipeline {
 public:
  /// Applies descriptor and snapshot pins immediately; class pins wait for the
  /// first sensed cell of that class.
  Pipeline(const RunConfig& config, ClusterSet clusters);

  /// Recentre on the robot and fuse the observations.
  void perceive(double time, const Eigen::Vector2d& robot, std::span<const SensedCell> sensed);

  /// Cadenced refit, OOD refresh and rasterisation of changed cells (all cells after a refit).
  ModelUpdate update_models(double time);

  /// Roughness from the window, buffer insert at the vehicle cell and alpha_S update.
  ExperienceOutcome experience(double time, const Eigen::Vector2d& position, double speed,
                               const ProprioWindow& window);

  /// Exports the map layers and a buffer checkpoint named by `stem`.
  void snapshot(const std::filesystem::path& dir, const std::string& stem, double time) const;

  const BevGrid& grid() const { return grid_; }
  BevGrid& grid() { return grid_; }
  const ExperienceBuffer& buffer() const { return buffer_; }
  const ClusterSet& clusters() const { return clusters_; }
  const RiskState& risk() const { return risk_; }
  std::shared_ptr<const Models> models() const { return slot_.load(); }
  int refits() const { return refits_; }
  int pending_pins() const { return static_cast<int>(pending_.size()); }

 private:
  void apply_pin(const PinSpec& pin, const FeatureDescriptor& descriptor, double time);

  const RunConfig& config_;
  ClusterSet clusters_;
  BevGrid grid_;
  ExperienceBuffer buffer_;
  ModelSlot slot_;
  RiskState risk_;
  std::vector<PinSpec> pending_;
  double last_refit_ = 0.0;
  int new_samples_ = 0;
  bool force_refit_ = false;
  int pins_since_update_ = 0;
  int refits_ = 0;
};

}  // namespace travmap
