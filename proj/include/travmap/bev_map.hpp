#pragma once

// Robot-centred bird's-eye-view grid. Cells fuse descriptor observations with an
// exponential moving average; the grid scrolls in whole cells as the robot moves.

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "travmap/common.hpp"
#include "travmap/feature_space.hpp"

namespace travmap {

/// Row-major (row = y index j, col = x index i).
using Layer = Eigen::Array<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Mask = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct CellIndex {
  int i = 0;  ///< x
  int j = 0;  ///< y
  bool operator==(const CellIndex&) const = default;
};

struct CellObservation {
  CellIndex cell;
  FeatureDescriptor descriptor;
};

struct GridGeometry {
  double resolution = 0.5;  ///< m per cell
  int width = 120;
  int height = 120;
  Eigen::Vector2d origin = Eigen::Vector2d::Zero();  ///< world position of the corner of cell (0,0)
};

class BevGrid {
 public:
  BevGrid() = default;
  BevGrid(const GridGeometry& geometry, int descriptor_dim, double weight_cap = 100.0);

  const GridGeometry& geometry() const { return geom_; }
  int width() const { return geom_.width; }
  int height() const { return geom_.height; }
  double resolution() const { return geom_.resolution; }
  const Eigen::Vector2d& origin() const { return geom_.origin; }
  int descriptor_dim() const { return static_cast<int>(descriptors_.rows()); }
  double weight_cap() const { return weight_cap_; }
  Eigen::Index cell_count() const { return weight_.size(); }

  bool in_bounds(CellIndex c) const { return c.i >= 0 && c.j >= 0 && c.i < geom_.width && c.j < geom_.height; }
  Eigen::Index flat(CellIndex c) const { return static_cast<Eigen::Index>(c.j) * geom_.width + c.i; }
  CellIndex unflat(Eigen::Index f) const {
    return {static_cast<int>(f % geom_.width), static_cast<int>(f / geom_.width)};
  }
  /// Cell containing world point (floor), possibly out of bounds.
  CellIndex cell_at(const Eigen::Vector2d& world) const;
  Eigen::Vector2d cell_center(CellIndex c) const;

  bool known(Eigen::Index f) const { return weight_(f) > 0.0; }
  auto descriptor(Eigen::Index f) const { return descriptors_.col(f); }
  auto descriptor(Eigen::Index f) { return descriptors_.col(f); }
  const Matrix& descriptors() const { return descriptors_; }

  Layer& weight() { return weight_; }
  const Layer& weight() const { return weight_; }
  Layer& cost() { return cost_; }
  const Layer& cost() const { return cost_; }
  Layer& speed_limit() { return speed_; }
  const Layer& speed_limit() const { return speed_; }
  Mask& ood() { return ood_; }
  const Mask& ood() const { return ood_; }

  /// Cells written since the last take_dirty(), in first-touch order.
  std::vector<Eigen::Index> take_dirty();
  void mark_dirty(Eigen::Index f);

  /// Observations dropped because their index was outside the grid.
  std::uint64_t skipped_observations = 0;

  /// Scroll contents: new cell (i, j) holds old cell (i + di, j + dj). Origin
  /// moves by (di, dj) cells. Cells with no source become unknown.
  void scroll(int di, int dj);
  void clear_cell(Eigen::Index f);

 private:
  GridGeometry geom_;
  double weight_cap_ = 100.0;
  Matrix descriptors_;  // k x cells
  Layer weight_, cost_, speed_;
  Mask ood_;
  std::vector<Eigen::Index> dirty_;
  std::vector<std::uint8_t> dirty_flag_;
};

struct IntegrateStats {
  int fused = 0;
  int first_writes = 0;
  int skipped = 0;
};

/// EMA fusion: unknown cells take the observation verbatim, known cells move
/// by beta towards it. Out-of-bounds observations are tallied and skipped.
IntegrateStats integrate(BevGrid& grid, std::span<const CellObservation> observations, double beta);

/// Scrolls so the robot stays inside the central half of the grid; when it leaves
/// it the robot's cell is brought back to the centre. Returns the applied shift.
CellIndex recenter(BevGrid& grid, const Eigen::Vector2d& robot_xy);

/// Per-cell OOD test on fused descriptors; unknown cells are never OOD.
Mask ood_mask(const BevGrid& grid, const ClusterSet& clusters);

// Square structuring element of side 2r+1; pixels beyond the border are
// neutral (true for erosion, false for dilation).
Mask erode(const Mask& mask, int radius);
Mask dilate(const Mask& mask, int radius);
Mask morphological_open(const Mask& mask, int radius);

/// Opening, then every surviving component regrown to its full extent in `mask`
/// (8-connected). Specks go, real blobs keep their boundary.
Mask open_by_reconstruction(const Mask& mask, int radius);

/// ood_mask + open_by_reconstruction written into grid.ood(); cells whose flag flips are marked dirty.
void refresh_ood(BevGrid& grid, const ClusterSet& clusters, int radius);

// Export: <stem>.cost.csv, .speed_limit.csv, .ood.csv, .weight.csv,
// .desc.bin and the sidecar <stem>.meta.json.
struct SnapshotFiles {
  std::filesystem::path meta;
};
void write_layer_csv(const std::filesystem::path& path, const Layer& layer);
Layer read_layer_csv(const std::filesystem::path& path);
std::string layer_csv(const Layer& layer);
void write_descriptor_bin(const std::filesystem::path& path, const BevGrid& grid);
/// Returns k x cells; throws InvalidInput on a malformed header.
Matrix read_descriptor_bin(const std::filesystem::path& path, int& width, int& height);

/// Writes all layers plus the sidecar. `extra` keys are merged into the sidecar JSON
/// (text of a JSON object, may be empty).
SnapshotFiles export_grid(const BevGrid& grid, const std::filesystem::path& dir, const std::string& stem,
                          const std::string& extra_json = {});
/// Rebuilds geometry, descriptors, weights and ood flags from a sidecar file.
BevGrid import_grid(const std::filesystem::path& meta_path);

}  // namespace travmap
