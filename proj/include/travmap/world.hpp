#pragma once

// Synthetic terrain world: a class raster with per-class latent embeddings and
// ground-truth roughness curves, a figure-eight course, a forward-sector
// descriptor sensor and a proprioceptive signal synthesiser.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "travmap/bev_map.hpp"
#include "travmap/feature_space.hpp"
#include "travmap/proprioception.hpp"

namespace travmap {

struct TerrainClass {
  std::string name;
  double r0 = 0.0;  ///< roughness at standstill
  double r1 = 0.0;  ///< roughness gain per m/s
  bool lethal = false;
  bool ood = false;  ///< held out of cluster fitting (foreign objects)
  double noise = 0.03;  ///< per-dimension embedding noise std
  std::optional<Vector> mean;  ///< latent embedding; generated from the seed when absent

  /// clamp(r0 + r1 * speed, 0, 1)
  double roughness(double speed) const;
};

struct Patch {
  std::string class_name;
  Eigen::Vector2d center = Eigen::Vector2d::Zero();
  double radius = 0.0;  ///< disc when > 0
  std::optional<Eigen::Vector4d> rect;  ///< x0 y0 x1 y1
};

struct RandomPatches {
  std::string class_name;
  int count = 0;
  double min_radius = 1.0;
  double max_radius = 3.0;
  bool avoid_course = true;  ///< keep at least trail_width + radius away from the course
  bool near_course = false;  ///< centre within a few metres of the course
};

struct CourseSpec {
  Eigen::Vector2d center{45.0, 25.0};
  double half_length = 40.0;  ///< x extent of each lobe tip from the centre
  double half_width = 15.0;   ///< y amplitude
  double waypoint_spacing = 10.0;
  double trail_width = 3.0;
  std::string trail_class = "trail";
  std::vector<Eigen::Vector2d> waypoints;  ///< explicit loop; overrides the figure-eight
};

struct WorldSpec {
  std::uint64_t seed = 1;
  int width = 180;   ///< cells
  int height = 100;
  double resolution = 0.5;
  int embedding_dim = 8;
  double embedding_scale = 0.5;  ///< std of generated class means
  std::string base_class = "smooth_grass";
  std::vector<TerrainClass> classes;
  CourseSpec course;
  bool draw_trail = true;
  std::vector<RandomPatches> random_patches;
  std::vector<Patch> patches;

  void validate() const;
};

/// Trail, two grasses, gravel, trees and a foreign object, with a figure-eight course.
WorldSpec default_world_spec();
WorldSpec parse_world_spec(const std::string& json_text);

class World {
 public:
  WorldSpec spec;
  std::vector<Vector> class_means;       ///< by class id
  Eigen::Array<int, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> classes;  ///< (j, i)
  std::vector<Eigen::Vector2d> waypoints;  ///< closed loop

  int width() const { return spec.width; }
  int height() const { return spec.height; }
  double resolution() const { return spec.resolution; }
  bool in_bounds(CellIndex c) const { return c.i >= 0 && c.j >= 0 && c.i < spec.width && c.j < spec.height; }
  CellIndex cell_at(const Eigen::Vector2d& p) const;
  Eigen::Vector2d cell_center(CellIndex c) const;
  /// Class under a world point; -1 outside the world.
  int class_at(const Eigen::Vector2d& p) const;
  int class_id(const std::string& name) const;
  const TerrainClass& terrain(int id) const { return spec.classes.at(static_cast<std::size_t>(id)); }
  /// Ground-truth roughness at p and speed; outside the world counts as the base class.
  double true_roughness(const Eigen::Vector2d& p, double speed) const;
  bool lethal_at(const Eigen::Vector2d& p) const;
  std::vector<int> class_areas() const;  ///< cells per class id
};

World generate_world(const WorldSpec& spec);

/// Draws `per_class` noisy embeddings from every non-OOD class.
std::vector<Embedding> sample_embeddings(const World& world, int per_class, std::uint64_t seed);

struct SensorSpec {
  double range = 15.0;          ///< m
  double half_angle_deg = 60.0;
};

struct SensedCell {
  CellIndex world_cell;
  Eigen::Vector2d center;
  int class_id = 0;
  FeatureDescriptor descriptor;
};

/// Forward sector scan. Cells within one cell of the sensor are always seen;
/// cells whose line of sight crosses a lethal non-OOD (tree) cell are omitted.
std::vector<SensedCell> sense(const World& world, const Eigen::Vector2d& position, double heading,
                              const SensorSpec& sensor, const ClusterSet& clusters, std::mt19937_64& rng);

/// Maps sensed world cells onto local grid indices (may be out of bounds).
std::vector<CellObservation> to_cell_observations(const std::vector<SensedCell>& sensed, const BevGrid& grid);

/// Band-limited Gaussian noise on each weighted channel of `params`, scaled so
/// the expected roughness equals r_true. Also emits zero a_x/a_y/a_z channels
/// where params do not use them.
ProprioWindow synthesize_proprio(double r_true, double duration, double sample_rate, const RoughnessParams& params,
                                 std::mt19937_64& rng);

/// Closed polyline helper: arc length bookkeeping for progress and look-ahead.
class Course {
 public:
  explicit Course(std::vector<Eigen::Vector2d> loop);
  double length() const { return cumulative_.back(); }
  Eigen::Vector2d point_at(double s) const;  ///< s wraps modulo length
  /// Arc position of the closest point, searched within [hint - back, hint + ahead].
  double project(const Eigen::Vector2d& p, double hint, double back, double ahead) const;
  const std::vector<Eigen::Vector2d>& points() const { return points_; }

 private:
  std::vector<Eigen::Vector2d> points_;
  std::vector<double> cumulative_;
};

/// Figure-eight (lemniscate of Gerono) waypoints at roughly equal spacing.
std::vector<Eigen::Vector2d> figure_eight(const CourseSpec& course);

}  // namespace travmap
