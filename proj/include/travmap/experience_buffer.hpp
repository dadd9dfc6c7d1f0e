#pragma once

// Bounded experience store. At capacity it discards the oldest sample of the most
// populated (semantic class, speed bin) pair, so rarely seen terrain survives long
// stretches of homogeneous driving. Pinned samples are never discarded.

#include <cstdint>
#include <filesystem>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "travmap/feature_space.hpp"

namespace travmap {

struct ExperienceSample {
  FeatureDescriptor descriptor;  ///< O
  double speed = 0.0;            ///< S, m/s
  double roughness = 0.0;        ///< R in [0,1]
  double time = 0.0;             ///< s
  bool pinned = false;
  std::uint64_t id = 0;          ///< assigned by the buffer, increasing with insertion
};

enum class EvictionPolicy {
  class_speed,  ///< oldest member of the most common (class, speed bin) pair
  fifo,         ///< oldest unpinned sample
};

struct BufferConfig {
  std::size_t capacity = 512;
  double speed_bin_width = 1.0;  ///< m/s
  double max_speed = 8.0;        ///< S_norm used for joint-space distances
  EvictionPolicy policy = EvictionPolicy::class_speed;
};

class BufferFull : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ExperienceBuffer {
 public:
  explicit ExperienceBuffer(BufferConfig config = {});
  ExperienceBuffer(const ExperienceBuffer& other);
  ExperienceBuffer& operator=(const ExperienceBuffer& other);

  const BufferConfig& config() const { return config_; }
  std::size_t size() const;
  std::size_t pinned_count() const;

  /// Appends and evicts down to capacity. Throws InvalidInput on non-finite
  /// fields, negative speed or roughness outside [0,1].
  void insert(ExperienceSample sample);

  /// Removes one unpinned sample per the configured policy and returns its id.
  /// Throws BufferFull when every sample is pinned.
  std::uint64_t evict();

  /// One pinned sample per speed. Pinned total may not exceed capacity / 2.
  void pin(const FeatureDescriptor& descriptor, double roughness, const std::vector<double>& speeds,
           double time = 0.0);

  /// Consistent copy of the contents, ordered by id.
  std::vector<ExperienceSample> snapshot() const;

  int speed_bin(double speed) const;

  /// Mean Euclidean distance over unordered pairs of [O ; S / max_speed].
  double avg_pairwise_distance() const;

  /// Number of samples accepted since construction (evicted ones included).
  std::uint64_t inserted_total() const;

  // Checkpoint: first line "# travmap-buffer v1 capacity bin max_speed policy next_id",
  // then one line per sample: "id t S R pinned d_1 .. d_k".
  std::string serialize() const;
  static ExperienceBuffer parse(std::string_view text);
  void save(const std::filesystem::path& path) const;
  static ExperienceBuffer load(const std::filesystem::path& path);

 private:
  void validate(const ExperienceSample& s) const;
  std::uint64_t evict_locked();
  void add_locked(ExperienceSample sample);

  BufferConfig config_;
  std::vector<ExperienceSample> samples_;  // id order
  std::uint64_t next_id_ = 0;
  std::uint64_t inserted_ = 0;
  mutable std::mutex mutex_;
};

/// Joint-space average pairwise distance of an arbitrary sample list.
double avg_pairwise_distance(const std::vector<ExperienceSample>& samples, double max_speed);

}  // namespace travmap
