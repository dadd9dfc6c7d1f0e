#pragma once

// Compressed feature space: K-means cluster centers over raw embeddings and the
// per-embedding distance descriptor (L1 distance to every center).

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "travmap/common.hpp"

namespace travmap {

using Embedding = Vector;
using FeatureDescriptor = Vector;

struct ClusterSet {
  Matrix centers;       ///< k x C, one center per row.
  double ood_threshold = 1.0;  ///< tau, in L1 distance units.

  Eigen::Index k() const { return centers.rows(); }
  Eigen::Index dim() const { return centers.cols(); }
};

struct KMeansOptions {
  int max_iterations = 100;
  double tolerance = 1e-6;  ///< stop when the largest center displacement falls below this
  /// Optional per-iteration objective trace (sum of squared distances after assignment).
  std::vector<double>* objective_trace = nullptr;
};

/// Lloyd's algorithm with k-means++ seeding. The threshold is filled from
/// default_ood_threshold() over the same samples.
ClusterSet fit_clusters(std::span<const Embedding> samples, int k, std::uint64_t seed,
                        const KMeansOptions& options = {});

/// out[j] = || d - F_j ||_1
FeatureDescriptor vlad_descriptor(const Embedding& d, const ClusterSet& clusters);

/// argmin_j desc[j], lowest index on ties.
int nearest_class(const FeatureDescriptor& desc);

inline double ood_score(const FeatureDescriptor& desc) { return desc.minCoeff(); }
inline bool is_ood(const FeatureDescriptor& desc, const ClusterSet& clusters) {
  return ood_score(desc) > clusters.ood_threshold;
}

/// 95th percentile of min-distance-to-center over `samples`.
double default_ood_threshold(std::span<const Embedding> samples, const ClusterSet& clusters,
                             double percentile = 0.95);

/// Uniform subsample without replacement; returns everything if count >= size.
std::vector<Embedding> subsample(std::span<const Embedding> samples, std::size_t count,
                                 std::uint64_t seed);

// Flat file: header "k C tau", then k rows of C reals.
std::string serialize_clusters(const ClusterSet& clusters);
ClusterSet parse_clusters(std::string_view text);
void save_clusters(const std::filesystem::path& path, const ClusterSet& clusters);
ClusterSet load_clusters(const std::filesystem::path& path);

/// One embedding per line, whitespace separated. Blank lines and '#' comments skipped.
std::vector<Embedding> load_embeddings(const std::filesystem::path& path);

}  // namespace travmap
