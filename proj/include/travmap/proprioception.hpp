#pragma once

// Roughness from proprioceptive vibration: weighted bandpowers over the most
// recent part of each channel, and a derivative-free fit of the band layout to
// human-scored segments.

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "travmap/common.hpp"

namespace travmap {

struct ProprioWindow {
  double sample_rate = 100.0;  ///< Hz
  std::map<std::string, std::vector<double>> channels;  ///< a_x, a_y, a_z (m/s^2), shock_* (mm), ...

  double duration() const;
};

struct ChannelParams {
  std::string channel;
  double weight = 0.0;
  double window = 1.0;  ///< seconds, taken from the end of the channel
  double f_min = 0.0;
  double f_max = 1.0;
};

struct RoughnessParams {
  std::vector<ChannelParams> channels;
  /// 1 = single Hann periodogram. >1 switches to Welch averaging with that many
  /// half-overlapping segments.
  int welch_segments = 1;
};

struct AnnotatedSegment {
  ProprioWindow window;
  double score = 0.0;
};

/// One-sided PSD of a mean-removed, Hann-windowed signal, with a running
/// integral so any band can be read off in O(1).
class Periodogram {
 public:
  Periodogram(std::span<const double> signal, double sample_rate, int welch_segments = 1);

  double bin_width() const { return df_; }
  double nyquist() const { return nyquist_; }
  const std::vector<double>& density() const { return psd_; }

  /// Integral of the piecewise-linear PSD over [f_min, f_max].
  double band(double f_min, double f_max) const;

 private:
  double integral_to(double f) const;

  double df_ = 0.0;
  double nyquist_ = 0.0;
  std::vector<double> psd_;
  std::vector<double> cumulative_;
};

/// Bandpower in channel units squared. Needs at least 8 samples and
/// 0 <= f_min < f_max <= fs/2.
double bandpower(std::span<const double> channel, double fs, double f_min, double f_max);

/// Clamped weighted bandpower sum.
double roughness(const ProprioWindow& window, const RoughnessParams& params);

struct RoughnessFitOptions {
  int starts = 64;
  int max_evaluations = 1500;  ///< per Nelder-Mead run
  double min_window = 0.25;
  double max_window = 2.0;
};

struct RoughnessFit {
  RoughnessParams params;
  double loss = 0.0;  ///< cumulative L1 error over the segments
  double best_start_loss = 0.0;  ///< best loss among the raw multistart points
};

double cumulative_l1_loss(std::span<const AnnotatedSegment> segments, const RoughnessParams& params);

RoughnessFit fit_roughness_params(std::span<const AnnotatedSegment> segments, std::uint64_t seed,
                                  const RoughnessFitOptions& options = {});

/// One JSON object per line: {"sample_rate": fs, "score": s, "channels": {"a_z": [...], ...}}
std::vector<AnnotatedSegment> load_segments(const std::filesystem::path& path);
std::string serialize_segment(const AnnotatedSegment& segment);

std::string serialize_roughness_params(const RoughnessParams& params, double loss = -1.0);
RoughnessParams parse_roughness_params(std::string_view text);
RoughnessParams load_roughness_params(const std::filesystem::path& path);

/// Single-channel a_z, 1-10 Hz, 1 s window.
RoughnessParams default_roughness_params();

}  // namespace travmap
