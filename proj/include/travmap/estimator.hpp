#pragma once

// Cost and speed regression over buffer snapshots, CVaR risk shaping and the
// adaptive speed-risk controller.

#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <vector>

#include "travmap/bev_map.hpp"
#include "travmap/experience_buffer.hpp"
#include "travmap/gp.hpp"

namespace travmap {

using GprHyper = RbfHyper<double>;
using Prediction = GpPrediction<double>;

/// p(R | O, S): inputs [O ; S / speed_norm], targets R.
struct CostModel {
  GaussianProcess<double> gp;
  double speed_norm = 8.0;
};

/// p(S | O, R): inputs [O ; R / roughness_norm], targets S.
struct SpeedModel {
  GaussianProcess<double> gp;
  double roughness_norm = 1.0;
};

CostModel fit_cost_model(std::span<const ExperienceSample> snapshot, const GprHyper& hyper, double speed_norm);
Prediction predict_cost(const CostModel& model, const FeatureDescriptor& descriptor, double speed);

SpeedModel fit_speed_model(std::span<const ExperienceSample> snapshot, const GprHyper& hyper,
                           double roughness_norm = 1.0);
Prediction predict_speed(const SpeedModel& model, const FeatureDescriptor& descriptor, double r_max);

double normal_pdf(double x);
/// Inverse standard normal CDF (Acklam's rational approximation with one
/// Halley refinement step). p in (0, 1); returns -inf / +inf at 0 / 1.
double normal_quantile(double p);

/// mu + sqrt(v) * phi(Phi^-1(alpha)) / (1 - alpha): mean of the upper (1 - alpha)
/// tail of N(mu, v). alpha = 0 returns mu exactly.
double cvar_adjust(double mu, double variance, double alpha);

struct RiskState {
  double alpha_r = 0.0;  ///< user risk level for roughness
  double r_max = 0.3;    ///< user roughness budget in [0,1]
  double alpha_s = 0.5;  ///< adaptive speed risk level
  double alpha_min = 0.0;
  double alpha_max = 0.9;
  double delta_up = 0.01;
  double delta_down = 0.05;
  double speed_margin = 0.5;      ///< eps_v, m/s
  double roughness_margin = 0.05;  ///< eps_R
  double speed_hard_max = 8.0;    ///< m/s

  void validate() const;
};

/// Backs off on rough experience, explores when running at the limit on
/// ground noticeably smoother than the budget, otherwise leaves alpha_S alone.
RiskState update_alpha_s(const RiskState& state, double measured_speed, double speed_limit, double measured_roughness);

/// clamp(cvar(mu_S, v_S, alpha_S), 0, hard max)
double speed_limit(const SpeedModel& model, const FeatureDescriptor& descriptor, const RiskState& risk);

/// Both fitted models; replaced as a unit.
struct Models {
  CostModel cost;
  SpeedModel speed;
};

Models fit_models(std::span<const ExperienceSample> snapshot, const GprHyper& cost_hyper,
                  const GprHyper& speed_hyper, double speed_norm, double roughness_norm = 1.0);

/// Holder that lets a refit publish a new model while readers keep using the
/// one they loaded. Readers never see a partially built model.
class ModelSlot {
 public:
  std::shared_ptr<const Models> load() const {
    std::lock_guard lock(mutex_);
    return models_;
  }
  void store(std::shared_ptr<const Models> models) {
    std::lock_guard lock(mutex_);
    models_ = std::move(models);
  }

 private:
  mutable std::mutex mutex_;
  std::shared_ptr<const Models> models_;
};

struct RasterizeStats {
  int cells = 0;
  int ood_overrides = 0;
};

/// Writes cost and speed-limit layers for known cells. With `cells` given only
/// those flat indices are touched (unknown ones are skipped). OOD cells get cost
/// 1 and speed 0 irrespective of the models.
RasterizeStats rasterize(BevGrid& grid, const Models& models, const RiskState& risk, double query_speed,
                         std::optional<std::span<const Eigen::Index>> cells = std::nullopt);

}  // namespace travmap
