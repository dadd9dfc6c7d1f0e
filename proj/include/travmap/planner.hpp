#pragma once

// Sampling-based MPPI over a kinematic bicycle, scoring rollouts on the
// rasterised cost and speed-limit layers.

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "travmap/bev_map.hpp"

namespace travmap {

struct VehicleState {
  double x = 0.0;
  double y = 0.0;
  double heading = 0.0;  ///< rad
  double speed = 0.0;    ///< m/s
  double steer = 0.0;    ///< front wheel angle, rad

  Eigen::Vector2d position() const { return {x, y}; }
};

struct VehicleParams {
  double wheelbase = 2.5;
  double max_steer = 0.5;       ///< rad
  double max_speed = 8.0;       ///< m/s
  double max_accel = 3.0;       ///< m/s^2, symmetric
  double max_steer_rate = 1.0;  ///< rad/s
};

/// Column 0: acceleration (m/s^2); column 1: steering rate (rad/s).
using ControlSequence = Eigen::Matrix<double, Eigen::Dynamic, 2>;
using Control = Eigen::RowVector2d;

VehicleState dynamics_step(const VehicleState& state, const Control& control, double dt, const VehicleParams& vehicle);

struct MppiParams {
  int horizon = 40;
  double dt = 0.1;
  int rollouts = 512;
  double temperature = 0.1;  ///< lambda
  double accel_noise = 1.0;
  double steer_rate_noise = 0.5;
  double lethal_penalty = 100.0;
  double lethal_cost = 0.9;  ///< cells at or above this cost count as lethal
  double speed_violation_weight = 10.0;
  double goal_weight = 1.0;
  double unknown_cost = 0.5;
  double unknown_speed_limit = 2.0;  ///< m/s, for cells with no speed estimate
  double creep_speed = 1.0;  ///< m/s; limits below this are not enforced, so the vehicle can leave over-budget terrain

  void validate() const;
};

/// Per-state map term: cell cost (or unknown prior), lethal penalty and
/// quadratic speed-limit violation.
double state_cost(const VehicleState& state, const BevGrid& grid, const MppiParams& params);

/// Sum of state_cost over the trajectory plus goal_weight * final distance to goal.
double rollout_cost(std::span<const VehicleState> trajectory, const BevGrid& grid, const Eigen::Vector2d& goal,
                    const MppiParams& params);

std::vector<VehicleState> simulate_rollout(const VehicleState& start, const ControlSequence& controls, double dt,
                                           const VehicleParams& vehicle);

/// w_m = exp(-(J_m - min J) / lambda), normalised. Non-finite costs get weight 0.
Eigen::VectorXd mppi_weights(std::span<const double> costs, double temperature);

class PlannerError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PlanResult {
  ControlSequence controls;  ///< new nominal; row 0 is the command to apply now
  ControlSequence update;    ///< controls minus the shifted previous nominal
  Eigen::VectorXd costs;     ///< per rollout
  Eigen::VectorXd weights;
  double min_cost = 0.0;
  double mean_cost = 0.0;
};

class MppiPlanner {
 public:
  MppiPlanner(MppiParams params, VehicleParams vehicle);

  const MppiParams& params() const { return params_; }
  const VehicleParams& vehicle() const { return vehicle_; }
  const ControlSequence& nominal() const { return nominal_; }
  void reset();

  /// Shifts the nominal by one step, samples `rollouts` perturbations (stream m
  /// seeded from (seed, m)), and returns the weighted average.
  PlanResult plan(const VehicleState& state, const BevGrid& grid, const Eigen::Vector2d& goal, std::uint64_t seed);

  /// Same update on caller-supplied control samples; does not shift the nominal.
  PlanResult update_from_samples(const VehicleState& state, const BevGrid& grid, const Eigen::Vector2d& goal,
                                 const std::vector<ControlSequence>& samples);

  ControlSequence clamp(ControlSequence u) const;

 private:
  double evaluate(const VehicleState& state, const ControlSequence& u, const BevGrid& grid,
                  const Eigen::Vector2d& goal) const;

  MppiParams params_;
  VehicleParams vehicle_;
  ControlSequence nominal_;
};

}  // namespace travmap
