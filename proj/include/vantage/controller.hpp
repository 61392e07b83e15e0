#pragma once

#include <cstdint>
#include <optional>

#include "vantage/kinematics.hpp"
#include "vantage/optimizer.hpp"
#include "vantage/workspace.hpp"

namespace vantage {

/// Mutable controller state threaded through tick(). Joint velocity and
/// acceleration are the interpolation start conditions for the next quintic.
struct ControllerState {
  JointVector q_current;
  JointVector q_velocity;
  JointVector q_acceleration;
  UnitVec3d last_valid_x_axis = UnitVec3d::UnitX();
  std::int64_t tick_index = 0;
  std::uint64_t rng_seed = 0;
};

/// Which workspace/kinematic checks fired during one tick.
struct ConstraintsHit {
  bool no_go_zone = false;
  bool below_floor = false;
  bool proximity = false;
  bool joint_limit = false;
  bool side_orientation = false;

  bool any() const {
    return no_go_zone || below_floor || proximity || joint_limit ||
           side_orientation;
  }
};

enum class SolverUsed { kNewton, kConstrained };

const char* solverName(SolverUsed s);

/// Everything observable about one tick. commanded_pose is the forward
/// kinematics of q_command; the objective breakdown is evaluated at q_command
/// against the tick's (post-substitution, post-interpolation) target.
struct TickReport {
  Pose3d naive_pose;
  Pose3d target_pose;
  Pose3d commanded_pose;
  JointVector q_command;
  ConstraintsHit constraints_hit;
  bool newton_failed = false;
  int newton_iterations = 0;
  SolverUsed solver_used = SolverUsed::kNewton;
  ObjectiveBreakdown objective;
  SolveReport solver_report;  // populated only when solver_used = constrained
  double loop_time = 0.0;     // wall-clock seconds
};

struct ControllerConfig {
  double rate_hz = 100.0;
  double cartesian_step_limit = 0.015;  // m per tick toward the target
  double max_joint_speed = 0.5;         // rad/s (m/s for prismatic joints)
  double newton_tol = 1e-6;
  int newton_max_iter = 50;
  double proximity_min_dist = 0.08;  // m
  std::optional<Floor> floor;
  PlacementConfig placement;
  SolverConfig solver;

  double dt() const { return 1.0 / rate_hz; }
  void validate() const;  // throws std::invalid_argument on bad values
};

/// Pose `step_limit` along the translation segment from current to desired
/// (or `desired` itself when already that close), with the rotation slerped
/// at the same fraction.
Pose3d interpolateCartesian(const Pose3d& current, const Pose3d& desired,
                            double step_limit);

/// Per-joint quintic from (q0, v0, a0) to (q1, 0, 0) over a fixed duration.
/// Coefficients are stored in normalized time, which keeps the boundary
/// solve well-conditioned for any duration.
class QuinticTrajectory {
 public:
  QuinticTrajectory(const JointVector& q0, const JointVector& v0,
                    const JointVector& a0, const JointVector& q1,
                    double duration);

  double duration() const { return duration_; }

  /// Evaluation clamps t to [0, duration].
  JointVector position(double t) const;
  JointVector velocity(double t) const;
  JointVector acceleration(double t) const;

 private:
  Eigen::Matrix<double, 6, Eigen::Dynamic> coeffs_;  // row k: tau^k coefficient
  double duration_;
};

/// Hierarchical per-tick pipeline: naive placement, workspace substitution,
/// recorded checks, Cartesian gate, Newton IK with constrained fallback, and
/// quintic advance of the joint state.
class Controller {
 public:
  Controller(const KinematicChain& chain, ControllerConfig config,
             std::optional<NoGoZone> zone = std::nullopt);

  /// At-rest state at q0. Throws std::invalid_argument when q0 is outside the
  /// joint limits or the camera starts inside the zone (the safety argument
  /// is inductive from a valid start).
  ControllerState makeState(const JointVector& q0,
                            std::uint64_t rng_seed = 0) const;

  /// Advances the state by one control period and reports what happened.
  /// q_command is always within joint limits and its camera position is never
  /// strictly inside the zone.
  TickReport tick(ControllerState& state, const FeatureState& feature) const;

  const KinematicChain& chain() const { return chain_; }
  const ControllerConfig& config() const { return config_; }
  const std::optional<NoGoZone>& zone() const { return zone_; }

 private:
  const KinematicChain& chain_;
  ControllerConfig config_;
  std::optional<NoGoZone> zone_;
};

}  // namespace vantage
