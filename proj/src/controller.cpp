#include "vantage/controller.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

namespace vantage {

const char* solverName(SolverUsed s) {
  return s == SolverUsed::kNewton ? "newton" : "constrained";
}

void ControllerConfig::validate() const {
  auto positive = [](double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw std::invalid_argument(std::string("ControllerConfig: ") + what +
                                  " must be positive and finite");
    }
  };
  positive(rate_hz, "rate_hz");
  positive(cartesian_step_limit, "cartesian_step_limit");
  positive(max_joint_speed, "max_joint_speed");
  positive(newton_tol, "newton_tol");
  positive(proximity_min_dist, "proximity_min_dist");
  if (newton_max_iter < 1) {
    throw std::invalid_argument(
        "ControllerConfig: newton_max_iter must be at least 1");
  }
  solver.validate();
}

Pose3d interpolateCartesian(const Pose3d& current, const Pose3d& desired,
                            double step_limit) {
  if (!(step_limit > 0.0)) {
    throw std::invalid_argument(
        "interpolateCartesian: step_limit must be positive");
  }
  const Eigen::Vector3d delta = desired.translation() - current.translation();
  const double distance = delta.norm();
  if (distance <= step_limit) return desired;

  const double fraction = step_limit / distance;
  const Eigen::Quaterniond qa(current.rotation());
  const Eigen::Quaterniond qb(desired.rotation());
  return Pose3d(qa.slerp(fraction, qb).toRotationMatrix(),
                current.translation() + fraction * delta);
}

QuinticTrajectory::QuinticTrajectory(const JointVector& q0,
                                     const JointVector& v0,
                                     const JointVector& a0,
                                     const JointVector& q1, double duration)
    : duration_(duration) {
  if (!(duration > 0.0)) {
    throw std::invalid_argument("QuinticTrajectory: duration must be positive");
  }
  const Eigen::Index n = q0.size();
  if (v0.size() != n || a0.size() != n || q1.size() != n) {
    throw DimensionMismatch("QuinticTrajectory: vector sizes disagree");
  }
  coeffs_.resize(6, n);
  const double t = duration;
  coeffs_.row(0) = q0.transpose();
  coeffs_.row(1) = (v0 * t).transpose();
  coeffs_.row(2) = (0.5 * t * t * a0).transpose();

  // In normalized time tau = t/T the three end conditions (position q1, zero
  // velocity, zero acceleration at tau = 1) give a constant, well-conditioned
  // 3x3 system for the tau^3..tau^5 coefficients.
  static const Eigen::Matrix3d kInverse = [] {
    Eigen::Matrix3d end_conditions;
    end_conditions << 1.0, 1.0, 1.0,  //
        3.0, 4.0, 5.0,                //
        6.0, 12.0, 20.0;
    return Eigen::Matrix3d(end_conditions.inverse());
  }();

  Eigen::Matrix<double, 3, Eigen::Dynamic> rhs(3, n);
  rhs.row(0) = (q1 - q0 - v0 * t - 0.5 * t * t * a0).transpose();
  rhs.row(1) = (-(v0 * t) - t * t * a0).transpose();
  rhs.row(2) = (-(t * t * a0)).transpose();
  coeffs_.bottomRows<3>() = kInverse * rhs;
}

JointVector QuinticTrajectory::position(double t) const {
  const double tau = std::clamp(t / duration_, 0.0, 1.0);
  JointVector out = coeffs_.row(5).transpose();
  for (int k = 4; k >= 0; --k) {
    out = out * tau + coeffs_.row(k).transpose();
  }
  return out;
}

JointVector QuinticTrajectory::velocity(double t) const {
  const double tau = std::clamp(t / duration_, 0.0, 1.0);
  JointVector out = 5.0 * coeffs_.row(5).transpose();
  for (int k = 4; k >= 1; --k) {
    out = out * tau + static_cast<double>(k) * coeffs_.row(k).transpose();
  }
  return out / duration_;
}

JointVector QuinticTrajectory::acceleration(double t) const {
  const double tau = std::clamp(t / duration_, 0.0, 1.0);
  JointVector out = 20.0 * coeffs_.row(5).transpose();
  for (int k = 4; k >= 2; --k) {
    out = out * tau + static_cast<double>(k * (k - 1)) * coeffs_.row(k).transpose();
  }
  return out / (duration_ * duration_);
}

Controller::Controller(const KinematicChain& chain, ControllerConfig config,
                       std::optional<NoGoZone> zone)
    : chain_(chain), config_(std::move(config)), zone_(std::move(zone)) {
  config_.validate();
}

ControllerState Controller::makeState(const JointVector& q0,
                                      std::uint64_t rng_seed) const {
  if (q0.size() != static_cast<Eigen::Index>(chain_.dof())) {
    throw DimensionMismatch("Controller::makeState: q0 size does not match "
                            "chain degrees of freedom");
  }
  if (!withinJointLimits(chain_, q0)) {
    throw std::invalid_argument(
        "Controller::makeState: start configuration violates joint limits");
  }
  const Pose3d start_pose = forwardKinematics(chain_, q0);
  if (zone_ && contains(*zone_, start_pose.translation())) {
    throw std::invalid_argument(
        "Controller::makeState: start configuration places the camera inside "
        "the no-go zone");
  }
  ControllerState state;
  state.q_current = q0;
  state.q_velocity = JointVector::Zero(q0.size());
  state.q_acceleration = JointVector::Zero(q0.size());
  state.rng_seed = rng_seed;
  return state;
}

TickReport Controller::tick(ControllerState& state,
                            const FeatureState& feature) const {
  const auto t_start = std::chrono::steady_clock::now();
  const PlacementConfig& placement = config_.placement;
  TickReport report;

  // 1. Naive geometric pose; a feature normal degenerate with world up falls
  //    back to the last valid horizontal axis.
  const std::optional<Pose3d> naive_opt = computeNaivePose(feature, placement);
  report.naive_pose =
      naive_opt ? *naive_opt
                : computeNaivePose(feature, placement, state.last_valid_x_axis);

  // 2. Workspace substitution: zone first, then floor.
  Pose3d target = report.naive_pose;
  if (zone_ && contains(*zone_, target.translation())) {
    report.constraints_hit.no_go_zone = true;
    target = boundaryPose(*zone_, target, feature, placement,
                          state.last_valid_x_axis);
  }
  if (config_.floor && config_.floor->below(target.translation())) {
    report.constraints_hit.below_floor = true;
    target = lookAtPose(config_.floor->project(target.translation()),
                        feature.translation(), placement,
                        state.last_valid_x_axis);
  }

  // 3. Recorded-only checks.
  report.constraints_hit.proximity = proximityViolated(
      target.translation(), feature, config_.proximity_min_dist);
  report.constraints_hit.side_orientation =
      !checkOrientationSide(target, placement);

  // 4. Cartesian gate from the pose the camera actually holds.
  const Pose3d current_pose = forwardKinematics(chain_, state.q_current);
  target = interpolateCartesian(current_pose, target,
                                config_.cartesian_step_limit);
  report.target_pose = target;

  // 5/6. Newton IK, with the constrained solver as fallback when Newton
  //      fails or its solution leaves the joint-limit box.
  const NewtonIkResult newton = ikNewton(chain_, target, state.q_current,
                                         config_.newton_tol,
                                         config_.newton_max_iter);
  report.newton_failed = !newton.converged;
  report.newton_iterations = newton.iterations;

  const ConstrainedIkProblem problem{chain_, target.translation(),
                                     feature.translation(), placement.world_up,
                                     config_.solver};
  const JointVector newton_q =
      newton.converged ? wrapToLimits(chain_, newton.q) : newton.q;
  if (newton.converged && withinJointLimits(chain_, newton_q)) {
    report.solver_used = SolverUsed::kNewton;
    report.q_command = newton_q;
  } else {
    if (newton.converged) report.constraints_hit.joint_limit = true;
    report.solver_used = SolverUsed::kConstrained;
    ConstrainedIkResult solved = solveConstrainedIk(problem, state.q_current);
    report.q_command = std::move(solved.q);
    report.solver_report = solved.report;
  }

  // Safety gate: holding the previous (valid by induction) configuration
  // beats commanding one whose camera position sits inside the zone.
  Pose3d commanded = forwardKinematics(chain_, report.q_command);
  if (zone_ && contains(*zone_, commanded.translation())) {
    report.constraints_hit.no_go_zone = true;
    report.q_command = state.q_current;
    commanded = current_pose;
  }
  report.commanded_pose = commanded;
  report.objective = objective(problem, report.q_command);

  // 7. Quintic advance toward q_command for one control period.
  const double dt = config_.dt();
  const double joint_distance = (report.q_command - state.q_current).norm();
  const double duration = std::max(joint_distance / config_.max_joint_speed, dt);
  const QuinticTrajectory trajectory(state.q_current, state.q_velocity,
                                     state.q_acceleration, report.q_command,
                                     duration);
  state.q_current = trajectory.position(dt);
  state.q_velocity = trajectory.velocity(dt);
  state.q_acceleration = trajectory.acceleration(dt);
  state.last_valid_x_axis = UnitVec3d(report.commanded_pose.axis(0));
  ++state.tick_index;

  report.loop_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start)
          .count();
  return report;
}

}  // namespace vantage
