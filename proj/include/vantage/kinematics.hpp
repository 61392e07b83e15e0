#pragma once

#include <string>
#include <vector>

#include "vantage/geometry.hpp"

namespace vantage {

using JointVector = Eigen::VectorXd;
using Jacobian6 = Eigen::Matrix<double, 6, Eigen::Dynamic>;

enum class JointType { kRevolute, kPrismatic };

/// One serial-chain joint: a fixed offset transform from the previous joint
/// frame, then motion about/along `axis` expressed in this joint's frame.
struct Joint {
  JointType type = JointType::kRevolute;
  Pose3d offset;
  Eigen::Vector3d axis = Eigen::Vector3d::UnitZ();  // unit, local frame
};

/// Immutable serial chain with joint limits and a fixed end-effector-to-camera
/// offset. All poses are expressed in the chain base frame.
class KinematicChain {
 public:
  KinematicChain(std::vector<Joint> joints, JointVector lower, JointVector upper,
                 Pose3d tool_offset = Pose3d::Identity(),
                 std::string name = "");

  int dof() const { return static_cast<int>(joints_.size()); }
  const std::vector<Joint>& joints() const { return joints_; }
  const JointVector& lowerLimits() const { return lower_; }
  const JointVector& upperLimits() const { return upper_; }
  const Pose3d& toolOffset() const { return tool_offset_; }
  const std::string& name() const { return name_; }

  JointVector midRange() const { return 0.5 * (lower_ + upper_); }

 private:
  std::vector<Joint> joints_;
  JointVector lower_, upper_;
  Pose3d tool_offset_;
  std::string name_;
};

/// End-effector pose before the tool offset is applied.
Pose3d flangePose(const KinematicChain& chain, const JointVector& q);

/// Camera pose: flange pose composed with the chain's tool offset.
Pose3d forwardKinematics(const KinematicChain& chain, const JointVector& q);

/// Geometric Jacobian of the camera-frame origin, 6 x dof. Rows 0-2 are the
/// linear part (m), rows 3-5 the angular part (rad); column i corresponds to
/// joint i.
Jacobian6 jacobian(const KinematicChain& chain, const JointVector& q);

bool withinJointLimits(const KinematicChain& chain, const JointVector& q);

JointVector clampToLimits(const KinematicChain& chain, const JointVector& q);

/// Shifts out-of-range revolute coordinates by whole turns when an equivalent
/// angle lies inside the limits (R(q) == R(q + 2*pi*k)). IK iterations track
/// branches continuously and routinely land a full turn away from the
/// admissible interval; prismatic coordinates are returned unchanged.
JointVector wrapToLimits(const KinematicChain& chain, const JointVector& q);

struct NewtonIkResult {
  bool converged = false;
  JointVector q;
  int iterations = 0;
  double error_norm = 0.0;
};

/// Damped Newton iteration toward a full 6-DOF pose. The combined error is
/// the 2-norm of [translation error (m); axis-angle rotation error (rad)]
/// with unit weights. Joint limits are deliberately not enforced; the caller
/// gates on them. Non-convergence and irrecoverable rank deficiency are
/// reported through `converged`, never thrown.
NewtonIkResult ikNewton(const KinematicChain& chain, const Pose3d& target,
                        const JointVector& q0, double tol = 1e-6,
                        int max_iter = 50);

/// Loads a chain from the JSON schema documented in the README (joints in
/// order with type, axis, offset, limits, plus a tool offset). Throws
/// ConfigError with the offending path/field on malformed input.
KinematicChain loadChainFile(const std::string& path);

}  // namespace vantage
