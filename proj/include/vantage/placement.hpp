#pragma once

#include <optional>

#include "vantage/geometry.hpp"

namespace vantage {

/// Tracked salient feature: a pose in the reference (base camera) frame whose
/// y-axis is the feature normal.
class FeatureState {
 public:
  explicit FeatureState(const Pose3d& pose) : pose_(pose) {}

  /// Builds a feature pose whose y-axis equals `normal` and whose x-axis is
  /// the component of `tangent_hint` orthogonal to the normal.
  static FeatureState fromNormal(const Eigen::Vector3d& position,
                                 const UnitVec3d& normal,
                                 const Eigen::Vector3d& tangent_hint);

  const Pose3d& pose() const { return pose_; }
  const Eigen::Vector3d& translation() const { return pose_.translation(); }
  Eigen::Vector3d normal() const { return pose_.axis(1); }

 private:
  Pose3d pose_;
};

struct PlacementConfig {
  double viewing_distance = 0.11;  // desired camera-to-feature distance (m)
  Eigen::Vector3d world_up = Eigen::Vector3d::UnitZ();
  Eigen::Vector3d preferred_side_axis = Eigen::Vector3d::UnitX();
  double side_angle_limit = M_PI / 2.0;  // rad

  // Inputs closer than this to +/- world_up are treated as degenerate for
  // the horizontal-x construction.
  double degenerate_angle = 0.5 * kRadPerDeg;
};

/// Camera pose at `position` with its optical axis (z) through `target` and
/// its x-axis horizontal (orthogonal to world_up). Empty when the viewing
/// direction is within cfg.degenerate_angle of +/- world_up.
std::optional<Pose3d> lookAtPose(const Eigen::Vector3d& position,
                                 const Eigen::Vector3d& target,
                                 const PlacementConfig& cfg);

/// Same construction, but a degenerate viewing direction falls back to the
/// supplied previous x-axis, re-orthogonalized against the new optical axis.
Pose3d lookAtPose(const Eigen::Vector3d& position, const Eigen::Vector3d& target,
                  const PlacementConfig& cfg, const UnitVec3d& fallback_x_axis);

/// Ideal geometric camera pose: positioned viewing_distance along the feature
/// normal, optical axis back through the feature origin, x-axis horizontal.
/// Empty when the feature normal is degenerate with world_up.
std::optional<Pose3d> computeNaivePose(const FeatureState& feature,
                                       const PlacementConfig& cfg);

Pose3d computeNaivePose(const FeatureState& feature, const PlacementConfig& cfg,
                        const UnitVec3d& fallback_x_axis);

/// True when the camera viewing axis stays within cfg.side_angle_limit of
/// cfg.preferred_side_axis.
bool checkOrientationSide(const Pose3d& camera_pose, const PlacementConfig& cfg);

}  // namespace vantage
