#include "vantage/placement.hpp"

namespace vantage {

FeatureState FeatureState::fromNormal(const Eigen::Vector3d& position,
                                      const UnitVec3d& normal,
                                      const Eigen::Vector3d& tangent_hint) {
  const Eigen::Vector3d y = normal.vec();
  Eigen::Vector3d x = tangent_hint - tangent_hint.dot(y) * y;
  const double n = x.norm();
  if (!(n > 1e-9))
    throw DegenerateInput("FeatureState: tangent hint parallel to normal");
  x /= n;
  const Eigen::Vector3d z = x.cross(y);
  Eigen::Matrix3d rot;
  rot.col(0) = x;
  rot.col(1) = y;
  rot.col(2) = z;
  return FeatureState(Pose3d(rot, position));
}

namespace {

Pose3d assembleLookAt(const Eigen::Vector3d& position,
                      const Eigen::Vector3d& z_axis,
                      const Eigen::Vector3d& x_axis) {
  Eigen::Matrix3d rot;
  rot.col(0) = x_axis;
  rot.col(1) = z_axis.cross(x_axis);
  rot.col(2) = z_axis;
  return Pose3d(rot, position);
}

}  // namespace

std::optional<Pose3d> lookAtPose(const Eigen::Vector3d& position,
                                 const Eigen::Vector3d& target,
                                 const PlacementConfig& cfg) {
  const Eigen::Vector3d view = target - position;
  const double dist = view.norm();
  if (!(dist > 1e-12))
    throw DegenerateInput("lookAtPose: camera position coincides with target");
  const Eigen::Vector3d z_c = view / dist;

  // x_c = z_w x z_c, defined only when the viewing axis is not (anti)parallel
  // to world up.
  const Eigen::Vector3d up = cfg.world_up.normalized();
  Eigen::Vector3d x_c = up.cross(z_c);
  const double sin_angle = x_c.norm();
  if (sin_angle < std::sin(cfg.degenerate_angle)) return std::nullopt;
  return assembleLookAt(position, z_c, x_c / sin_angle);
}

Pose3d lookAtPose(const Eigen::Vector3d& position, const Eigen::Vector3d& target,
                  const PlacementConfig& cfg, const UnitVec3d& fallback_x_axis) {
  if (auto pose = lookAtPose(position, target, cfg)) return *pose;
  // Keep the previous horizontal axis, re-orthogonalized against the new
  // optical axis, so the view stays continuous through the degeneracy.
  const Eigen::Vector3d z_c = (target - position).normalized();
  Eigen::Vector3d x_c = fallback_x_axis.vec() - fallback_x_axis.vec().dot(z_c) * z_c;
  const double n = x_c.norm();
  if (!(n > 1e-9))
    throw DegenerateInput("lookAtPose: fallback x-axis parallel to viewing axis");
  return assembleLookAt(position, z_c, x_c / n);
}

std::optional<Pose3d> computeNaivePose(const FeatureState& feature,
                                       const PlacementConfig& cfg) {
  const Eigen::Vector3d p_cam =
      feature.translation() + cfg.viewing_distance * feature.normal();
  return lookAtPose(p_cam, feature.translation(), cfg);
}

Pose3d computeNaivePose(const FeatureState& feature, const PlacementConfig& cfg,
                        const UnitVec3d& fallback_x_axis) {
  const Eigen::Vector3d p_cam =
      feature.translation() + cfg.viewing_distance * feature.normal();
  return lookAtPose(p_cam, feature.translation(), cfg, fallback_x_axis);
}

bool checkOrientationSide(const Pose3d& camera_pose, const PlacementConfig& cfg) {
  return angleBetween(camera_pose.axis(2), cfg.preferred_side_axis) <=
         cfg.side_angle_limit;
}

}  // namespace vantage
