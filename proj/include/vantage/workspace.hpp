#pragma once

#include <array>
#include <optional>
#include <vector>

#include "vantage/placement.hpp"

namespace vantage {

/// Convex prism keep-out region stored as outward-facing planes. A point is
/// interior when it lies strictly on the negative side of every face; the
/// boundary itself counts as outside.
class NoGoZone {
 public:
  struct Face {
    Eigen::Vector3d normal;  // unit, outward
    Eigen::Vector3d point;   // any point on the plane
  };

  /// Validates unit normals and a nonempty interior. When no interior hint is
  /// given, a witness point is searched by alternating projection from the
  /// mean of the face points.
  explicit NoGoZone(std::vector<Face> faces,
                    std::optional<Eigen::Vector3d> interior_hint = std::nullopt);

  const std::vector<Face>& faces() const { return faces_; }

  /// Signed distance to face i: negative on the interior side.
  double signedDistance(const Eigen::Vector3d& p, int i) const {
    return (p - faces_[i].point).dot(faces_[i].normal);
  }

  /// Index of the face with the smallest |signed distance|; ties resolve to
  /// the lowest index.
  int closestFace(const Eigen::Vector3d& p) const;

 private:
  std::vector<Face> faces_;
};

/// Fits a 6-face rectangular prism to five operator-touched points: four
/// spanning the base, the fifth setting the height. The base plane is the
/// least-squares fit to the first four points; lateral faces come from the
/// minimum-area bounding rectangle of the projected base. Throws
/// DegenerateInput on a collinear base or a fifth point on the base plane.
NoGoZone fitPrism(const std::array<Eigen::Vector3d, 5>& points);

/// Strict interior test: true iff every signed distance is negative.
bool contains(const NoGoZone& zone, const Eigen::Vector3d& p);

/// Substitute pose for a zone-violating desired pose: the desired translation
/// projected onto the closest face's plane, re-aimed at the feature centroid
/// with the horizontal-x construction.
Pose3d boundaryPose(const NoGoZone& zone, const Pose3d& desired,
                    const FeatureState& feature, const PlacementConfig& cfg);

Pose3d boundaryPose(const NoGoZone& zone, const Pose3d& desired,
                    const FeatureState& feature, const PlacementConfig& cfg,
                    const UnitVec3d& fallback_x_axis);

/// True when the camera sits closer than min_dist to the feature (strict).
bool proximityViolated(const Eigen::Vector3d& p_cam, const FeatureState& feature,
                       double min_dist);

/// Horizontal keep-out half-space: everything below `height` along `up` is
/// forbidden.
struct Floor {
  double height = 0.0;
  Eigen::Vector3d up = Eigen::Vector3d::UnitZ();

  bool below(const Eigen::Vector3d& p) const { return up.dot(p) < height; }
  Eigen::Vector3d project(const Eigen::Vector3d& p) const {
    return p + (height - up.dot(p)) * up;
  }
};

}  // namespace vantage
