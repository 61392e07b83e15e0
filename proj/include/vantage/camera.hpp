#pragma once

#include <optional>

#include "vantage/geometry.hpp"

namespace vantage {

/// Ideal pinhole camera. Focal lengths and the field of view are stored
/// redundantly and must agree (the constructor enforces consistency within
/// 0.1 degrees). `extrinsic` places the camera in the rig frame.
struct CameraModel {
  double fx = 0.0, fy = 0.0;  // focal lengths (px)
  double cx = 0.0, cy = 0.0;  // principal point (px)
  int width = 0, height = 0;  // sensor size (px)
  double hfov_deg = 0.0, vfov_deg = 0.0;
  Pose3d extrinsic;  // camera frame in rig frame

  /// Derives fx, fy from the field of view with the principal point at the
  /// sensor center. Throws ConfigError on non-positive sizes or angles.
  static CameraModel fromFov(int width, int height, double hfov_deg,
                             double vfov_deg,
                             const Pose3d& extrinsic = Pose3d::Identity());

  /// Throws ConfigError when sizes are non-positive or the stored FoV
  /// disagrees with the focal lengths by more than 0.1 degrees.
  void validate() const;

  double diagonal() const { return std::hypot(width, height); }
};

/// Default sensor used throughout: 1280x960 with a 62.2 x 48.8 degree FoV.
CameraModel defaultCamera(const Pose3d& extrinsic = Pose3d::Identity());

/// Parallel-axis stereo pair separated by `baseline` along the rig x-axis
/// (left at -baseline/2, right at +baseline/2).
struct StereoRig {
  CameraModel left;
  CameraModel right;
  double baseline = 0.015;  // meters

  static StereoRig withBaseline(double baseline,
                                const CameraModel& prototype = defaultCamera());

  void validate() const;  // throws ConfigError on baseline <= 0
};

/// Pinhole projection of a camera-frame point. Empty for z <= 0 (point at or
/// behind the optical center).
std::optional<Eigen::Vector2d> project(const CameraModel& cam,
                                       const Eigen::Vector3d& point_cam);

/// Projects a world point seen from a camera mounted at `rig_pose * extrinsic`.
std::optional<Eigen::Vector2d> projectFromRig(const CameraModel& cam,
                                              const Pose3d& rig_pose,
                                              const Eigen::Vector3d& point_world);

/// True iff the point projects in front of the camera and inside the pixel
/// bounds [0, width) x [0, height).
bool visible(const CameraModel& cam, const Eigen::Vector3d& point_cam);

/// Pixel-space error of a projected centroid relative to the geometric screen
/// center (width/2, height/2). Percentages are normalized by the screen
/// diagonal (l2) and by width/height (per-axis).
struct CentroidErrors {
  double l2_px = 0.0;
  double l2_pct = 0.0;
  double u_err_px = 0.0;
  double u_err_pct = 0.0;
  double v_err_px = 0.0;
  double v_err_pct = 0.0;
};

CentroidErrors centroidErrors(const CameraModel& cam, const Eigen::Vector2d& uv);

enum class BlurBoundary { kReplicate, kPeriodic };

/// Gaussian blur with a truncated (3 sigma) separable kernel.
Eigen::ArrayXXd gaussianBlur(const Eigen::ArrayXXd& image, double sigma,
                             BlurBoundary boundary = BlurBoundary::kReplicate);

/// Unsharp masking: S = (alpha+1)*I - alpha*GaussianBlur(I, sigma).
/// alpha = 0 returns the input unchanged. Throws on an empty image,
/// alpha < 0, or sigma <= 0.
Eigen::ArrayXXd sharpen(const Eigen::ArrayXXd& image, double alpha,
                        double blur_sigma,
                        BlurBoundary boundary = BlurBoundary::kReplicate);

}  // namespace vantage
