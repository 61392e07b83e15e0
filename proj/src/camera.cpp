#include "vantage/camera.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "vantage/errors.hpp"

namespace vantage {
namespace {

constexpr double kFovToleranceDeg = 0.1;

double fovFromFocal(int extent, double focal) {
  return 2.0 * std::atan2(0.5 * extent, focal) * kDegPerRad;
}

double focalFromFov(int extent, double fov_deg) {
  return 0.5 * extent / std::tan(0.5 * fov_deg * kRadPerDeg);
}

}  // namespace

CameraModel CameraModel::fromFov(int width, int height, double hfov_deg,
                                 double vfov_deg, const Pose3d& extrinsic) {
  if (width <= 0 || height <= 0) {
    throw ConfigError("CameraModel: width and height must be positive");
  }
  if (!(hfov_deg > 0.0) || hfov_deg >= 180.0 || !(vfov_deg > 0.0) ||
      vfov_deg >= 180.0) {
    throw ConfigError("CameraModel: FoV angles must lie in (0, 180) degrees");
  }
  CameraModel cam;
  cam.width = width;
  cam.height = height;
  cam.hfov_deg = hfov_deg;
  cam.vfov_deg = vfov_deg;
  cam.fx = focalFromFov(width, hfov_deg);
  cam.fy = focalFromFov(height, vfov_deg);
  cam.cx = 0.5 * width;
  cam.cy = 0.5 * height;
  cam.extrinsic = extrinsic;
  cam.validate();
  return cam;
}

void CameraModel::validate() const {
  if (width <= 0 || height <= 0) {
    throw ConfigError("CameraModel: width and height must be positive");
  }
  if (!(fx > 0.0) || !(fy > 0.0)) {
    throw ConfigError("CameraModel: focal lengths must be positive");
  }
  if (std::abs(fovFromFocal(width, fx) - hfov_deg) > kFovToleranceDeg) {
    throw ConfigError("CameraModel: hfov disagrees with fx by more than 0.1 deg");
  }
  if (std::abs(fovFromFocal(height, fy) - vfov_deg) > kFovToleranceDeg) {
    throw ConfigError("CameraModel: vfov disagrees with fy by more than 0.1 deg");
  }
  if (!extrinsic.isValid(1e-6)) {
    throw ConfigError("CameraModel: extrinsic pose is not a rigid transform");
  }
}

CameraModel defaultCamera(const Pose3d& extrinsic) {
  return CameraModel::fromFov(1280, 960, 62.2, 48.8, extrinsic);
}

StereoRig StereoRig::withBaseline(double baseline,
                                  const CameraModel& prototype) {
  if (!(baseline > 0.0)) {
    throw ConfigError("StereoRig: baseline must be positive");
  }
  StereoRig rig;
  rig.baseline = baseline;
  rig.left = prototype;
  rig.left.extrinsic =
      prototype.extrinsic *
      Pose3d::Translation(Eigen::Vector3d(-0.5 * baseline, 0.0, 0.0));
  rig.right = prototype;
  rig.right.extrinsic =
      prototype.extrinsic *
      Pose3d::Translation(Eigen::Vector3d(0.5 * baseline, 0.0, 0.0));
  return rig;
}

void StereoRig::validate() const {
  if (!(baseline > 0.0)) {
    throw ConfigError("StereoRig: baseline must be positive");
  }
  left.validate();
  right.validate();
}

std::optional<Eigen::Vector2d> project(const CameraModel& cam,
                                       const Eigen::Vector3d& point_cam) {
  const double z = point_cam.z();
  if (z <= 0.0) return std::nullopt;
  return Eigen::Vector2d(cam.fx * point_cam.x() / z + cam.cx,
                         cam.fy * point_cam.y() / z + cam.cy);
}

std::optional<Eigen::Vector2d> projectFromRig(const CameraModel& cam,
                                              const Pose3d& rig_pose,
                                              const Eigen::Vector3d& point_world) {
  const Pose3d camera_in_world = rig_pose * cam.extrinsic;
  return project(cam, camera_in_world.inverse() * point_world);
}

bool visible(const CameraModel& cam, const Eigen::Vector3d& point_cam) {
  const auto uv = project(cam, point_cam);
  if (!uv) return false;
  return uv->x() >= 0.0 && uv->x() < cam.width && uv->y() >= 0.0 &&
         uv->y() < cam.height;
}

CentroidErrors centroidErrors(const CameraModel& cam,
                              const Eigen::Vector2d& uv) {
  const double center_u = 0.5 * cam.width;
  const double center_v = 0.5 * cam.height;
  CentroidErrors e;
  e.u_err_px = std::abs(uv.x() - center_u);
  e.v_err_px = std::abs(uv.y() - center_v);
  e.l2_px = std::hypot(uv.x() - center_u, uv.y() - center_v);
  e.l2_pct = 100.0 * e.l2_px / cam.diagonal();
  e.u_err_pct = 100.0 * e.u_err_px / cam.width;
  e.v_err_pct = 100.0 * e.v_err_px / cam.height;
  return e;
}

namespace {

Eigen::Index wrapIndex(Eigen::Index i, Eigen::Index n, BlurBoundary boundary) {
  if (i >= 0 && i < n) return i;
  if (boundary == BlurBoundary::kReplicate) {
    return i < 0 ? 0 : n - 1;
  }
  i %= n;
  return i < 0 ? i + n : i;
}

std::vector<double> gaussianKernel(double sigma) {
  const int radius = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> kernel(2 * radius + 1);
  double sum = 0.0;
  for (int k = -radius; k <= radius; ++k) {
    const double w = std::exp(-0.5 * (k / sigma) * (k / sigma));
    kernel[static_cast<std::size_t>(k + radius)] = w;
    sum += w;
  }
  for (double& w : kernel) w /= sum;
  return kernel;
}

}  // namespace

Eigen::ArrayXXd gaussianBlur(const Eigen::ArrayXXd& image, double sigma,
                             BlurBoundary boundary) {
  if (image.rows() == 0 || image.cols() == 0) {
    throw DegenerateInput("gaussianBlur: empty image");
  }
  if (!(sigma > 0.0)) {
    throw std::invalid_argument("gaussianBlur: sigma must be positive");
  }
  const std::vector<double> kernel = gaussianKernel(sigma);
  const auto radius = static_cast<Eigen::Index>(kernel.size() / 2);

  // Separable pass along rows, then columns.
  Eigen::ArrayXXd tmp(image.rows(), image.cols());
  for (Eigen::Index r = 0; r < image.rows(); ++r) {
    for (Eigen::Index c = 0; c < image.cols(); ++c) {
      double acc = 0.0;
      for (Eigen::Index k = -radius; k <= radius; ++k) {
        const Eigen::Index cc = wrapIndex(c + k, image.cols(), boundary);
        acc += kernel[static_cast<std::size_t>(k + radius)] * image(r, cc);
      }
      tmp(r, c) = acc;
    }
  }
  Eigen::ArrayXXd out(image.rows(), image.cols());
  for (Eigen::Index c = 0; c < image.cols(); ++c) {
    for (Eigen::Index r = 0; r < image.rows(); ++r) {
      double acc = 0.0;
      for (Eigen::Index k = -radius; k <= radius; ++k) {
        const Eigen::Index rr = wrapIndex(r + k, image.rows(), boundary);
        acc += kernel[static_cast<std::size_t>(k + radius)] * tmp(rr, c);
      }
      out(r, c) = acc;
    }
  }
  return out;
}

Eigen::ArrayXXd sharpen(const Eigen::ArrayXXd& image, double alpha,
                        double blur_sigma, BlurBoundary boundary) {
  if (image.rows() == 0 || image.cols() == 0) {
    throw DegenerateInput("sharpen: empty image");
  }
  if (alpha < 0.0) {
    throw std::invalid_argument("sharpen: alpha must be non-negative");
  }
  if (!(blur_sigma > 0.0)) {
    throw std::invalid_argument("sharpen: blur_sigma must be positive");
  }
  if (alpha == 0.0) return image;
  return (alpha + 1.0) * image - alpha * gaussianBlur(image, blur_sigma, boundary);
}

}  // namespace vantage
