#include "vantage/workspace.hpp"

#include <Eigen/SVD>

#include <limits>

namespace vantage {

namespace {

bool strictlyInside(const std::vector<NoGoZone::Face>& faces,
                    const Eigen::Vector3d& p) {
  for (const auto& f : faces)
    if ((p - f.point).dot(f.normal) >= 0.0) return false;
  return true;
}

// Alternating projection with a small slack; lands on an interior point when
// one exists within a few hundred sweeps.
std::optional<Eigen::Vector3d> findInteriorWitness(
    const std::vector<NoGoZone::Face>& faces) {
  Eigen::Vector3d x = Eigen::Vector3d::Zero();
  for (const auto& f : faces) x += f.point;
  x /= double(faces.size());

  constexpr double kSlack = 1e-7;
  for (int iter = 0; iter < 500; ++iter) {
    double worst = -std::numeric_limits<double>::infinity();
    int worst_face = -1;
    for (size_t i = 0; i < faces.size(); ++i) {
      const double d = (x - faces[i].point).dot(faces[i].normal);
      if (d > worst) {
        worst = d;
        worst_face = static_cast<int>(i);
      }
    }
    if (worst < -kSlack / 2) return x;
    x -= (worst + kSlack) * faces[worst_face].normal;
  }
  return std::nullopt;
}

}  // namespace

NoGoZone::NoGoZone(std::vector<Face> faces,
                   std::optional<Eigen::Vector3d> interior_hint)
    : faces_(std::move(faces)) {
  if (faces_.empty()) throw DegenerateInput("NoGoZone: no faces");
  for (auto& f : faces_) {
    const double n = f.normal.norm();
    if (!(n > 1e-12)) throw DegenerateInput("NoGoZone: zero face normal");
    f.normal /= n;
  }
  if (interior_hint) {
    if (!strictlyInside(faces_, *interior_hint))
      throw DegenerateInput("NoGoZone: interior hint not strictly inside");
  } else if (!findInteriorWitness(faces_)) {
    throw DegenerateInput("NoGoZone: empty interior");
  }
}

int NoGoZone::closestFace(const Eigen::Vector3d& p) const {
  int best = 0;
  double best_abs = std::abs(signedDistance(p, 0));
  for (int i = 1; i < static_cast<int>(faces_.size()); ++i) {
    const double a = std::abs(signedDistance(p, i));
    if (a < best_abs) {
      best_abs = a;
      best = i;
    }
  }
  return best;
}

NoGoZone fitPrism(const std::array<Eigen::Vector3d, 5>& points) {
  // Base spans points 0-3; point 4 sets the height.
  for (int a = 0; a < 4; ++a)
    for (int b = a + 1; b < 4; ++b)
      for (int c = b + 1; c < 4; ++c) {
        const Eigen::Vector3d area =
            (points[b] - points[a]).cross(points[c] - points[a]);
        if (area.norm() <= 1e-12)
          throw DegenerateInput("fitPrism: three collinear base points");
      }

  Eigen::Vector3d base_centroid = Eigen::Vector3d::Zero();
  for (int i = 0; i < 4; ++i) base_centroid += points[i];
  base_centroid /= 4.0;

  Eigen::Matrix<double, 4, 3> centered;
  for (int i = 0; i < 4; ++i) centered.row(i) = points[i] - base_centroid;
  Eigen::JacobiSVD<Eigen::Matrix<double, 4, 3>> svd(centered,
                                                    Eigen::ComputeFullV);
  if (svd.singularValues()(1) <= 1e-12)
    throw DegenerateInput("fitPrism: base points do not span a plane");
  const Eigen::Vector3d e1 = svd.matrixV().col(0);
  const Eigen::Vector3d e2 = svd.matrixV().col(1);
  Eigen::Vector3d up = svd.matrixV().col(2);  // base plane normal

  double height = (points[4] - base_centroid).dot(up);
  if (std::abs(height) <= 1e-9)
    throw DegenerateInput("fitPrism: apex point lies on the base plane");
  if (height < 0) {
    up = -up;
    height = -height;
  }

  // Minimum-area bounding rectangle of the projected base, by sweeping the
  // candidate edge directions of the (at most 4-point) base polygon.
  std::array<Eigen::Vector2d, 4> flat;
  for (int i = 0; i < 4; ++i)
    flat[i] = Eigen::Vector2d(centered.row(i).dot(e1), centered.row(i).dot(e2));

  double best_area = std::numeric_limits<double>::infinity();
  double best_angle = 0.0;
  Eigen::Vector4d best_extent;  // min1, max1, min2, max2
  for (int a = 0; a < 4; ++a)
    for (int b = a + 1; b < 4; ++b) {
      const Eigen::Vector2d edge = flat[b] - flat[a];
      if (edge.norm() <= 1e-12) continue;
      const double angle = std::atan2(edge.y(), edge.x());
      const Eigen::Vector2d d1(std::cos(angle), std::sin(angle));
      const Eigen::Vector2d d2(-d1.y(), d1.x());
      double min1 = std::numeric_limits<double>::infinity(), max1 = -min1;
      double min2 = min1, max2 = -min1;
      for (const auto& p : flat) {
        min1 = std::min(min1, p.dot(d1));
        max1 = std::max(max1, p.dot(d1));
        min2 = std::min(min2, p.dot(d2));
        max2 = std::max(max2, p.dot(d2));
      }
      const double area = (max1 - min1) * (max2 - min2);
      if (area < best_area - 1e-15) {
        best_area = area;
        best_angle = angle;
        best_extent << min1, max1, min2, max2;
      }
    }
  if (!(best_area > 1e-12))
    throw DegenerateInput("fitPrism: base rectangle has no area");

  const Eigen::Vector2d d1(std::cos(best_angle), std::sin(best_angle));
  const Eigen::Vector2d d2(-d1.y(), d1.x());
  const Eigen::Vector3d lat1 = d1.x() * e1 + d1.y() * e2;
  const Eigen::Vector3d lat2 = d2.x() * e1 + d2.y() * e2;

  std::vector<NoGoZone::Face> faces;
  faces.push_back({-up, base_centroid});
  faces.push_back({up, base_centroid + height * up});
  faces.push_back({lat1, base_centroid + best_extent(1) * lat1});
  faces.push_back({-lat1, base_centroid + best_extent(0) * lat1});
  faces.push_back({lat2, base_centroid + best_extent(3) * lat2});
  faces.push_back({-lat2, base_centroid + best_extent(2) * lat2});

  Eigen::Vector3d hint = Eigen::Vector3d::Zero();
  for (const auto& p : points) hint += p;
  hint /= 5.0;
  return NoGoZone(std::move(faces), hint);
}

bool contains(const NoGoZone& zone, const Eigen::Vector3d& p) {
  return strictlyInside(zone.faces(), p);
}

Pose3d boundaryPose(const NoGoZone& zone, const Pose3d& desired,
                    const FeatureState& feature, const PlacementConfig& cfg) {
  const Eigen::Vector3d& p = desired.translation();
  const int i = zone.closestFace(p);
  const Eigen::Vector3d p_boundary =
      p - zone.signedDistance(p, i) * zone.faces()[i].normal;
  auto pose = lookAtPose(p_boundary, feature.translation(), cfg);
  if (!pose)
    throw DegenerateInput("boundaryPose: viewing axis degenerate with world up");
  return *pose;
}

Pose3d boundaryPose(const NoGoZone& zone, const Pose3d& desired,
                    const FeatureState& feature, const PlacementConfig& cfg,
                    const UnitVec3d& fallback_x_axis) {
  const Eigen::Vector3d& p = desired.translation();
  const int i = zone.closestFace(p);
  const Eigen::Vector3d p_boundary =
      p - zone.signedDistance(p, i) * zone.faces()[i].normal;
  return lookAtPose(p_boundary, feature.translation(), cfg, fallback_x_axis);
}

bool proximityViolated(const Eigen::Vector3d& p_cam, const FeatureState& feature,
                       double min_dist) {
  if (!(min_dist > 0))
    throw std::invalid_argument("proximityViolated: min_dist must be positive");
  return (p_cam - feature.translation()).norm() < min_dist;
}

}  // namespace vantage
