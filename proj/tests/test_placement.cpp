#include <doctest.h>

#include <random>

#include "vantage/placement.hpp"

using namespace vantage;

TEST_SUITE("placement") {

TEST_CASE("fromNormal builds the feature frame around its y-axis") {
  const FeatureState f = FeatureState::fromNormal(
      {0.1, 0.2, 0.3}, UnitVec3d{Eigen::Vector3d(0, 0, 1)}, {1, 0, 0.5});
  CHECK((f.normal() - Eigen::Vector3d(0, 0, 1)).norm() < 1e-14);
  // x-axis: tangent hint with its normal component removed.
  CHECK((f.pose().axis(0) - Eigen::Vector3d(1, 0, 0)).norm() < 1e-14);
  CHECK(f.pose().isValid());
  CHECK(f.translation() == Eigen::Vector3d(0.1, 0.2, 0.3));
}

TEST_CASE("naive pose: along the normal, aimed back, x horizontal") {
  const FeatureState f = FeatureState::fromNormal(
      {0.2, 0.0, 0.1}, UnitVec3d{Eigen::Vector3d(0, 1, 0)}, {1, 0, 0});
  PlacementConfig cfg;
  const auto pose = computeNaivePose(f, cfg);
  REQUIRE(pose.has_value());
  CHECK((pose->translation() - Eigen::Vector3d(0.2, 0.11, 0.1)).norm() < 1e-14);
  CHECK((pose->axis(2) - Eigen::Vector3d(0, -1, 0)).norm() < 1e-14);
  CHECK((pose->axis(0) - Eigen::Vector3d(1, 0, 0)).norm() < 1e-14);
  CHECK((pose->axis(1) - Eigen::Vector3d(0, 0, 1)).norm() < 1e-14);
}

TEST_CASE("naive pose properties over random normals") {
  std::mt19937_64 rng(41);
  auto u = [&](double lo, double hi) {
    return lo + (hi - lo) * ((rng() >> 11) * 0x1.0p-53);
  };
  PlacementConfig cfg;
  int checked = 0;
  while (checked < 200) {
    Eigen::Vector3d n(u(-1, 1), u(-1, 1), u(-1, 1));
    if (n.norm() < 1e-3) continue;
    n.normalize();
    if (std::abs(n.z()) > std::cos(2.0 * kRadPerDeg)) continue;  // skip near-degenerate
    ++checked;
    const FeatureState f = FeatureState::fromNormal(
        {u(-0.3, 0.3), u(-0.3, 0.3), u(-0.3, 0.3)}, UnitVec3d{n}, {1, 0, 0});
    const auto pose = computeNaivePose(f, cfg);
    REQUIRE(pose.has_value());
    // Distance, aim-through, horizontal x, and the upright tie-break.
    CHECK((pose->translation() - f.translation()).norm() ==
          doctest::Approx(cfg.viewing_distance).epsilon(1e-12));
    CHECK(angleBetween(pose->axis(2),
                       Eigen::Vector3d(f.translation() - pose->translation())) < 1e-12);
    CHECK(std::abs(pose->axis(0).dot(cfg.world_up)) < 1e-12);
    CHECK(pose->axis(1).dot(cfg.world_up) > 0.0);
    CHECK(pose->isValid(1e-12));
  }
}

TEST_CASE("degenerate normal: optional is empty, fallback overload holds x") {
  const FeatureState f = FeatureState::fromNormal(
      {0, 0, 0.2}, UnitVec3d{Eigen::Vector3d(0, 0, 1)}, {1, 0, 0});
  PlacementConfig cfg;
  CHECK(!computeNaivePose(f, cfg).has_value());

  const UnitVec3d keep{Eigen::Vector3d(0, 1, 0)};
  const Pose3d pose = computeNaivePose(f, cfg, keep);
  CHECK((pose.axis(0) - Eigen::Vector3d(0, 1, 0)).norm() < 1e-12);
  CHECK((pose.translation() - Eigen::Vector3d(0, 0, 0.31)).norm() < 1e-14);
  CHECK(pose.isValid(1e-12));
}

TEST_CASE("degenerate threshold is the configured half degree") {
  PlacementConfig cfg;
  auto tilted = [&](double deg) {
    const double a = deg * kRadPerDeg;
    return FeatureState::fromNormal(
        {0, 0, 0.2}, UnitVec3d{Eigen::Vector3d(std::sin(a), 0, std::cos(a))},
        {0, 1, 0});
  };
  CHECK(!computeNaivePose(tilted(0.4), cfg).has_value());
  CHECK(computeNaivePose(tilted(0.6), cfg).has_value());
}

TEST_CASE("lookAtPose aims the optical axis at the target") {
  PlacementConfig cfg;
  const Eigen::Vector3d eye(0.1, -0.2, 0.3), target(0.15, 0.1, 0.25);
  const auto pose = lookAtPose(eye, target, cfg);
  REQUIRE(pose.has_value());
  CHECK(angleBetween(pose->axis(2), Eigen::Vector3d(target - eye)) < 1e-12);
  CHECK(std::abs(pose->axis(0).dot(cfg.world_up)) < 1e-12);
  CHECK(pose->translation() == eye);
}

TEST_CASE("side check against the preferred axis") {
  PlacementConfig cfg;
  // Optical axis 60 degrees away from +x.
  const double a = 60.0 * kRadPerDeg;
  const Eigen::Vector3d target(std::cos(a), std::sin(a), 0.0);
  const Pose3d pose = *lookAtPose(Eigen::Vector3d::Zero(), target, cfg);

  cfg.side_angle_limit = 45.0 * kRadPerDeg;
  CHECK(!checkOrientationSide(pose, cfg));
  cfg.side_angle_limit = 75.0 * kRadPerDeg;
  CHECK(checkOrientationSide(pose, cfg));
}

}  // TEST_SUITE
