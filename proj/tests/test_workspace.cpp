#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "vantage/workspace.hpp"

using namespace vantage;

namespace {

NoGoZone unitCube() {
  return fitPrism({Eigen::Vector3d(0, 0, 0), Eigen::Vector3d(1, 0, 0),
                   Eigen::Vector3d(1, 1, 0), Eigen::Vector3d(0, 1, 0),
                   Eigen::Vector3d(0.5, 0.5, 1.0)});
}

// A prism in general position: rotated unit-ish box plus an offset.
NoGoZone randomPrism(std::mt19937_64& rng, Pose3d* frame = nullptr,
                     Eigen::Vector3d* extents = nullptr) {
  auto u = [&](double lo, double hi) {
    return lo + (hi - lo) * ((rng() >> 11) * 0x1.0p-53);
  };
  Eigen::Vector3d axis(u(-1, 1), u(-1, 1), u(-1, 1));
  while (axis.norm() < 1e-6) axis = Eigen::Vector3d(u(-1, 1), u(-1, 1), u(-1, 1));
  const Pose3d t = Pose3d::FromAxisAngle(axis.normalized(), u(-3, 3),
                                         {u(-0.5, 0.5), u(-0.5, 0.5), u(-0.5, 0.5)});
  const double ex = u(0.05, 0.4), ey = u(0.05, 0.4), ez = u(0.05, 0.4);
  const std::array<Eigen::Vector3d, 5> pts = {
      t * Eigen::Vector3d(0, 0, 0), t * Eigen::Vector3d(ex, 0, 0),
      t * Eigen::Vector3d(ex, ey, 0), t * Eigen::Vector3d(0, ey, 0),
      t * Eigen::Vector3d(ex / 2, ey / 2, ez)};
  if (frame) *frame = t;
  if (extents) *extents = Eigen::Vector3d(ex, ey, ez);
  return fitPrism(pts);
}

}  // namespace

TEST_SUITE("workspace") {

TEST_CASE("fitPrism on the unit cube") {
  const NoGoZone zone = unitCube();
  CHECK(zone.faces().size() == 6);
  for (const auto& f : zone.faces())
    CHECK(f.normal.norm() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(contains(zone, {0.5, 0.5, 0.5}));
  CHECK(!contains(zone, {1.5, 0.5, 0.5}));
  CHECK(!contains(zone, {0.5, 0.5, -0.1}));
  // The boundary counts as outside.
  CHECK(!contains(zone, {0.0, 0.5, 0.5}));
  CHECK(!contains(zone, {0.5, 0.5, 1.0}));
}

TEST_CASE("boundary pose projects onto the closest face and re-aims") {
  const NoGoZone zone = unitCube();
  const FeatureState feature = FeatureState::fromNormal(
      {0.5, 0.5, 1.6}, UnitVec3d{Eigen::Vector3d(0, 1, 0)}, {1, 0, 0});
  PlacementConfig cfg;
  const Pose3d desired = Pose3d::Translation({0.5, 0.5, 0.9});  // 0.1 below the top
  const Pose3d out = boundaryPose(zone, desired, feature, cfg);
  CHECK((out.translation() - Eigen::Vector3d(0.5, 0.5, 1.0)).norm() < 1e-12);
  CHECK(!contains(zone, out.translation()));
  CHECK(angleBetween(out.axis(2),
                     Eigen::Vector3d(feature.translation() - out.translation())) < 1e-12);
}

TEST_CASE("closest-face ties resolve to the lowest index") {
  const NoGoZone zone = unitCube();
  // Equidistant from several faces at the center: must pick face 0.
  CHECK(zone.closestFace({0.5, 0.5, 0.5}) == 0);
}

TEST_CASE("signed distance is negative inside, positive outside") {
  const NoGoZone zone = unitCube();
  for (size_t i = 0; i < zone.faces().size(); ++i)
    CHECK(zone.signedDistance({0.5, 0.5, 0.5}, static_cast<int>(i)) < 0.0);
  bool some_positive = false;
  for (size_t i = 0; i < zone.faces().size(); ++i)
    some_positive |= zone.signedDistance({2.0, 0.5, 0.5}, static_cast<int>(i)) > 0.0;
  CHECK(some_positive);
}

TEST_CASE("randomized prisms: projection properties and the half-space oracle") {
  std::mt19937_64 rng(51);
  auto u = [&](double lo, double hi) {
    return lo + (hi - lo) * ((rng() >> 11) * 0x1.0p-53);
  };
  PlacementConfig cfg;
  for (int trial = 0; trial < 20; ++trial) {
    Pose3d frame;
    Eigen::Vector3d ext;
    const NoGoZone zone = randomPrism(rng, &frame, &ext);

    for (int s = 0; s < 50; ++s) {
      const Eigen::Vector3d inside =
          frame * Eigen::Vector3d(u(0.01, 0.99) * ext.x(), u(0.01, 0.99) * ext.y(),
                                  u(0.01, 0.99) * ext.z());
      CHECK(contains(zone, inside));
      const int face = zone.closestFace(inside);
      const FeatureState feature = FeatureState::fromNormal(
          inside + Eigen::Vector3d(0.5, 0.5, 0.5), UnitVec3d{Eigen::Vector3d(0, 1, 0)},
          {1, 0, 0});
      const Pose3d out = boundaryPose(zone, Pose3d::Translation(inside), feature, cfg,
                                      UnitVec3d::UnitX());
      // On the face plane, displaced along its normal, and no longer interior.
      CHECK(std::abs(zone.signedDistance(out.translation(), face)) < 1e-9);
      const Eigen::Vector3d disp = out.translation() - inside;
      CHECK((disp - disp.dot(zone.faces()[face].normal) * zone.faces()[face].normal)
                .norm() < 1e-9);
      CHECK(!contains(zone, out.translation()));
    }

    for (int s = 0; s < 200; ++s) {
      const Eigen::Vector3d p(u(-1.5, 1.5), u(-1.5, 1.5), u(-1.5, 1.5));
      CHECK(contains(zone, p) == oracle::halfSpaceInside(zone.faces(), p));
    }
  }
}

TEST_CASE("zone construction rejects bad inputs") {
  CHECK_THROWS_AS(NoGoZone(std::vector<NoGoZone::Face>{}), DegenerateInput);
  CHECK_THROWS_AS(
      NoGoZone({{Eigen::Vector3d::Zero(), Eigen::Vector3d::Zero()}}), DegenerateInput);
  // Two opposing faces with no gap: empty interior.
  CHECK_THROWS_AS(NoGoZone({{Eigen::Vector3d::UnitX(), Eigen::Vector3d::Zero()},
                            {-Eigen::Vector3d::UnitX(), Eigen::Vector3d(0.001, 0, 0)}}),
                  DegenerateInput);
  // Hint on the wrong side.
  CHECK_THROWS_AS(NoGoZone({{Eigen::Vector3d::UnitX(), Eigen::Vector3d::Zero()}},
                           Eigen::Vector3d(1.0, 0, 0)),
                  DegenerateInput);
}

TEST_CASE("fitPrism rejects degenerate point sets") {
  CHECK_THROWS_AS(fitPrism({Eigen::Vector3d(0, 0, 0), Eigen::Vector3d(1, 0, 0),
                            Eigen::Vector3d(2, 0, 0), Eigen::Vector3d(0, 1, 0),
                            Eigen::Vector3d(0.5, 0.5, 1)}),
                  DegenerateInput);
  CHECK_THROWS_AS(fitPrism({Eigen::Vector3d(0, 0, 0), Eigen::Vector3d(1, 0, 0),
                            Eigen::Vector3d(1, 1, 0), Eigen::Vector3d(0, 1, 0),
                            Eigen::Vector3d(0.5, 0.5, 0.0)}),
                  DegenerateInput);
}

TEST_CASE("proximity check is a strict inequality") {
  const FeatureState f = FeatureState::fromNormal(
      Eigen::Vector3d::Zero(), UnitVec3d{Eigen::Vector3d(0, 1, 0)}, {1, 0, 0});
  CHECK(proximityViolated({0.07, 0, 0}, f, 0.08));
  CHECK(!proximityViolated({0.08, 0, 0}, f, 0.08));
  CHECK(!proximityViolated({0.11, 0, 0}, f, 0.08));
  CHECK_THROWS(proximityViolated({0.1, 0, 0}, f, 0.0));
}

TEST_CASE("floor membership and projection") {
  Floor floor;
  floor.height = 0.05;
  CHECK(floor.below({0.2, 0.3, 0.04}));
  CHECK(!floor.below({0.2, 0.3, 0.05}));
  // project lands on the plane from either side; the caller gates on below().
  CHECK((floor.project({0.2, 0.3, -0.1}) - Eigen::Vector3d(0.2, 0.3, 0.05)).norm() <
        1e-15);
  CHECK((floor.project({0.2, 0.3, 0.5}) - Eigen::Vector3d(0.2, 0.3, 0.05)).norm() <
        1e-15);
}

}  // TEST_SUITE
