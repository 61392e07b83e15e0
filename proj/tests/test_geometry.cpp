#include <doctest.h>

#include <random>

#include "vantage/geometry.hpp"

using namespace vantage;

namespace {

Pose3d randomPose(std::mt19937_64& rng) {
  auto u = [&](double lo, double hi) {
    return lo + (hi - lo) * ((rng() >> 11) * 0x1.0p-53);
  };
  Eigen::Vector3d axis(u(-1, 1), u(-1, 1), u(-1, 1));
  while (axis.norm() < 1e-6) axis = Eigen::Vector3d(u(-1, 1), u(-1, 1), u(-1, 1));
  return Pose3d::FromAxisAngle(axis.normalized(), u(-3, 3),
                               Eigen::Vector3d(u(-1, 1), u(-1, 1), u(-1, 1)));
}

}  // namespace

TEST_SUITE("geometry") {

TEST_CASE("pose composition matches applying both transforms in turn") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 50; ++i) {
    const Pose3d a = randomPose(rng);
    const Pose3d b = randomPose(rng);
    const Eigen::Vector3d p(0.3, -0.2, 0.5);
    CHECK(((a * b) * p - a * (b * p)).norm() < 1e-12);
  }
}

TEST_CASE("inverse composes to identity") {
  std::mt19937_64 rng(12);
  for (int i = 0; i < 50; ++i) {
    const Pose3d a = randomPose(rng);
    CHECK((a * a.inverse()).isApprox(Pose3d::Identity(), 1e-12));
    CHECK((a.inverse() * a).isApprox(Pose3d::Identity(), 1e-12));
  }
}

TEST_CASE("axis returns rotation columns") {
  const Pose3d p = Pose3d::FromAxisAngle(Eigen::Vector3d::UnitZ(), M_PI / 2.0);
  // 90 deg about z maps x to y and y to -x.
  CHECK((p.axis(0) - Eigen::Vector3d(0, 1, 0)).norm() < 1e-12);
  CHECK((p.axis(1) - Eigen::Vector3d(-1, 0, 0)).norm() < 1e-12);
  CHECK((p.axis(2) - Eigen::Vector3d(0, 0, 1)).norm() < 1e-12);
}

TEST_CASE("translation factory leaves rotation at identity") {
  const Pose3d p = Pose3d::Translation(Eigen::Vector3d(1, 2, 3));
  CHECK(p.rotation().isIdentity(0.0));
  CHECK(p.translation() == Eigen::Vector3d(1, 2, 3));
}

TEST_CASE("flat serialization round-trips bit-for-bit") {
  std::mt19937_64 rng(13);
  const Pose3d p = randomPose(rng);
  const Pose3d q = Pose3d::fromFlat(p.toFlat());
  CHECK(q.rotation() == p.rotation());
  CHECK(q.translation() == p.translation());
}

TEST_CASE("orthonormality defect flags corrupted rotations") {
  std::mt19937_64 rng(14);
  const Pose3d good = randomPose(rng);
  CHECK(good.orthonormalityDefect() < 1e-13);
  CHECK(good.isValid());

  Eigen::Matrix3d bad = good.rotation();
  bad(0, 0) += 1e-3;
  const Pose3d corrupted(bad, good.translation());
  CHECK(!corrupted.isValid());
  CHECK(corrupted.orthonormalized().isValid(1e-12));
}

TEST_CASE("unit vector normalizes and rejects near-zero input") {
  const UnitVec3d v{Eigen::Vector3d(0, 0, 10)};
  CHECK((v.vec() - Eigen::Vector3d(0, 0, 1)).norm() < 1e-15);
  CHECK_THROWS_AS(UnitVec3d{Eigen::Vector3d::Zero()}, DegenerateInput);
  CHECK(UnitVec3d::UnitY().vec() == Eigen::Vector3d::UnitY());
}

TEST_CASE("cosine similarity at 45 degrees") {
  const double c =
      cosineSimilarity(Eigen::Vector3d(1, 1, 0), Eigen::Vector3d(1, 0, 0));
  CHECK(c == doctest::Approx(0.7071067811865475).epsilon(1e-14));
  // Clamped into [-1, 1] even when rounding would push it past 1.
  const Eigen::Vector3d w(0.1, 0.2, 0.3);
  CHECK(cosineSimilarity(w, 7.0 * w) == 1.0);
  CHECK_THROWS_AS(cosineSimilarity(Eigen::Vector3d::Zero(), w), DegenerateInput);
}

TEST_CASE("angleBetween stays accurate for tiny angles") {
  // acos(dot) loses half the digits near 0; the atan2 form does not.
  const double a = 1e-9;
  const double measured = angleBetween(Eigen::Vector3d(1, 0, 0),
                                       Eigen::Vector3d(std::cos(a), std::sin(a), 0));
  CHECK(measured == doctest::Approx(a).epsilon(1e-6));
  CHECK(angleBetween(Eigen::Vector3d::UnitX(), Eigen::Vector3d::UnitY()) ==
        doctest::Approx(M_PI / 2.0).epsilon(1e-14));
  CHECK_THROWS_AS(angleBetween(Eigen::Vector3d::Zero(), Eigen::Vector3d::UnitX()),
                  DegenerateInput);
}

TEST_CASE("rotation angle recovery, including the wrap past pi") {
  const Eigen::Vector3d axis = Eigen::Vector3d(1, 2, 3).normalized();
  CHECK(rotationAngle(Pose3d::FromAxisAngle(axis, 2.0).rotation()) ==
        doctest::Approx(2.0).epsilon(1e-12));
  // 4 rad is reported as its [0, pi] equivalent.
  CHECK(rotationAngle(Pose3d::FromAxisAngle(axis, 4.0).rotation()) ==
        doctest::Approx(2.0 * M_PI - 4.0).epsilon(1e-12));
}

TEST_CASE("relative rotation angle between poses") {
  const Eigen::Vector3d axis = Eigen::Vector3d(0, 1, 0);
  const Pose3d a = Pose3d::FromAxisAngle(axis, 0.4);
  const Pose3d b = Pose3d::FromAxisAngle(axis, 1.1);
  CHECK(rotationAngleBetween(a, b) == doctest::Approx(0.7).epsilon(1e-12));
  CHECK(rotationAngleBetween(a, a) == doctest::Approx(0.0));
}

TEST_CASE("degree-radian constants are inverses") {
  CHECK(kDegPerRad * kRadPerDeg == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(90.0 * kRadPerDeg == doctest::Approx(M_PI / 2.0).epsilon(1e-15));
}

}  // TEST_SUITE
