#include <doctest.h>

#include <random>

#include "vantage/registration.hpp"

using namespace vantage;

namespace {

std::vector<Eigen::Vector3d> cloud(std::mt19937_64& rng, int n, double extent) {
  auto u = [&](double lo, double hi) {
    return lo + (hi - lo) * ((rng() >> 11) * 0x1.0p-53);
  };
  std::vector<Eigen::Vector3d> pts;
  for (int i = 0; i < n; ++i)
    pts.emplace_back(u(-extent, extent), u(-extent, extent), u(-extent, extent));
  return pts;
}

std::vector<Eigen::Vector3d> mapped(const std::vector<Eigen::Vector3d>& pts,
                                    const Pose3d& t) {
  std::vector<Eigen::Vector3d> out;
  for (const auto& p : pts) out.push_back(t * p);
  return out;
}

}  // namespace

TEST_SUITE("kinematics") {

TEST_CASE("noise-free registration recovers the transform to machine precision") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    auto u = [&](double lo, double hi) {
      return lo + (hi - lo) * ((rng() >> 11) * 0x1.0p-53);
    };
    Eigen::Vector3d axis(u(-1, 1), u(-1, 1), u(-1, 1));
    while (axis.norm() < 1e-6) axis = Eigen::Vector3d(u(-1, 1), u(-1, 1), u(-1, 1));
    const Pose3d truth = Pose3d::FromAxisAngle(
        axis.normalized(), u(-3, 3), Eigen::Vector3d(u(-0.2, 0.2), u(-0.2, 0.2), u(-0.2, 0.2)));
    const auto a = cloud(rng, 10, 0.15);
    const RegistrationResult res = registerPairedPoints(a, mapped(a, truth));
    CHECK(rotationAngleBetween(res.transform, truth) < 1e-10);
    CHECK((res.transform.translation() - truth.translation()).norm() < 1e-12);
    CHECK(res.rms_error < 1e-12);
    CHECK(res.max_error < 1e-11);
  }
}

TEST_CASE("pure translation case") {
  std::mt19937_64 rng(32);
  const auto a = cloud(rng, 5, 0.1);
  const Pose3d truth = Pose3d::Translation({0.05, -0.02, 0.10});
  const RegistrationResult res = registerPairedPoints(a, mapped(a, truth));
  CHECK(rotationAngle(res.transform.rotation()) < 1e-12);
  CHECK((res.transform.translation() - truth.translation()).norm() < 1e-13);
}

TEST_CASE("result is a proper rotation even for a planar cloud") {
  std::mt19937_64 rng(33);
  auto a = cloud(rng, 8, 0.1);
  for (auto& p : a) p.z() = 0.0;  // exactly planar: reflections must be rejected
  const Pose3d truth = Pose3d::FromAxisAngle(Eigen::Vector3d(1, 2, 2).normalized(), 1.2);
  const RegistrationResult res = registerPairedPoints(a, mapped(a, truth));
  CHECK(res.transform.rotation().determinant() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(rotationAngleBetween(res.transform, truth) < 1e-10);
}

TEST_CASE("residual statistics are ordered mean <= rms <= max") {
  std::mt19937_64 rng(34);
  const auto a = cloud(rng, 12, 0.1);
  auto b = mapped(a, Pose3d::Translation({0.01, 0, 0}));
  b[3] += Eigen::Vector3d(0.004, -0.002, 0.001);  // one disturbed pair
  const RegistrationResult res = registerPairedPoints(a, b);
  CHECK(res.mean_abs_error <= res.rms_error + 1e-15);
  CHECK(res.rms_error <= res.max_error + 1e-15);
  CHECK(res.max_error > 1e-4);
}

TEST_CASE("L1 refinement shrinks the influence of an outlier") {
  std::mt19937_64 rng(35);
  const auto a = cloud(rng, 12, 0.1);
  const Pose3d truth = Pose3d::FromAxisAngle(Eigen::Vector3d::UnitZ(), 0.3,
                                             {0.02, 0.01, -0.03});
  auto b = mapped(a, truth);
  b[0] += Eigen::Vector3d(0.05, 0.05, 0.05);  // gross outlier

  const RegistrationResult plain = registerPairedPoints(a, b);
  RegistrationOptions opts;
  opts.l1_refine = true;
  const RegistrationResult robust = registerPairedPoints(a, b, opts);
  CHECK(robust.mean_abs_error < plain.mean_abs_error);
  CHECK(rotationAngleBetween(robust.transform, truth) <
        rotationAngleBetween(plain.transform, truth));
}

TEST_CASE("degenerate inputs throw") {
  std::mt19937_64 rng(36);
  const auto a = cloud(rng, 2, 0.1);
  CHECK_THROWS_AS(registerPairedPoints(a, a), DegenerateInput);

  auto three = cloud(rng, 3, 0.1);
  auto four = cloud(rng, 4, 0.1);
  CHECK_THROWS_AS(registerPairedPoints(three, four), DimensionMismatch);

  std::vector<Eigen::Vector3d> line;
  for (int i = 0; i < 5; ++i) line.emplace_back(0.01 * i, 0.02 * i, 0.0);
  CHECK_THROWS_AS(registerPairedPoints(line, line), DegenerateInput);
}

}  // TEST_SUITE
