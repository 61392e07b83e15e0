#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "vantage/placement.hpp"

namespace vantage {

/// How a trajectory orients the feature normal (the pose y-axis) while the
/// position traces the curve.
enum class NormalMode {
  kFrenet,   // curve normal: toward the center for circles, the in-plane
             // left-hand normal (up x tangent) for other planar curves
  kTangent,  // along the direction of travel (a ring threaded on a wire)
  kFixed,    // constant configured axis
};

struct NormalSpec {
  NormalMode mode = NormalMode::kFrenet;
  Eigen::Vector3d fixed_axis = Eigen::Vector3d::UnitY();
  Eigen::Vector3d up_reference = Eigen::Vector3d::UnitZ();
};

/// Deterministic, C1 time-indexed feature-pose stream. Implementations are
/// pure functions of t, so a stream can be sampled at any rate or replayed.
class Trajectory {
 public:
  virtual ~Trajectory() = default;

  /// Natural duration in seconds. Periodic curves report one period and may
  /// be sampled beyond it; aperiodic ones clamp at the end.
  virtual double duration() const = 0;

  virtual FeatureState at(double t) const = 0;
};

/// Constant feature pose (zero-speed stream).
std::unique_ptr<Trajectory> makeStaticTrajectory(const Pose3d& pose);

/// Circle of `radius` about `center` in the plane orthogonal to `axis`,
/// one revolution per `period` seconds, starting at angle `phase`.
std::unique_ptr<Trajectory> makeCircleTrajectory(
    const Eigen::Vector3d& center, double radius, double period,
    const Eigen::Vector3d& axis = Eigen::Vector3d::UnitZ(), double phase = 0.0,
    const NormalSpec& normal = {});

/// Gerono figure-eight with half-span `half_span` in the plane orthogonal to
/// `axis`, one full traversal per `period` seconds.
std::unique_ptr<Trajectory> makeFigureEightTrajectory(
    const Eigen::Vector3d& center, double half_span, double period,
    const Eigen::Vector3d& axis = Eigen::Vector3d::UnitZ(), double phase = 0.0,
    const NormalSpec& normal = {});

/// Piecewise-linear path through `waypoints` at constant `speed`, corners
/// rounded with circular fillets of radius `corner_radius` (tangent-continuous
/// by construction). A closed path cycles forever; an open one holds the final
/// point. Throws ConfigError when a fillet does not fit its corner.
std::unique_ptr<Trajectory> makePolylineTrajectory(
    const std::vector<Eigen::Vector3d>& waypoints, double speed,
    double corner_radius, bool closed = false, const NormalSpec& normal = {});

/// Replays a recorded pose stream (monotonic times), interpolating linearly
/// in translation and spherically in rotation between samples.
std::unique_ptr<Trajectory> makeReplayTrajectory(
    const std::vector<double>& times, const std::vector<Pose3d>& poses);

/// Loads a replay stream from CSV rows `time, r00..r22, tx, ty, tz`
/// (a header line is skipped if present).
std::unique_ptr<Trajectory> loadReplayTrajectory(const std::string& path);

/// Adds a seeded per-axis sinusoidal position wobble on top of a base
/// trajectory; orientation is passed through. Identical seeds give bitwise
/// identical streams.
std::unique_ptr<Trajectory> withWobble(std::unique_ptr<Trajectory> base,
                                       double amplitude, double frequency,
                                       std::uint64_t seed);

}  // namespace vantage
