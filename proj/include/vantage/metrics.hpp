#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "vantage/camera.hpp"
#include "vantage/controller.hpp"

namespace vantage {

/// What one camera of the rig sees of the feature during a tick.
struct CameraObservation {
  std::optional<Eigen::Vector2d> pixel;  // empty when behind the camera
  bool is_visible = false;
  std::optional<CentroidErrors> errors;  // empty when not projectable
};

/// Per-tick tracking quality. Angles in degrees, lengths in millimeters,
/// loop time in milliseconds; fd_mm is the unsigned error, fd_signed_mm keeps
/// the sign (negative = closer than the desired distance).
struct MetricsRecord {
  double vva_deg = 0.0;        // viewing-vector angle error
  double fd_mm = 0.0;          // |feature distance - desired|
  double fd_signed_mm = 0.0;
  double pf_deg = 0.0;         // deviation of the camera x-axis from horizontal
  double an_deg = 0.0;         // naive-vs-commanded rotation angle
  double pn_mm = 0.0;          // naive-vs-commanded translation distance
  double lt_ms = 0.0;          // loop time
  CameraObservation left;
  CameraObservation right;
  ConstraintsHit flags;
  bool solver_constrained = false;

  /// Split membership: a tick counts as "with constraints" when any check
  /// fired or the constrained solver ran.
  bool withConstraints() const { return flags.any() || solver_constrained; }
};

/// Evaluates the metric set for one tick against the commanded pose, with
/// the stereo rig mounted at that pose.
MetricsRecord computeMetrics(const TickReport& report,
                             const FeatureState& feature, const StereoRig& rig,
                             const PlacementConfig& placement);

struct SummaryStat {
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation (n-1)
  std::int64_t count = 0;
};

/// Mean/std/count per metric for one sample split. Metrics with no valid
/// samples in the split report count 0 and NaN moments.
using SplitSummary = std::map<std::string, SummaryStat>;

struct MetricSummary {
  SplitSummary all;
  SplitSummary without_constraints;
  SplitSummary with_constraints;
  std::int64_t ticks = 0;
};

/// Stable list of summarized metric names (aggregation and reporting order).
const std::vector<std::string>& metricNames();

/// Three-way aggregation (all / without / with constraints). Centroid-error
/// metrics average over the ticks where the projection exists; visibility
/// metrics average a 0/100 indicator.
MetricSummary aggregate(const std::vector<MetricsRecord>& records);

}  // namespace vantage
