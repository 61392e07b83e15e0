#include "vantage/metrics.hpp"

#include <cmath>
#include <functional>
#include <limits>

namespace vantage {
namespace {

CameraObservation observe(const CameraModel& model, const Pose3d& rig_pose,
                          const Eigen::Vector3d& point_world) {
  const Pose3d camera_in_world = rig_pose * model.extrinsic;
  const Eigen::Vector3d point_cam = camera_in_world.inverse() * point_world;
  CameraObservation obs;
  obs.pixel = project(model, point_cam);
  obs.is_visible = visible(model, point_cam);
  if (obs.pixel) obs.errors = centroidErrors(model, *obs.pixel);
  return obs;
}

using Extractor = std::function<std::optional<double>(const MetricsRecord&)>;

const std::vector<std::pair<std::string, Extractor>>& extractors() {
  auto always = [](double MetricsRecord::*field) {
    return [field](const MetricsRecord& r) -> std::optional<double> {
      return r.*field;
    };
  };
  auto centroid = [](CameraObservation MetricsRecord::*side,
                     double CentroidErrors::*field) {
    return [side, field](const MetricsRecord& r) -> std::optional<double> {
      const CameraObservation& obs = r.*side;
      if (!obs.errors) return std::nullopt;
      return (*obs.errors).*field;
    };
  };
  auto indicator = [](std::function<bool(const MetricsRecord&)> pred) {
    return [pred](const MetricsRecord& r) -> std::optional<double> {
      return pred(r) ? 100.0 : 0.0;
    };
  };

  static const std::vector<std::pair<std::string, Extractor>> kExtractors = {
      {"vva_deg", always(&MetricsRecord::vva_deg)},
      {"fd_mm", always(&MetricsRecord::fd_mm)},
      {"fd_signed_mm", always(&MetricsRecord::fd_signed_mm)},
      {"pf_deg", always(&MetricsRecord::pf_deg)},
      {"an_deg", always(&MetricsRecord::an_deg)},
      {"pn_mm", always(&MetricsRecord::pn_mm)},
      {"lt_ms", always(&MetricsRecord::lt_ms)},
      {"left_l2_px", centroid(&MetricsRecord::left, &CentroidErrors::l2_px)},
      {"left_l2_pct", centroid(&MetricsRecord::left, &CentroidErrors::l2_pct)},
      {"left_u_err_pct",
       centroid(&MetricsRecord::left, &CentroidErrors::u_err_pct)},
      {"left_v_err_pct",
       centroid(&MetricsRecord::left, &CentroidErrors::v_err_pct)},
      {"right_l2_px", centroid(&MetricsRecord::right, &CentroidErrors::l2_px)},
      {"right_l2_pct",
       centroid(&MetricsRecord::right, &CentroidErrors::l2_pct)},
      {"right_u_err_pct",
       centroid(&MetricsRecord::right, &CentroidErrors::u_err_pct)},
      {"right_v_err_pct",
       centroid(&MetricsRecord::right, &CentroidErrors::v_err_pct)},
      {"visible_left_pct", indicator([](const MetricsRecord& r) {
         return r.left.is_visible;
       })},
      {"visible_right_pct", indicator([](const MetricsRecord& r) {
         return r.right.is_visible;
       })},
      {"visible_any_pct", indicator([](const MetricsRecord& r) {
         return r.left.is_visible || r.right.is_visible;
       })},
  };
  return kExtractors;
}

/// Two-pass mean / sample std in record order, so an external recomputation
/// over the CSV reproduces the numbers bit-for-bit.
SummaryStat statOf(const std::vector<double>& values) {
  SummaryStat stat;
  stat.count = static_cast<std::int64_t>(values.size());
  if (values.empty()) {
    stat.mean = std::numeric_limits<double>::quiet_NaN();
    stat.stddev = std::numeric_limits<double>::quiet_NaN();
    return stat;
  }
  double sum = 0.0;
  for (double v : values) sum += v;
  stat.mean = sum / static_cast<double>(values.size());
  if (values.size() < 2) {
    stat.stddev = 0.0;
    return stat;
  }
  double sq = 0.0;
  for (double v : values) sq += (v - stat.mean) * (v - stat.mean);
  stat.stddev = std::sqrt(sq / static_cast<double>(values.size() - 1));
  return stat;
}

}  // namespace

MetricsRecord computeMetrics(const TickReport& report,
                             const FeatureState& feature, const StereoRig& rig,
                             const PlacementConfig& placement) {
  const Pose3d& commanded = report.commanded_pose;
  const Eigen::Vector3d to_feature =
      feature.translation() - commanded.translation();

  MetricsRecord record;
  if (to_feature.norm() > 1e-12) {
    record.vva_deg = angleBetween(commanded.axis(2), to_feature) * kDegPerRad;
  }
  record.fd_signed_mm =
      1000.0 * (to_feature.norm() - placement.viewing_distance);
  record.fd_mm = std::abs(record.fd_signed_mm);
  record.pf_deg = std::abs(
      90.0 - angleBetween(commanded.axis(0), placement.world_up) * kDegPerRad);
  record.an_deg =
      rotationAngleBetween(report.naive_pose, commanded) * kDegPerRad;
  record.pn_mm =
      1000.0 *
      (report.naive_pose.translation() - commanded.translation()).norm();
  record.lt_ms = std::max(1000.0 * report.loop_time, 1e-6);
  record.left = observe(rig.left, commanded, feature.translation());
  record.right = observe(rig.right, commanded, feature.translation());
  record.flags = report.constraints_hit;
  record.solver_constrained = report.solver_used == SolverUsed::kConstrained;
  return record;
}

const std::vector<std::string>& metricNames() {
  static const std::vector<std::string> kNames = [] {
    std::vector<std::string> names;
    for (const auto& entry : extractors()) names.push_back(entry.first);
    return names;
  }();
  return kNames;
}

MetricSummary aggregate(const std::vector<MetricsRecord>& records) {
  MetricSummary summary;
  summary.ticks = static_cast<std::int64_t>(records.size());
  for (const auto& [name, extract] : extractors()) {
    std::vector<double> values_all, values_woc, values_wc;
    for (const MetricsRecord& record : records) {
      const std::optional<double> value = extract(record);
      if (!value) continue;
      values_all.push_back(*value);
      if (record.withConstraints()) {
        values_wc.push_back(*value);
      } else {
        values_woc.push_back(*value);
      }
    }
    summary.all[name] = statOf(values_all);
    summary.without_constraints[name] = statOf(values_woc);
    summary.with_constraints[name] = statOf(values_wc);
  }
  return summary;
}

}  // namespace vantage
