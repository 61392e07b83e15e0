#pragma once

#include <vector>

#include "vantage/geometry.hpp"

namespace vantage {

struct RegistrationResult {
  Pose3d transform;            // maps a-frame points onto b-frame points
  double mean_abs_error = 0.0; // mean Euclidean residual over point pairs (m)
  double rms_error = 0.0;
  double max_error = 0.0;
};

struct RegistrationOptions {
  // Optional iteratively-reweighted refinement that pulls the estimate from
  // the least-squares optimum toward the L1 (mean-absolute-error) optimum.
  bool l1_refine = false;
  int l1_iterations = 10;
};

/// Closed-form rigid registration of paired 3D points (SVD on the cross
/// covariance). Finds R, t minimizing sum |R a_i + t - b_i|^2 and reports
/// residual statistics of the fit.
///
/// Requires >= 3 pairs spanning at least a plane; throws DegenerateInput on
/// fewer points, mismatched counts, or a collinear configuration.
RegistrationResult registerPairedPoints(
    const std::vector<Eigen::Vector3d>& a_points,
    const std::vector<Eigen::Vector3d>& b_points,
    const RegistrationOptions& options = {});

}  // namespace vantage
