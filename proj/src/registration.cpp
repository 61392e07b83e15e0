#include "vantage/registration.hpp"

#include <Eigen/SVD>

#include <numeric>

namespace vantage {

namespace {

Eigen::Vector3d weightedCentroid(const std::vector<Eigen::Vector3d>& pts,
                                 const std::vector<double>& w, double w_sum) {
  Eigen::Vector3d c = Eigen::Vector3d::Zero();
  for (size_t i = 0; i < pts.size(); ++i) c += w[i] * pts[i];
  return c / w_sum;
}

Pose3d solveWeighted(const std::vector<Eigen::Vector3d>& a,
                     const std::vector<Eigen::Vector3d>& b,
                     const std::vector<double>& w) {
  const double w_sum = std::accumulate(w.begin(), w.end(), 0.0);
  const Eigen::Vector3d ca = weightedCentroid(a, w, w_sum);
  const Eigen::Vector3d cb = weightedCentroid(b, w, w_sum);

  Eigen::Matrix3d cross_cov = Eigen::Matrix3d::Zero();
  for (size_t i = 0; i < a.size(); ++i)
    cross_cov += w[i] * (b[i] - cb) * (a[i] - ca).transpose();

  Eigen::JacobiSVD<Eigen::Matrix3d> svd(
      cross_cov, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::Vector3d& sv = svd.singularValues();
  // Rank < 2 means the points span at most a line; rotation about that line
  // is unobservable.
  if (sv(1) <= 1e-12 * std::max(sv(0), 1e-300))
    throw DegenerateInput(
        "registerPairedPoints: collinear or coincident point configuration");

  Eigen::Matrix3d d = Eigen::Matrix3d::Identity();
  d(2, 2) = (svd.matrixU() * svd.matrixV().transpose()).determinant() < 0 ? -1.0
                                                                          : 1.0;
  const Eigen::Matrix3d rot = svd.matrixU() * d * svd.matrixV().transpose();
  return Pose3d(rot, cb - rot * ca);
}

}  // namespace

RegistrationResult registerPairedPoints(
    const std::vector<Eigen::Vector3d>& a_points,
    const std::vector<Eigen::Vector3d>& b_points,
    const RegistrationOptions& options) {
  if (a_points.size() != b_points.size())
    throw DegenerateInput("registerPairedPoints: point counts differ");
  if (a_points.size() < 3)
    throw DegenerateInput("registerPairedPoints: need at least 3 point pairs");

  const size_t n = a_points.size();
  std::vector<double> w(n, 1.0);
  Pose3d transform = solveWeighted(a_points, b_points, w);

  if (options.l1_refine) {
    // IRLS with weights 1/max(r_i, eps): reweighted least squares whose fixed
    // point minimizes the sum of absolute residuals.
    for (int it = 0; it < options.l1_iterations; ++it) {
      for (size_t i = 0; i < n; ++i) {
        const double r = (transform * a_points[i] - b_points[i]).norm();
        w[i] = 1.0 / std::max(r, 1e-9);
      }
      transform = solveWeighted(a_points, b_points, w);
    }
  }

  RegistrationResult result;
  result.transform = transform;
  double sum_abs = 0.0, sum_sq = 0.0, max_err = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const double r = (transform * a_points[i] - b_points[i]).norm();
    sum_abs += r;
    sum_sq += r * r;
    max_err = std::max(max_err, r);
  }
  result.mean_abs_error = sum_abs / double(n);
  result.rms_error = std::sqrt(sum_sq / double(n));
  result.max_error = max_err;
  return result;
}

}  // namespace vantage
