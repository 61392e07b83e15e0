#include "vantage/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "vantage/errors.hpp"

namespace vantage {
namespace {

constexpr double kArmijoSlope = 1e-4;
constexpr int kMaxBacktracks = 24;
constexpr double kCurvatureFloor = 1e-12;
constexpr double kReducedGradientFloor = 1e-10;
constexpr double kMaxStepNorm = 1.5;

Eigen::Vector3d cameraToFeature(const Pose3d& camera,
                                const Eigen::Vector3d& feature_translation) {
  const Eigen::Vector3d s = feature_translation - camera.translation();
  if (s.norm() <= 1e-12) {
    throw DegenerateInput(
        "camera origin coincides with the tracked feature; viewing direction "
        "is undefined");
  }
  return s;
}

/// All objective terms from an already-computed camera pose.
ObjectiveBreakdown termsFromPose(const ConstrainedIkProblem& problem,
                                 const Pose3d& camera) {
  const SolverConfig& cfg = problem.config;
  const Eigen::Vector3d s = cameraToFeature(camera, problem.feature_translation);
  const Eigen::Vector3d s_hat = s.normalized();
  const Eigen::Vector3d up_hat = UnitVec3d(problem.world_up).vec();

  ObjectiveBreakdown b;
  b.position_cost = (camera.translation() - problem.target_translation).norm();
  b.view_alignment_cost = 1.0 - camera.rotation().col(2).dot(s_hat);
  b.horizontality_cost = std::abs(camera.rotation().col(0).dot(up_hat));
  b.orientation_cost =
      0.5 * cfg.w4 * b.view_alignment_cost + cfg.w5 * b.horizontality_cost;
  b.distance_cost = s.norm() - cfg.viewing_distance;
  b.total = cfg.w1 * huber(b.position_cost, cfg.delta1) +
            cfg.w2 * huber(b.orientation_cost, cfg.delta2) +
            cfg.w3 * huber(b.distance_cost, cfg.delta3);
  return b;
}

JointVector analyticGradient(const ConstrainedIkProblem& problem,
                             const JointVector& q,
                             const ObjectiveBreakdown& b) {
  const SolverConfig& cfg = problem.config;
  const KinematicChain& chain = problem.chain;
  const Pose3d camera = forwardKinematics(chain, q);
  const Jacobian6 jac = jacobian(chain, q);
  const auto jv = jac.topRows<3>();
  const auto jw = jac.bottomRows<3>();

  const Eigen::Vector3d z = camera.rotation().col(2);
  const Eigen::Vector3d x = camera.rotation().col(0);
  const Eigen::Vector3d up_hat = UnitVec3d(problem.world_up).vec();
  const Eigen::Vector3d r = camera.translation() - problem.target_translation;
  const Eigen::Vector3d s = cameraToFeature(camera, problem.feature_translation);
  const double s_norm = s.norm();
  const Eigen::Vector3d s_hat = s / s_norm;

  // Position term. Inside the Huber threshold h(|r|) is |r|^2/2, whose
  // gradient Jv^T r is smooth even at r = 0; outside it is delta1 * Jv^T r/|r|.
  JointVector g_position;
  if (b.position_cost <= cfg.delta1) {
    g_position = jv.transpose() * r;
  } else {
    g_position = jv.transpose() * (cfg.delta1 / b.position_cost * r);
  }

  // View alignment: d(1 - z . s_hat)/dq. The rotation part enters through
  // dz/dq_i = w_i x z, the translation part through the normalized bearing.
  const Eigen::Vector3d perp = (z - s_hat * s_hat.dot(z)) / s_norm;
  const JointVector g_view =
      -(jw.transpose() * z.cross(s_hat)) + jv.transpose() * perp;

  // Horizontality: d|x . up|/dq with subgradient 0 at the kink.
  const double x_dot_up = x.dot(up_hat);
  const double sign = (x_dot_up > 0.0) - (x_dot_up < 0.0);
  const JointVector g_horiz = sign * (jw.transpose() * x.cross(up_hat));

  const JointVector g_orientation = 0.5 * cfg.w4 * g_view + cfg.w5 * g_horiz;
  const double dh_orientation =
      (b.orientation_cost <= cfg.delta2) ? b.orientation_cost : cfg.delta2;

  // Distance: d(|s| - d_t)/dq = -Jv^T s_hat.
  const JointVector g_distance = -(jv.transpose() * s_hat);
  const double dh_distance = huberDerivative(b.distance_cost, cfg.delta3);

  return cfg.w1 * g_position + cfg.w2 * dh_orientation * g_orientation +
         cfg.w3 * dh_distance * g_distance;
}

JointVector finiteDifferenceGradient(const ConstrainedIkProblem& problem,
                                     const JointVector& q) {
  const double h = problem.config.fd_step;
  JointVector grad(q.size());
  JointVector probe = q;
  for (Eigen::Index i = 0; i < q.size(); ++i) {
    probe(i) = q(i) + h;
    const double f_plus = objective(problem, probe).total;
    probe(i) = q(i) - h;
    const double f_minus = objective(problem, probe).total;
    probe(i) = q(i);
    grad(i) = (f_plus - f_minus) / (2.0 * h);
  }
  return grad;
}

struct ActiveSet {
  std::vector<bool> at_bound;

  bool operator==(const ActiveSet& other) const {
    return at_bound == other.at_bound;
  }
};

ActiveSet activeSet(const JointVector& q, const JointVector& g,
                    const JointVector& lo, const JointVector& hi) {
  ActiveSet set;
  set.at_bound.resize(static_cast<std::size_t>(q.size()));
  for (Eigen::Index i = 0; i < q.size(); ++i) {
    const double tol_lo = 1e-10 * (1.0 + std::abs(lo(i)));
    const double tol_hi = 1e-10 * (1.0 + std::abs(hi(i)));
    const bool pinned_low = q(i) <= lo(i) + tol_lo && g(i) > 0.0;
    const bool pinned_high = q(i) >= hi(i) - tol_hi && g(i) < 0.0;
    set.at_bound[static_cast<std::size_t>(i)] = pinned_low || pinned_high;
  }
  return set;
}

void zeroActive(const ActiveSet& set, JointVector& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (set.at_bound[static_cast<std::size_t>(i)]) v(i) = 0.0;
  }
}

}  // namespace

double huber(double x, double delta) {
  if (delta <= 0.0) {
    throw std::invalid_argument("huber: threshold must be positive");
  }
  const double a = std::abs(x);
  if (a <= delta) return 0.5 * x * x;
  return delta * (a - 0.5 * delta);
}

double huberDerivative(double x, double delta) {
  if (delta <= 0.0) {
    throw std::invalid_argument("huberDerivative: threshold must be positive");
  }
  if (std::abs(x) <= delta) return x;
  return x > 0.0 ? delta : -delta;
}

void SolverConfig::validate() const {
  auto positive = [](double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw std::invalid_argument(std::string("SolverConfig: ") + what +
                                  " must be positive and finite");
    }
  };
  positive(w1, "w1");
  positive(w2, "w2");
  positive(w3, "w3");
  positive(w4, "w4");
  positive(w5, "w5");
  positive(delta1, "delta1");
  positive(delta2, "delta2");
  positive(delta3, "delta3");
  positive(viewing_distance, "viewing_distance");
  positive(ftol, "ftol");
  positive(fd_step, "fd_step");
  if (max_evals < 1) {
    throw std::invalid_argument("SolverConfig: max_evals must be at least 1");
  }
}

double positionCost(const KinematicChain& chain, const JointVector& q,
                    const Eigen::Vector3d& target_translation) {
  return (forwardKinematics(chain, q).translation() - target_translation).norm();
}

OrientationCostTerms orientationCost(const KinematicChain& chain,
                                     const JointVector& q,
                                     const FeatureState& feature,
                                     const Eigen::Vector3d& world_up, double w4,
                                     double w5) {
  const Pose3d camera = forwardKinematics(chain, q);
  const Eigen::Vector3d s = cameraToFeature(camera, feature.translation());
  const Eigen::Vector3d up_hat = UnitVec3d(world_up).vec();

  OrientationCostTerms terms;
  terms.view_alignment = 1.0 - camera.rotation().col(2).dot(s.normalized());
  terms.horizontality = std::abs(camera.rotation().col(0).dot(up_hat));
  terms.compound = 0.5 * w4 * terms.view_alignment + w5 * terms.horizontality;
  return terms;
}

double distanceCost(const KinematicChain& chain, const JointVector& q,
                    const FeatureState& feature, double viewing_distance) {
  const Pose3d camera = forwardKinematics(chain, q);
  return (feature.translation() - camera.translation()).norm() -
         viewing_distance;
}

ObjectiveBreakdown objective(const ConstrainedIkProblem& problem,
                             const JointVector& q) {
  return termsFromPose(problem, forwardKinematics(problem.chain, q));
}

ObjectiveBreakdown objectiveWithGradient(const ConstrainedIkProblem& problem,
                                         const JointVector& q,
                                         JointVector& gradient) {
  const ObjectiveBreakdown b = objective(problem, q);
  if (problem.config.gradient_mode == SolverConfig::GradientMode::kAnalytic) {
    gradient = analyticGradient(problem, q, b);
  } else {
    gradient = finiteDifferenceGradient(problem, q);
  }
  return b;
}

const char* terminationName(Termination t) {
  switch (t) {
    case Termination::kFtol:
      return "ftol";
    case Termination::kMaxEvals:
      return "max-evals";
    case Termination::kStalled:
      return "stalled";
  }
  return "unknown";
}

ConstrainedIkResult solveConstrainedIk(const ConstrainedIkProblem& problem,
                                       const JointVector& q_seed) {
  problem.config.validate();
  const KinematicChain& chain = problem.chain;
  if (q_seed.size() != static_cast<Eigen::Index>(chain.dof())) {
    throw DimensionMismatch("solveConstrainedIk: seed size does not match "
                            "chain degrees of freedom");
  }
  const JointVector& lo = chain.lowerLimits();
  const JointVector& hi = chain.upperLimits();
  const SolverConfig& cfg = problem.config;
  const Eigen::Index n = q_seed.size();

  ConstrainedIkResult result;
  SolveReport& report = result.report;

  JointVector q = clampToLimits(chain, q_seed);
  report.seed_clamped = (q - q_seed).cwiseAbs().maxCoeff() > 0.0;

  // Every candidate evaluation lands here; the best-seen point is what the
  // solve returns, which makes the no-worsening guarantee unconditional.
  JointVector best_q = q;
  ObjectiveBreakdown best_breakdown;
  auto track_best = [&](const JointVector& candidate,
                        const ObjectiveBreakdown& b) {
    if (report.value_evals == 1 || b.total < best_breakdown.total) {
      best_q = candidate;
      best_breakdown = b;
    }
  };

  ++report.value_evals;
  ObjectiveBreakdown current = objective(problem, q);
  track_best(q, current);
  report.initial_total = current.total;

  JointVector gradient(n);
  if (cfg.gradient_mode == SolverConfig::GradientMode::kAnalytic) {
    gradient = analyticGradient(problem, q, current);
  } else {
    gradient = finiteDifferenceGradient(problem, q);
  }
  ++report.gradient_evals;

  Eigen::MatrixXd h_inv = Eigen::MatrixXd::Identity(n, n);
  ActiveSet previous_active = activeSet(q, gradient, lo, hi);
  report.termination = Termination::kStalled;

  bool out_of_budget = report.value_evals >= cfg.max_evals;
  while (!out_of_budget) {
    const ActiveSet active = activeSet(q, gradient, lo, hi);
    JointVector reduced = gradient;
    zeroActive(active, reduced);
    if (reduced.norm() < kReducedGradientFloor) {
      report.termination = Termination::kStalled;
      break;
    }
    // Curvature estimates straddling a change of active set are stale.
    if (!(active == previous_active)) {
      h_inv.setIdentity();
    }
    previous_active = active;

    JointVector direction = -(h_inv * reduced);
    zeroActive(active, direction);
    if (direction.dot(reduced) >= 0.0) {
      h_inv.setIdentity();
      direction = -reduced;
    }
    // Keep the initial trial local: seeds come from a tracking loop, and an
    // uncapped quasi-Newton jump can hop to a distant basin between ticks.
    const double direction_norm = direction.norm();
    if (direction_norm > kMaxStepNorm) {
      direction *= kMaxStepNorm / direction_norm;
    }

    // Backtracking line search along the projected arc.
    double alpha = 1.0;
    bool accepted = false;
    JointVector q_next;
    ObjectiveBreakdown next;
    for (int backtrack = 0; backtrack < kMaxBacktracks; ++backtrack) {
      if (report.value_evals >= cfg.max_evals) {
        out_of_budget = true;
        break;
      }
      JointVector candidate =
          (q + alpha * direction).cwiseMax(lo).cwiseMin(hi);
      const JointVector step = candidate - q;
      if (step.cwiseAbs().maxCoeff() == 0.0) break;

      ++report.value_evals;
      const ObjectiveBreakdown trial = objective(problem, candidate);
      track_best(candidate, trial);
      const double slope = std::min(gradient.dot(step), 0.0);
      if (trial.total <= current.total + kArmijoSlope * slope &&
          trial.total < current.total) {
        accepted = true;
        q_next = std::move(candidate);
        next = trial;
        break;
      }
      alpha *= 0.5;
    }
    if (out_of_budget) {
      report.termination = Termination::kMaxEvals;
      break;
    }
    if (!accepted) {
      report.termination = Termination::kStalled;
      break;
    }

    JointVector gradient_next(n);
    if (cfg.gradient_mode == SolverConfig::GradientMode::kAnalytic) {
      gradient_next = analyticGradient(problem, q_next, next);
    } else {
      gradient_next = finiteDifferenceGradient(problem, q_next);
    }
    ++report.gradient_evals;

    const JointVector s = q_next - q;
    const JointVector y = gradient_next - gradient;
    const double sy = s.dot(y);
    if (sy > kCurvatureFloor * s.norm() * y.norm()) {
      const double rho = 1.0 / sy;
      const Eigen::MatrixXd identity = Eigen::MatrixXd::Identity(n, n);
      const Eigen::MatrixXd left = identity - rho * s * y.transpose();
      h_inv = left * h_inv * left.transpose() + rho * s * s.transpose();
    }

    const double decrease = current.total - next.total;
    q = std::move(q_next);
    current = next;
    gradient = std::move(gradient_next);
    ++report.iterations;

    if (decrease < cfg.ftol) {
      report.termination = Termination::kFtol;
      break;
    }
    out_of_budget = report.value_evals >= cfg.max_evals;
    if (out_of_budget) report.termination = Termination::kMaxEvals;
  }
  if (out_of_budget) report.termination = Termination::kMaxEvals;

  result.q = best_q;
  result.breakdown = best_breakdown;
  report.final_total = best_breakdown.total;
  return result;
}

}  // namespace vantage
