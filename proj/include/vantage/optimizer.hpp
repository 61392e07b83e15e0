#pragma once

#include "vantage/kinematics.hpp"
#include "vantage/placement.hpp"

namespace vantage {

/// Huber loss: x^2/2 inside |x| <= delta, linear continuation outside.
/// C1-continuous at the threshold. Throws on delta <= 0.
double huber(double x, double delta);

/// d/dx of the Huber loss: x inside the threshold, delta*sign(x) outside.
double huberDerivative(double x, double delta);

/// Weights, thresholds and termination settings of the constrained IK
/// objective. Defaults follow the tuned values used on the robot.
struct SolverConfig {
  double w1 = 15.0;  // position cost weight
  double w2 = 30.0;  // orientation cost weight
  double w3 = 25.0;  // distance cost weight
  double w4 = 2.0;   // view-alignment term inside the orientation cost
  double w5 = 0.5;   // horizontality term inside the orientation cost
  double delta1 = 0.01;
  double delta2 = 0.17;
  double delta3 = 0.02;
  double viewing_distance = 0.11;  // desired camera-to-feature distance (m)
  int max_evals = 50;
  double ftol = 5e-4;

  enum class GradientMode { kAnalytic, kFiniteDifference };
  GradientMode gradient_mode = GradientMode::kAnalytic;
  double fd_step = 1e-7;  // central-difference step in finite-difference mode

  void validate() const;  // throws std::invalid_argument on bad values
};

/// Per-term decomposition of one objective evaluation. `total` is always the
/// weighted Huber combination of the stored components.
struct ObjectiveBreakdown {
  double position_cost = 0.0;        // C_ps: |t_cam - t_target|
  double orientation_cost = 0.0;     // C_or: weighted compound of the two below
  double view_alignment_cost = 0.0;  // C_v: 1 - cos(optical axis, camera-to-feature)
  double horizontality_cost = 0.0;   // C_per: |cos(camera x, world up)|
  double distance_cost = 0.0;        // C_d: signed distance residual
  double total = 0.0;
};

/// One constrained-IK solve: chain, desired camera position, feature to aim
/// at, and the vertical reference. The chain reference must outlive the
/// problem.
struct ConstrainedIkProblem {
  const KinematicChain& chain;
  Eigen::Vector3d target_translation;
  Eigen::Vector3d feature_translation;
  Eigen::Vector3d world_up = Eigen::Vector3d::UnitZ();
  SolverConfig config;
};

double positionCost(const KinematicChain& chain, const JointVector& q,
                    const Eigen::Vector3d& target_translation);

struct OrientationCostTerms {
  double compound = 0.0;        // w4/2 * view_alignment + w5 * horizontality
  double view_alignment = 0.0;  // in [0, 2]
  double horizontality = 0.0;   // in [0, 1]
};

/// Throws DegenerateInput when the camera origin coincides with the feature.
OrientationCostTerms orientationCost(const KinematicChain& chain,
                                     const JointVector& q,
                                     const FeatureState& feature,
                                     const Eigen::Vector3d& world_up, double w4,
                                     double w5);

double distanceCost(const KinematicChain& chain, const JointVector& q,
                    const FeatureState& feature, double viewing_distance);

ObjectiveBreakdown objective(const ConstrainedIkProblem& problem,
                             const JointVector& q);

/// Objective value plus its analytic gradient (chain rule through the
/// geometric Jacobian). Subgradient 0 is used at the isolated kinks.
ObjectiveBreakdown objectiveWithGradient(const ConstrainedIkProblem& problem,
                                         const JointVector& q,
                                         JointVector& gradient);

enum class Termination { kFtol, kMaxEvals, kStalled };

const char* terminationName(Termination t);

struct SolveReport {
  int iterations = 0;
  int value_evals = 0;     // objective evaluations at candidate points
  int gradient_evals = 0;  // gradient computations (analytic or FD sweeps)
  double initial_total = 0.0;
  double final_total = 0.0;
  Termination termination = Termination::kStalled;
  bool seed_clamped = false;
};

struct ConstrainedIkResult {
  JointVector q;
  ObjectiveBreakdown breakdown;
  SolveReport report;
};

/// Bound-constrained minimization of the Huber objective: projected BFGS with
/// Armijo backtracking, seeded from (a clamped copy of) q_seed. Guarantees
/// the returned joint vector satisfies the bounds exactly and never worsens
/// the seed objective; the best evaluated point is returned even when the
/// iteration stalls.
ConstrainedIkResult solveConstrainedIk(const ConstrainedIkProblem& problem,
                                       const JointVector& q_seed);

}  // namespace vantage
