#include "vantage/kinematics.hpp"

#include <Eigen/SVD>

namespace vantage {

KinematicChain::KinematicChain(std::vector<Joint> joints, JointVector lower,
                               JointVector upper, Pose3d tool_offset,
                               std::string name)
    : joints_(std::move(joints)),
      lower_(std::move(lower)),
      upper_(std::move(upper)),
      tool_offset_(tool_offset),
      name_(std::move(name)) {
  const int n = static_cast<int>(joints_.size());
  if (lower_.size() != n || upper_.size() != n)
    throw DimensionMismatch("KinematicChain: limit vectors must match joint count");
  if (n == 0) throw DegenerateInput("KinematicChain: empty chain");
  for (int i = 0; i < n; ++i) {
    if (!(lower_(i) < upper_(i)))
      throw DegenerateInput("KinematicChain: lower limit must be below upper");
  }
  for (auto& j : joints_) {
    const double norm = j.axis.norm();
    if (!(norm > 1e-12)) throw DegenerateInput("KinematicChain: zero joint axis");
    j.axis /= norm;
  }
}

namespace {

inline Pose3d jointMotion(const Joint& joint, double q) {
  if (joint.type == JointType::kRevolute)
    return Pose3d(Eigen::AngleAxisd(q, joint.axis).toRotationMatrix(),
                  Eigen::Vector3d::Zero());
  return Pose3d::Translation(q * joint.axis);
}

inline void checkDimension(const KinematicChain& chain, const JointVector& q,
                           const char* what) {
  if (q.size() != chain.dof())
    throw DimensionMismatch(std::string(what) +
                            ": joint vector dimension does not match chain");
}

}  // namespace

Pose3d flangePose(const KinematicChain& chain, const JointVector& q) {
  checkDimension(chain, q, "flangePose");
  Pose3d t;
  for (int i = 0; i < chain.dof(); ++i)
    t = t * chain.joints()[i].offset * jointMotion(chain.joints()[i], q(i));
  return t;
}

Pose3d forwardKinematics(const KinematicChain& chain, const JointVector& q) {
  return flangePose(chain, q) * chain.toolOffset();
}

Jacobian6 jacobian(const KinematicChain& chain, const JointVector& q) {
  checkDimension(chain, q, "jacobian");
  const int n = chain.dof();
  Jacobian6 jac(6, n);

  // Walk the chain once, recording each joint's world-frame axis and origin
  // before its own motion is applied.
  std::vector<Eigen::Vector3d> axes(n), origins(n);
  Pose3d t;
  for (int i = 0; i < n; ++i) {
    const Joint& joint = chain.joints()[i];
    t = t * joint.offset;
    axes[i] = t.rotation() * joint.axis;
    origins[i] = t.translation();
    t = t * jointMotion(joint, q(i));
  }
  const Eigen::Vector3d p_cam = (t * chain.toolOffset()).translation();

  for (int i = 0; i < n; ++i) {
    if (chain.joints()[i].type == JointType::kRevolute) {
      jac.col(i).head<3>() = axes[i].cross(p_cam - origins[i]);
      jac.col(i).tail<3>() = axes[i];
    } else {
      jac.col(i).head<3>() = axes[i];
      jac.col(i).tail<3>().setZero();
    }
  }
  return jac;
}

bool withinJointLimits(const KinematicChain& chain, const JointVector& q) {
  checkDimension(chain, q, "withinJointLimits");
  return (q.array() >= chain.lowerLimits().array()).all() &&
         (q.array() <= chain.upperLimits().array()).all();
}

JointVector clampToLimits(const KinematicChain& chain, const JointVector& q) {
  checkDimension(chain, q, "clampToLimits");
  return q.cwiseMax(chain.lowerLimits()).cwiseMin(chain.upperLimits());
}

JointVector wrapToLimits(const KinematicChain& chain, const JointVector& q) {
  checkDimension(chain, q, "wrapToLimits");
  constexpr double kTwoPi = 2.0 * M_PI;
  JointVector wrapped = q;
  for (int i = 0; i < chain.dof(); ++i) {
    if (chain.joints()[i].type != JointType::kRevolute) continue;
    const double lo = chain.lowerLimits()(i);
    const double hi = chain.upperLimits()(i);
    if (wrapped(i) >= lo && wrapped(i) <= hi) continue;
    const double k_min = std::ceil((lo - wrapped(i)) / kTwoPi);
    const double k_max = std::floor((hi - wrapped(i)) / kTwoPi);
    if (k_min > k_max) continue;  // no equivalent angle inside the limits
    wrapped(i) += kTwoPi * (k_min > 0.0 ? k_min : k_max);
  }
  return wrapped;
}

namespace {

Eigen::Matrix<double, 6, 1> poseError(const Pose3d& target, const Pose3d& current) {
  Eigen::Matrix<double, 6, 1> e;
  e.head<3>() = target.translation() - current.translation();
  const Eigen::AngleAxisd aa(
      Eigen::Matrix3d(target.rotation() * current.rotation().transpose()));
  e.tail<3>() = aa.angle() * aa.axis();
  return e;
}

}  // namespace

NewtonIkResult ikNewton(const KinematicChain& chain, const Pose3d& target,
                        const JointVector& q0, double tol, int max_iter) {
  checkDimension(chain, q0, "ikNewton");
  if (!(tol > 0)) throw std::invalid_argument("ikNewton: tol must be positive");
  if (max_iter < 1) throw std::invalid_argument("ikNewton: max_iter must be >= 1");

  constexpr double kBaseDamping = 1e-6;
  constexpr double kSingularCond = 1e4;  // bump damping beyond this
  constexpr double kMaxStep = 0.5;

  NewtonIkResult result;
  result.q = q0;
  double damping = kBaseDamping;

  for (int iter = 0; iter <= max_iter; ++iter) {
    const Eigen::Matrix<double, 6, 1> error =
        poseError(target, forwardKinematics(chain, result.q));
    result.error_norm = error.norm();
    result.iterations = iter;
    if (result.error_norm < tol) {
      result.converged = true;
      return result;
    }
    if (iter == max_iter) break;

    const Jacobian6 jac = jacobian(chain, result.q);
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(jac);
    const double s_max = svd.singularValues()(0);
    const double s_min = svd.singularValues()(svd.singularValues().size() - 1);
    // Near-singular configurations (wrist alignment, workspace edge) get a
    // stiffer damping term; rank deficiency itself is harmless under DLS.
    if (s_min < s_max / kSingularCond)
      damping = std::min(std::max(damping * 10.0, 1e-3), 1e-1);
    else
      damping = kBaseDamping;

    // Damped least squares: dq = J^T (J J^T + lambda^2 I)^-1 e
    Eigen::Matrix<double, 6, 6> jjt = jac * jac.transpose();
    jjt.diagonal().array() += damping * damping;
    JointVector dq = jac.transpose() * jjt.ldlt().solve(error);
    const double step = dq.norm();
    if (step > kMaxStep) dq *= kMaxStep / step;
    result.q += dq;
  }
  return result;
}

}  // namespace vantage
