#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <array>
#include <cmath>

#include "vantage/errors.hpp"

namespace vantage {

/// Rigid transform (rotation + translation) mapping points from the child
/// frame into the parent frame: p_parent = R * p_child + t.
///
/// The rotation is stored as a 3x3 matrix; it must be orthonormal with
/// determinant +1. Composition a * b maps through b first, then a.
template <typename Scalar>
class Pose3 {
 public:
  using Mat3 = Eigen::Matrix<Scalar, 3, 3>;
  using Vec3 = Eigen::Matrix<Scalar, 3, 1>;

  Pose3() : rotation_(Mat3::Identity()), translation_(Vec3::Zero()) {}

  template <typename DerivedR, typename DerivedT>
  Pose3(const Eigen::MatrixBase<DerivedR>& rotation,
        const Eigen::MatrixBase<DerivedT>& translation)
      : rotation_(rotation), translation_(translation) {}

  static Pose3 Identity() { return Pose3(); }

  static Pose3 Translation(const Vec3& t) { return Pose3(Mat3::Identity(), t); }

  static Pose3 FromAxisAngle(const Vec3& unit_axis, Scalar angle,
                             const Vec3& t = Vec3::Zero()) {
    return Pose3(Eigen::AngleAxis<Scalar>(angle, unit_axis).toRotationMatrix(), t);
  }

  const Mat3& rotation() const { return rotation_; }
  const Vec3& translation() const { return translation_; }

  /// Column k of the rotation: the child frame's k-th axis in parent coordinates.
  Vec3 axis(int k) const { return rotation_.col(k); }

  Pose3 operator*(const Pose3& other) const {
    return Pose3(rotation_ * other.rotation_,
                 rotation_ * other.translation_ + translation_);
  }

  template <typename Derived>
  Vec3 operator*(const Eigen::MatrixBase<Derived>& p) const {
    return rotation_ * p + translation_;
  }

  Pose3 inverse() const {
    Mat3 rt = rotation_.transpose();
    return Pose3(rt, -(rt * translation_));
  }

  /// Largest deviation from orthonormality: max |R R^T - I| entry plus |det - 1|.
  Scalar orthonormalityDefect() const {
    return (rotation_ * rotation_.transpose() - Mat3::Identity())
               .cwiseAbs()
               .maxCoeff() +
           std::abs(rotation_.determinant() - Scalar(1));
  }

  bool isValid(Scalar tol = Scalar(1e-9)) const {
    return orthonormalityDefect() <= tol && translation_.allFinite();
  }

  /// Nearest proper rotation via quaternion round-trip; removes drift from
  /// long composition chains.
  Pose3 orthonormalized() const {
    Eigen::Quaternion<Scalar> q(rotation_);
    q.normalize();
    return Pose3(q.toRotationMatrix(), translation_);
  }

  bool isApprox(const Pose3& other, Scalar tol = Scalar(1e-9)) const {
    return (rotation_ - other.rotation_).cwiseAbs().maxCoeff() <= tol &&
           (translation_ - other.translation_).cwiseAbs().maxCoeff() <= tol;
  }

  /// Flat 12-number record: 9 rotation entries row-major, then translation.
  std::array<Scalar, 12> toFlat() const {
    std::array<Scalar, 12> out;
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) out[3 * r + c] = rotation_(r, c);
    for (int i = 0; i < 3; ++i) out[9 + i] = translation_(i);
    return out;
  }

  static Pose3 fromFlat(const std::array<Scalar, 12>& flat) {
    Mat3 rot;
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) rot(r, c) = flat[3 * r + c];
    Vec3 t(flat[9], flat[10], flat[11]);
    return Pose3(rot, t);
  }

 private:
  Mat3 rotation_;
  Vec3 translation_;
};

using Pose3d = Pose3<double>;

/// Unit-norm 3-vector. Normalizes on construction; throws DegenerateInput
/// if the input norm is below tol.
template <typename Scalar>
class UnitVec3 {
 public:
  using Vec3 = Eigen::Matrix<Scalar, 3, 1>;

  template <typename Derived>
  explicit UnitVec3(const Eigen::MatrixBase<Derived>& v,
                    Scalar tol = Scalar(1e-12))
      : v_(v) {
    const Scalar n = v_.norm();
    if (!(n > tol)) throw DegenerateInput("UnitVec3: zero-norm input");
    v_ /= n;
  }

  UnitVec3(Scalar x, Scalar y, Scalar z) : UnitVec3(Vec3(x, y, z)) {}

  static UnitVec3 UnitX() { return UnitVec3(Vec3::UnitX()); }
  static UnitVec3 UnitY() { return UnitVec3(Vec3::UnitY()); }
  static UnitVec3 UnitZ() { return UnitVec3(Vec3::UnitZ()); }

  const Vec3& vec() const { return v_; }
  operator const Vec3&() const { return v_; }

 private:
  Vec3 v_;
};

using UnitVec3d = UnitVec3<double>;

/// v1 . v2 / (|v1| |v2|), in [-1, 1]. Throws DegenerateInput on a zero-norm
/// operand.
template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar cosineSimilarity(const Eigen::MatrixBase<DerivedA>& v1,
                                           const Eigen::MatrixBase<DerivedB>& v2) {
  using Scalar = typename DerivedA::Scalar;
  const Scalar n1 = v1.norm();
  const Scalar n2 = v2.norm();
  if (!(n1 > Scalar(0)) || !(n2 > Scalar(0)))
    throw DegenerateInput("cosineSimilarity: zero-norm input");
  const Scalar c = v1.dot(v2) / (n1 * n2);
  return std::clamp(c, Scalar(-1), Scalar(1));
}

/// Angle between two nonzero vectors in radians, [0, pi]. Uses atan2 of the
/// cross/dot pair, which stays accurate near 0 and pi.
template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar angleBetween(const Eigen::MatrixBase<DerivedA>& a,
                                       const Eigen::MatrixBase<DerivedB>& b) {
  using Scalar = typename DerivedA::Scalar;
  const Scalar n1 = a.norm();
  const Scalar n2 = b.norm();
  if (!(n1 > Scalar(0)) || !(n2 > Scalar(0)))
    throw DegenerateInput("angleBetween: zero-norm input");
  using Vec3 = Eigen::Matrix<Scalar, 3, 1>;
  const Vec3 av = a;
  const Vec3 bv = b;
  return std::atan2(av.cross(bv).norm(), av.dot(bv));
}

/// Axis-angle magnitude of a rotation matrix, radians in [0, pi].
template <typename Derived>
typename Derived::Scalar rotationAngle(const Eigen::MatrixBase<Derived>& rot) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Matrix<Scalar, 3, 3> dense = rot;
  const Eigen::AngleAxis<Scalar> aa{dense};
  return std::abs(aa.angle());
}

/// Relative rotation angle between two poses, radians.
template <typename Scalar>
Scalar rotationAngleBetween(const Pose3<Scalar>& a, const Pose3<Scalar>& b) {
  return rotationAngle(
      (a.rotation().transpose() * b.rotation()).eval());
}

constexpr double kDegPerRad = 180.0 / M_PI;
constexpr double kRadPerDeg = M_PI / 180.0;

}  // namespace vantage
