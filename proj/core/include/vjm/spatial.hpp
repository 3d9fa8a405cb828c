#pragma once

#include <span>

#include <Eigen/Core>

namespace vjm {

using Vector6 = Eigen::Matrix<double, 6, 1>;
using Matrix6 = Eigen::Matrix<double, 6, 6>;

struct Pose;

/// Elementary translation (T*) or rotation (R*) about a base axis.
enum class Axis { Tx, Ty, Tz, Rx, Ry, Rz };

/// Rigid homogeneous transform. Units: mm for the translation block.
///
/// Invariants: rotation block orthonormal with det = +1 (1e-12), bottom row
/// exactly (0, 0, 0, 1). The checked constructor enforces them; the library
/// itself builds transforms through `elem_transform` and `compose`, which
/// preserve them by construction.
class Transform4 {
public:
  Transform4() : m_(Eigen::Matrix4d::Identity()) {}

  /// Validating constructor. Throws InvalidArgument on a non-rigid matrix.
  explicit Transform4(const Eigen::Matrix4d& m);

  static Transform4 identity() { return {}; }

  const Eigen::Matrix4d& matrix() const { return m_; }
  Eigen::Matrix3d rotation() const { return m_.topLeftCorner<3, 3>(); }
  Eigen::Vector3d translation() const { return m_.topRightCorner<3, 1>(); }

  /// [R^T, -R^T p]
  Transform4 inverse() const;

  Transform4 operator*(const Transform4& rhs) const;

  bool isApprox(const Transform4& other, double tol) const;

private:
  struct Unchecked {};
  Transform4(const Eigen::Matrix4d& m, Unchecked) : m_(m) {}

  friend Transform4 elem_transform(Axis, double);
  friend Transform4 transform_from_pose(const Pose&);

  Eigen::Matrix4d m_;
};

/// Output-frame pose t = (p, phi). Position in mm, orientation as the
/// (phi_x, phi_y, phi_z) triple with R = Rx(phi_x) * Ry(phi_y) * Rz(phi_z).
struct Pose {
  Eigen::Vector3d p = Eigen::Vector3d::Zero();
  Eigen::Vector3d phi = Eigen::Vector3d::Zero();

  Vector6 vector() const;
  static Pose from_vector(const Vector6& t);
};

Transform4 elem_transform(Axis kind, double value);

/// d/dvalue of `elem_transform(kind, value)`. Not a rigid transform, so it
/// is returned as a raw matrix.
Eigen::Matrix4d elem_derivative(Axis kind, double value);

/// Left-to-right product. Throws InvalidArgument on an empty list.
Transform4 compose(std::span<const Transform4> factors);

/// Rejects configurations with |R(0,2)| >= 1 - 1e-9 (phi_y near +-pi/2).
Pose pose_from_transform(const Transform4& T);

Transform4 transform_from_pose(const Pose& pose);

/// Pose-rate of a transform derivative: translation part of dT and the
/// derivative of the (phi_x, phi_y, phi_z) triple induced by dR at R.
Vector6 pose_rate(const Eigen::Matrix4d& T, const Eigen::Matrix4d& dT);

}  // namespace vjm
