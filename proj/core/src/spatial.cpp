#include "vjm/spatial.hpp"

#include <Eigen/LU>

#include <cmath>
#include <string>

#include "vjm/error.hpp"

namespace vjm {

namespace {

constexpr double kRigidTol = 1e-12;
constexpr double kSingularMargin = 1e-9;

}  // namespace

Transform4::Transform4(const Eigen::Matrix4d& m) : m_(m) {
  if (!m.allFinite()) throw InvalidArgument("transform has non-finite entries");
  if (m(3, 0) != 0.0 || m(3, 1) != 0.0 || m(3, 2) != 0.0 || m(3, 3) != 1.0)
    throw InvalidArgument("transform bottom row must be (0, 0, 0, 1)");
  const Eigen::Matrix3d R = m.topLeftCorner<3, 3>();
  const double ortho = (R * R.transpose() - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff();
  if (ortho > kRigidTol)
    throw InvalidArgument("rotation block not orthonormal (deviation " + std::to_string(ortho) + ")");
  if (std::abs(R.determinant() - 1.0) > kRigidTol)
    throw InvalidArgument("rotation block determinant is not +1");
}

Transform4 Transform4::inverse() const {
  Eigen::Matrix4d inv = Eigen::Matrix4d::Identity();
  const Eigen::Matrix3d Rt = rotation().transpose();
  inv.topLeftCorner<3, 3>() = Rt;
  inv.topRightCorner<3, 1>() = -Rt * translation();
  return Transform4(inv, Unchecked{});
}

Transform4 Transform4::operator*(const Transform4& rhs) const {
  Eigen::Matrix4d prod = m_ * rhs.m_;
  prod.row(3) << 0.0, 0.0, 0.0, 1.0;
  return Transform4(prod, Unchecked{});
}

bool Transform4::isApprox(const Transform4& other, double tol) const {
  return (m_ - other.m_).cwiseAbs().maxCoeff() <= tol;
}

Vector6 Pose::vector() const {
  Vector6 t;
  t << p, phi;
  return t;
}

Pose Pose::from_vector(const Vector6& t) {
  return Pose{t.head<3>(), t.tail<3>()};
}

Transform4 elem_transform(Axis kind, double value) {
  if (!std::isfinite(value)) throw InvalidArgument("elementary transform value must be finite");
  Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
  const double c = std::cos(value);
  const double s = std::sin(value);
  switch (kind) {
    case Axis::Tx: m(0, 3) = value; break;
    case Axis::Ty: m(1, 3) = value; break;
    case Axis::Tz: m(2, 3) = value; break;
    case Axis::Rx:
      m(1, 1) = c; m(1, 2) = -s;
      m(2, 1) = s; m(2, 2) = c;
      break;
    case Axis::Ry:
      m(0, 0) = c; m(0, 2) = s;
      m(2, 0) = -s; m(2, 2) = c;
      break;
    case Axis::Rz:
      m(0, 0) = c; m(0, 1) = -s;
      m(1, 0) = s; m(1, 1) = c;
      break;
  }
  return Transform4(m, Transform4::Unchecked{});
}

Eigen::Matrix4d elem_derivative(Axis kind, double value) {
  Eigen::Matrix4d d = Eigen::Matrix4d::Zero();
  const double c = std::cos(value);
  const double s = std::sin(value);
  switch (kind) {
    case Axis::Tx: d(0, 3) = 1.0; break;
    case Axis::Ty: d(1, 3) = 1.0; break;
    case Axis::Tz: d(2, 3) = 1.0; break;
    case Axis::Rx:
      d(1, 1) = -s; d(1, 2) = -c;
      d(2, 1) = c;  d(2, 2) = -s;
      break;
    case Axis::Ry:
      d(0, 0) = -s; d(0, 2) = c;
      d(2, 0) = -c; d(2, 2) = -s;
      break;
    case Axis::Rz:
      d(0, 0) = -s; d(0, 1) = -c;
      d(1, 0) = c;  d(1, 1) = -s;
      break;
  }
  return d;
}

Transform4 compose(std::span<const Transform4> factors) {
  if (factors.empty()) throw InvalidArgument("compose needs at least one factor");
  Transform4 out = factors.front();
  for (const auto& f : factors.subspan(1)) out = out * f;
  return out;
}

Pose pose_from_transform(const Transform4& T) {
  const Eigen::Matrix4d& m = T.matrix();
  const double r02 = m(0, 2);
  if (std::abs(r02) >= 1.0 - kSingularMargin)
    throw SingularOrientation("phi_y is at the +-pi/2 representation singularity (R13 = " +
                              std::to_string(r02) + ")");
  Pose pose;
  pose.p = T.translation();
  pose.phi.x() = std::atan2(-m(1, 2), m(2, 2));
  pose.phi.y() = std::asin(r02);
  pose.phi.z() = std::atan2(-m(0, 1), m(0, 0));
  return pose;
}

Transform4 transform_from_pose(const Pose& pose) {
  if (!pose.p.allFinite() || !pose.phi.allFinite())
    throw InvalidArgument("pose must be finite");
  Eigen::Matrix4d m = (elem_transform(Axis::Rx, pose.phi.x()) * elem_transform(Axis::Ry, pose.phi.y()) *
                       elem_transform(Axis::Rz, pose.phi.z()))
                          .matrix();
  m.topRightCorner<3, 1>() = pose.p;
  return Transform4(m, Transform4::Unchecked{});
}

Vector6 pose_rate(const Eigen::Matrix4d& T, const Eigen::Matrix4d& dT) {
  Vector6 rate;
  rate.head<3>() = dT.topRightCorner<3, 1>();

  const double r12 = T(1, 2), r22 = T(2, 2);
  const double r01 = T(0, 1), r00 = T(0, 0);
  const double r02 = T(0, 2);
  if (std::abs(r02) >= 1.0 - kSingularMargin)
    throw SingularOrientation("phi_y is at the +-pi/2 representation singularity; pose rate undefined");

  rate(3) = (-dT(1, 2) * r22 + r12 * dT(2, 2)) / (r12 * r12 + r22 * r22);
  rate(4) = dT(0, 2) / std::sqrt(1.0 - r02 * r02);
  rate(5) = (-dT(0, 1) * r00 + r01 * dT(0, 0)) / (r01 * r01 + r00 * r00);
  return rate;
}

}  // namespace vjm
