#include <array>
#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Geometry>
#include <gtest/gtest.h>

#include "vjm/error.hpp"
#include "vjm/spatial.hpp"

using namespace vjm;

namespace {

Eigen::Matrix4d affine(const Eigen::Affine3d& a) { return a.matrix(); }

Eigen::Matrix4d reference_elem(Axis axis, double v) {
  using Eigen::AngleAxisd;
  using Eigen::Translation3d;
  using Eigen::Vector3d;
  switch (axis) {
    case Axis::Tx: return affine(Eigen::Affine3d(Translation3d(v, 0, 0)));
    case Axis::Ty: return affine(Eigen::Affine3d(Translation3d(0, v, 0)));
    case Axis::Tz: return affine(Eigen::Affine3d(Translation3d(0, 0, v)));
    case Axis::Rx: return affine(Eigen::Affine3d(AngleAxisd(v, Vector3d::UnitX())));
    case Axis::Ry: return affine(Eigen::Affine3d(AngleAxisd(v, Vector3d::UnitY())));
    case Axis::Rz: return affine(Eigen::Affine3d(AngleAxisd(v, Vector3d::UnitZ())));
  }
  return Eigen::Matrix4d::Identity();
}

constexpr std::array<Axis, 6> kAxes{Axis::Tx, Axis::Ty, Axis::Tz, Axis::Rx, Axis::Ry, Axis::Rz};

Pose random_pose(std::mt19937& rng, double translation, double angle) {
  std::uniform_real_distribution<double> ut(-translation, translation), ua(-angle, angle);
  Pose p;
  p.p = {ut(rng), ut(rng), ut(rng)};
  p.phi = {ua(rng), ua(rng), ua(rng)};
  return p;
}

}  // namespace

TEST(ElemTransform, MatchesAxisAngleConstruction) {
  for (Axis a : kAxes)
    for (double v : {-1.3, -0.2, 0.0, 0.7, 2.9, 310.0})
      EXPECT_TRUE(elem_transform(a, v).matrix().isApprox(reference_elem(a, v), 1e-14));
}

TEST(ElemTransform, ZeroIsIdentity) {
  for (Axis a : kAxes) EXPECT_EQ(elem_transform(a, 0.0).matrix(), Eigen::Matrix4d::Identity());
}

TEST(ElemTransform, RejectsNonFinite) {
  EXPECT_THROW(elem_transform(Axis::Rx, std::nan("")), InvalidArgument);
  EXPECT_THROW(elem_transform(Axis::Tz, INFINITY), InvalidArgument);
}

TEST(ElemTransform, DerivativeMatchesCentralDifference) {
  const double h = 1e-5;
  for (Axis a : kAxes) {
    for (double v : {-0.8, 0.0, 0.3, 1.9}) {
      const Eigen::Matrix4d fd =
          (elem_transform(a, v + h).matrix() - elem_transform(a, v - h).matrix()) / (2 * h);
      EXPECT_LT((fd - elem_derivative(a, v)).cwiseAbs().maxCoeff(), 1e-6);
    }
  }
}

TEST(Transform4, RejectsNonRigidMatrices) {
  Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
  m(0, 0) = 1.01;
  EXPECT_THROW(Transform4{m}, InvalidArgument);
  m = Eigen::Matrix4d::Identity();
  m(3, 0) = 0.5;
  EXPECT_THROW(Transform4{m}, InvalidArgument);
  m = Eigen::Matrix4d::Identity();
  m(2, 2) = -1.0;
  EXPECT_THROW(Transform4{m}, InvalidArgument);
  m = Eigen::Matrix4d::Identity();
  m(1, 3) = std::nan("");
  EXPECT_THROW(Transform4{m}, InvalidArgument);
}

TEST(Transform4, ComposeWithInverseIsIdentity) {
  std::mt19937 rng(11);
  for (int n = 0; n < 100; ++n) {
    const Transform4 T = transform_from_pose(random_pose(rng, 500.0, 3.0));
    const std::array<Transform4, 2> pair{T, T.inverse()};
    EXPECT_TRUE(compose(pair).isApprox(Transform4::identity(), 1e-10));
  }
}

TEST(Compose, OrderIsLeftToRight) {
  const std::array<Transform4, 2> f{elem_transform(Axis::Rz, std::numbers::pi / 2), elem_transform(Axis::Tx, 1.0)};
  const Eigen::Vector3d p = compose(f).translation();
  EXPECT_NEAR(p.x(), 0.0, 1e-15);
  EXPECT_NEAR(p.y(), 1.0, 1e-15);
}

TEST(Compose, RejectsEmptyList) { EXPECT_THROW(compose(std::span<const Transform4>{}), InvalidArgument); }

TEST(PoseFromTransform, Examples) {
  EXPECT_EQ(pose_from_transform(Transform4::identity()).vector(), Vector6::Zero());
  Vector6 expected = Vector6::Zero();
  expected(0) = 310.0;
  EXPECT_TRUE(pose_from_transform(elem_transform(Axis::Tx, 310.0)).vector().isApprox(expected));

  const std::array<Transform4, 3> r{elem_transform(Axis::Rx, 0.1), elem_transform(Axis::Ry, 0.2),
                                    elem_transform(Axis::Rz, 0.3)};
  const Pose p = pose_from_transform(compose(r));
  EXPECT_NEAR(p.phi.x(), 0.1, 1e-14);
  EXPECT_NEAR(p.phi.y(), 0.2, 1e-14);
  EXPECT_NEAR(p.phi.z(), 0.3, 1e-14);
}

TEST(PoseFromTransform, SingularOrientationNamesTheAngle) {
  try {
    pose_from_transform(elem_transform(Axis::Ry, std::numbers::pi / 2));
    FAIL() << "expected SingularOrientation";
  } catch (const SingularOrientation& e) {
    EXPECT_NE(std::string(e.what()).find("phi_y"), std::string::npos);
    EXPECT_STREQ(e.kind(), "singular-orientation");
  }
}

TEST(TransformFromPose, Examples) {
  EXPECT_EQ(transform_from_pose(Pose{}).matrix(), Eigen::Matrix4d::Identity());
  const Transform4 T = transform_from_pose(Pose::from_vector((Vector6() << 1, 2, 3, 0, 0, 0).finished()));
  EXPECT_EQ(T.rotation(), Eigen::Matrix3d::Identity());
  EXPECT_EQ(T.translation(), Eigen::Vector3d(1, 2, 3));
  EXPECT_THROW(transform_from_pose(Pose::from_vector(Vector6::Constant(std::nan("")))), InvalidArgument);
}

TEST(TransformFromPose, RoundTripOnRandomPoses) {
  std::mt19937 rng(2024);
  for (int n = 0; n < 500; ++n) {
    const Pose p = random_pose(rng, 400.0, 1.4);
    const Transform4 T = transform_from_pose(p);
    EXPECT_LT((pose_from_transform(T).vector() - p.vector()).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_TRUE(transform_from_pose(pose_from_transform(T)).isApprox(T, 1e-10));
  }
}

TEST(PoseRate, MatchesDifferencedPoses) {
  std::mt19937 rng(5);
  const double h = 1e-6;
  for (int n = 0; n < 50; ++n) {
    const Pose p = random_pose(rng, 100.0, 1.2);
    const Transform4 T = transform_from_pose(p);
    for (Axis a : kAxes) {
      const Eigen::Matrix4d dT = T.matrix() * elem_derivative(a, 0.0);
      const Vector6 fd = (pose_from_transform(T * elem_transform(a, h)).vector() -
                          pose_from_transform(T * elem_transform(a, -h)).vector()) /
                         (2 * h);
      EXPECT_LT((pose_rate(T.matrix(), dT) - fd).cwiseAbs().maxCoeff(), 1e-6);
    }
  }
}
