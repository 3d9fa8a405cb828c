#include "vjm/linkage.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/Eigenvalues>

#include "vjm/error.hpp"

namespace vjm {

namespace {

using Matrix8 = Eigen::Matrix<double, 8, 8>;
using Vector8 = Eigen::Matrix<double, 8, 1>;

// Generalized coordinate layout: x = (q1, q2, theta1..theta6).
constexpr int kNoVar = -1;

struct Factor {
  Axis axis;
  double value;
  int var;
};

// Bar chain, base to output frame:
//   Ry(-q0) Tz(eta d/2) Ry(q1) Tx(L) Tx(th1) Ty(th2) Tz(th3) Rx(th4) Ry(th5) Rz(th6)
//   Ry(q2) Tz(-eta d/2) Ry(q0)
// The outer Ry(-q0) / Ry(q0) pair are constants of the reference configuration.
std::array<Factor, 13> chain_factors(const ParallelogramModel& m, Chain i, const Vector2& q, const Vector6& th) {
  const double eta = chain_sign(i);
  const double q0 = m.reference_angle;
  return {{
      {Axis::Ry, -q0, kNoVar},
      {Axis::Tz, eta * m.d / 2.0, kNoVar},
      {Axis::Ry, q(0), 0},
      {Axis::Tx, m.L, kNoVar},
      {Axis::Tx, th(0), 2},
      {Axis::Ty, th(1), 3},
      {Axis::Tz, th(2), 4},
      {Axis::Rx, th(3), 5},
      {Axis::Ry, th(4), 6},
      {Axis::Rz, th(5), 7},
      {Axis::Ry, q(1), 1},
      {Axis::Tz, -eta * m.d / 2.0, kNoVar},
      {Axis::Ry, q0, kNoVar},
  }};
}

void check_elastic_range(const ParallelogramModel& m, const Vector6& theta) {
  if (!theta.allFinite()) throw InvalidArgument("spring coordinates must be finite");
  const double tmax = m.elastic_range.translation_fraction * m.L;
  for (int k = 0; k < 3; ++k) {
    if (std::abs(theta(k)) > tmax)
      throw OutOfRange("spring translation theta" + std::to_string(k + 1) + " = " + std::to_string(theta(k)) +
                       " mm exceeds the elastic range " + std::to_string(tmax) + " mm");
    if (std::abs(theta(k + 3)) > m.elastic_range.rotation)
      throw OutOfRange("spring rotation theta" + std::to_string(k + 4) + " = " + std::to_string(theta(k + 3)) +
                       " rad exceeds the elastic range " + std::to_string(m.elastic_range.rotation) + " rad");
  }
}

Eigen::Matrix<double, 6, 8> full_jacobian(const ParallelogramModel& m, Chain i, const Vector2& q, const Vector6& th) {
  check_elastic_range(m, th);
  const auto factors = chain_factors(m, i, q, th);
  constexpr std::size_t n = std::tuple_size_v<decltype(factors)>;

  std::array<Eigen::Matrix4d, n> mats;
  for (std::size_t k = 0; k < n; ++k) mats[k] = elem_transform(factors[k].axis, factors[k].value).matrix();

  std::array<Eigen::Matrix4d, n + 1> prefix;
  prefix[0].setIdentity();
  for (std::size_t k = 0; k < n; ++k) prefix[k + 1] = prefix[k] * mats[k];
  std::array<Eigen::Matrix4d, n + 1> suffix;
  suffix[n].setIdentity();
  for (std::size_t k = n; k-- > 0;) suffix[k] = mats[k] * suffix[k + 1];

  const Eigen::Matrix4d& T = prefix[n];
  Eigen::Matrix<double, 6, 8> J = Eigen::Matrix<double, 6, 8>::Zero();
  for (std::size_t k = 0; k < n; ++k) {
    if (factors[k].var == kNoVar) continue;
    const Eigen::Matrix4d dT = prefix[k] * elem_derivative(factors[k].axis, factors[k].value) * suffix[k + 1];
    J.col(factors[k].var) += pose_rate(T, dT);
  }
  return J;
}

// Differencing the Jacobian before contracting keeps the result linear in
// lambda up to a single rounding of the final product.
Matrix8 raw_hessian(const ParallelogramModel& m, Chain i, const Vector8& x, const Vector6& lambda, double h) {
  Matrix8 H;
  for (int k = 0; k < 8; ++k) {
    Vector8 xp = x, xm = x;
    xp(k) += h;
    xm(k) -= h;
    const Eigen::Matrix<double, 6, 8> dJ =
        (full_jacobian(m, i, xp.head<2>(), xp.tail<6>()) - full_jacobian(m, i, xm.head<2>(), xm.tail<6>())) / (2.0 * h);
    H.col(k) = dJ.transpose() * lambda;
  }
  return H;
}

Vector8 stack(const Vector2& q, const Vector6& theta) {
  Vector8 x;
  x << q, theta;
  return x;
}

}  // namespace

ParallelogramModel ParallelogramModel::from_bar(double L, double d, const Matrix6& Kb, double reference_angle) {
  ParallelogramModel m;
  m.L = L;
  m.d = d;
  m.Kb = Kb;
  m.Ktheta = {Kb, Kb};
  m.reference_angle = reference_angle;
  m.validate();
  return m;
}

namespace {

void validate_stiffness(const Matrix6& K, const std::string& name) {
  if (!K.allFinite()) throw InvalidArgument(name + " has non-finite entries");
  const double scale = K.cwiseAbs().maxCoeff();
  for (int r = 0; r < 6; ++r)
    for (int c = r + 1; c < 6; ++c)
      if (std::abs(K(r, c) - K(c, r)) > 1e-9 * scale)
        throw InvalidArgument(name + " not symmetric at (" + std::to_string(r + 1) + "," + std::to_string(c + 1) +
                              ")/(" + std::to_string(c + 1) + "," + std::to_string(r + 1) + ")");
  const Eigen::SelfAdjointEigenSolver<Matrix6> eig(K, Eigen::EigenvaluesOnly);
  if (!(eig.eigenvalues().minCoeff() > 0.0))
    throw InvalidArgument(name + " not positive-definite (smallest eigenvalue " +
                          std::to_string(eig.eigenvalues().minCoeff()) + ")");
}

}  // namespace

void ParallelogramModel::validate() const {
  if (!(std::isfinite(L) && L > 0.0)) throw InvalidArgument("bar length L must be positive, got " + std::to_string(L));
  if (!(std::isfinite(d) && d > 0.0))
    throw InvalidArgument("parallelogram width d must be positive, got " + std::to_string(d));
  if (!std::isfinite(reference_angle) || std::abs(reference_angle) >= std::numbers::pi / 2)
    throw InvalidArgument("reference angle must lie in (-pi/2, pi/2)");
  validate_stiffness(Kb, "Kb");
  validate_stiffness(Ktheta[0], "Ktheta[1]");
  validate_stiffness(Ktheta[1], "Ktheta[2]");
  if (!(elastic_range.translation_fraction > 0.0 && elastic_range.rotation > 0.0))
    throw InvalidArgument("elastic range limits must be positive");
}

Pose ParallelogramModel::unloaded_pose() const {
  Pose p;
  p.p = Eigen::Vector3d(L, 0.0, 0.0);
  return p;
}

bool ChainState::out_of_model(const ParallelogramModel& model) const {
  if (!q.allFinite() || !theta.allFinite() || !lambda.allFinite()) return true;
  const double tmax = model.elastic_range.translation_fraction * model.L;
  return theta.head<3>().cwiseAbs().maxCoeff() > tmax ||
         theta.tail<3>().cwiseAbs().maxCoeff() > model.elastic_range.rotation;
}

Transform4 chain_transform(const ParallelogramModel& model, Chain i, const Vector2& q, const Vector6& theta) {
  check_elastic_range(model, theta);
  if (!q.allFinite()) throw InvalidArgument("passive coordinates must be finite");
  Transform4 T;
  for (const Factor& f : chain_factors(model, i, q, theta)) T = T * elem_transform(f.axis, f.value);
  return T;
}

Pose chain_pose(const ParallelogramModel& model, Chain i, const Vector2& q, const Vector6& theta) {
  return pose_from_transform(chain_transform(model, i, q, theta));
}

ChainJacobians chain_jacobians(const ParallelogramModel& model, Chain i, const Vector2& q, const Vector6& theta) {
  const Eigen::Matrix<double, 6, 8> J = full_jacobian(model, i, q, theta);
  ChainJacobians out;
  out.Jq = J.leftCols<2>();
  out.Jtheta = J.rightCols<6>();
  return out;
}

ChainHessians chain_hessians(const ParallelogramModel& model, Chain i, const Vector2& q, const Vector6& theta,
                             const Vector6& lambda, double step) {
  const Matrix8 raw = raw_hessian(model, i, stack(q, theta), lambda, step);
  const double scale = raw.cwiseAbs().maxCoeff();
  ChainHessians out;
  out.asymmetry = scale > 0.0 ? (raw - raw.transpose()).cwiseAbs().maxCoeff() / scale : 0.0;
  const Matrix8 H = 0.5 * (raw + raw.transpose());
  out.Hqq = H.topLeftCorner<2, 2>();
  out.Hqtheta = H.topRightCorner<2, 6>();
  out.Hthetatheta = H.bottomRightCorner<6, 6>();
  return out;
}

double hessian_richardson_error(const ParallelogramModel& model, Chain i, const Vector2& q, const Vector6& theta,
                                const Vector6& lambda, double step) {
  const Vector8 x = stack(q, theta);
  const Matrix8 coarse = raw_hessian(model, i, x, lambda, step);
  const Matrix8 fine = raw_hessian(model, i, x, lambda, step / 2.0);
  const double scale = fine.cwiseAbs().maxCoeff();
  return scale > 0.0 ? (coarse - fine).cwiseAbs().maxCoeff() / scale : 0.0;
}

}  // namespace vjm
