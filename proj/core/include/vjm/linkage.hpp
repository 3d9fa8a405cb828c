#pragma once

#include <array>

#include <Eigen/Core>

#include "vjm/spatial.hpp"

namespace vjm {

using Vector2 = Eigen::Vector2d;
using Matrix2 = Eigen::Matrix2d;
using Matrix62 = Eigen::Matrix<double, 6, 2>;
using Matrix26 = Eigen::Matrix<double, 2, 6>;

/// Which of the two serial chains the parallelogram is split into.
/// The chain sign is eta = (-1)^i.
enum class Chain { First = 1, Second = 2 };

inline constexpr std::array<Chain, 2> kChains{Chain::First, Chain::Second};
inline int chain_number(Chain c) { return static_cast<int>(c); }
inline double chain_sign(Chain c) { return c == Chain::First ? -1.0 : 1.0; }

/// Elastic-range limits beyond which a spring deflection is outside the
/// small-deformation model.
struct ElasticRange {
  double translation_fraction = 0.2;  ///< of the bar length L
  double rotation = 0.5;              ///< rad
};

/// Parallelogram linkage described by two bar chains with one 6-dof virtual
/// spring each and two passive revolute joints per chain.
///
/// `reference_angle` is the bar angle q0 of the unloaded reference
/// configuration (passive coordinates (q0, -q0) for both chains). Poses are
/// expressed in the frame aligned with the bars at that configuration, so the
/// unloaded pose is (L, 0, 0, 0, 0, 0) for every q0.
struct ParallelogramModel {
  double L = 0.0;
  double d = 0.0;
  Matrix6 Kb = Matrix6::Zero();
  std::array<Matrix6, 2> Ktheta{Matrix6::Zero(), Matrix6::Zero()};
  double reference_angle = 0.0;
  ElasticRange elastic_range{};

  /// Model with Ktheta = Kb for both chains. Validates.
  static ParallelogramModel from_bar(double L, double d, const Matrix6& Kb, double reference_angle = 0.0);

  /// Throws InvalidArgument naming the first violated invariant.
  void validate() const;

  const Matrix6& spring(Chain c) const { return Ktheta[chain_number(c) - 1]; }
  Vector2 reference_passive() const { return {reference_angle, -reference_angle}; }
  Pose unloaded_pose() const;
};

/// Per-chain state: passive coordinates, spring deflections, end-point wrench.
struct ChainState {
  Vector2 q = Vector2::Zero();
  Vector6 theta = Vector6::Zero();
  Vector6 lambda = Vector6::Zero();

  bool out_of_model(const ParallelogramModel& model) const;
};

struct ChainJacobians {
  Matrix6 Jtheta = Matrix6::Zero();
  Matrix62 Jq = Matrix62::Zero();
};

/// Second derivatives of Psi = g(q, theta)^T lambda.
struct ChainHessians {
  Matrix2 Hqq = Matrix2::Zero();
  Matrix26 Hqtheta = Matrix26::Zero();
  Matrix6 Hthetatheta = Matrix6::Zero();
  /// Largest |H - H^T| entry before symmetrization, relative to max |H|.
  double asymmetry = 0.0;
};

/// Hessian finite-difference step (mm and rad).
inline constexpr double kHessianStep = 1e-5;

Transform4 chain_transform(const ParallelogramModel& model, Chain i, const Vector2& q, const Vector6& theta);

Pose chain_pose(const ParallelogramModel& model, Chain i, const Vector2& q, const Vector6& theta);

/// Analytic pose-rate Jacobians by the product rule over the elementary
/// factors.
ChainJacobians chain_jacobians(const ParallelogramModel& model, Chain i, const Vector2& q, const Vector6& theta);

/// Central differences of the analytic Jacobians contracted with lambda,
/// symmetrized.
ChainHessians chain_hessians(const ParallelogramModel& model, Chain i, const Vector2& q, const Vector6& theta,
                             const Vector6& lambda, double step = kHessianStep);

/// Richardson self-check of `chain_hessians`: max entry difference between
/// steps h and h/2, relative to max |H|. Small values mean the step is in the
/// truncation-dominated regime.
double hessian_richardson_error(const ParallelogramModel& model, Chain i, const Vector2& q, const Vector6& theta,
                                const Vector6& lambda, double step = kHessianStep);

}  // namespace vjm
