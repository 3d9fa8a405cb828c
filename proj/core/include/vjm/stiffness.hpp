#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/LU>

#include "vjm/equilibrium.hpp"

namespace vjm {

using Matrix8 = Eigen::Matrix<double, 8, 8>;

/// 6x6 Cartesian stiffness in pose units (N/mm, N, N*mm/rad blocks).
struct CartesianStiffness {
  Matrix6 K = Matrix6::Zero();
  /// max |K - K^T| / max |K| before symmetrization; zero for exact builds.
  double asymmetry = 0.0;
};

struct RankReport {
  int rank = 0;
  Vector6 singular_values = Vector6::Zero();  ///< descending
  std::vector<Vector6> null_basis;
};

/// Five coupled virtual springs plus one free direction.
struct PseudoRigidModel {
  Eigen::Matrix<double, 6, 5> spring_axes = Eigen::Matrix<double, 6, 5>::Zero();
  Eigen::Matrix<double, 5, 5> spring_matrix = Eigen::Matrix<double, 5, 5>::Zero();
  Vector6 free_axis = Vector6::Zero();

  Matrix6 reassemble() const { return spring_axes * spring_matrix * spring_axes.transpose(); }
};

/// The 8x8 linearized system mapping (d lambda, d q) to (d t, 0) for one chain.
struct TangentSystem {
  Matrix8 matrix = Matrix8::Zero();
  /// 1-norm condition estimate after symmetric diagonal equilibration.
  double condition = 0.0;
};

/// Symmetric diagonal equilibration followed by a 1-norm condition estimate.
/// Returns +inf for a numerically singular matrix.
template <int N>
double equilibrated_condition(const Eigen::Matrix<double, N, N>& M) {
  using Mat = Eigen::Matrix<double, N, N>;
  using Vec = Eigen::Matrix<double, N, 1>;
  Mat A = M;
  for (int sweep = 0; sweep < 20; ++sweep) {
    Vec r = A.cwiseAbs().rowwise().maxCoeff();
    for (int k = 0; k < N; ++k) r(k) = r(k) > 0.0 ? 1.0 / std::sqrt(r(k)) : 1.0;
    A = r.asDiagonal() * A * r.asDiagonal();
  }
  const Eigen::FullPivLU<Mat> lu(A);
  if (!lu.isInvertible()) return std::numeric_limits<double>::infinity();
  const Mat inv = lu.inverse();
  const auto norm1 = [](const Mat& X) { return X.cwiseAbs().colwise().sum().maxCoeff(); };
  return norm1(A) * norm1(inv);
}

/// Builds the linearized system at a converged chain equilibrium using
/// k_theta = (K_theta - H_thetatheta)^-1. Throws BucklingDetected if
/// K_theta - H_thetatheta is not positive-definite.
TangentSystem tangent_system(const ParallelogramModel& model, Chain i, const ChainEquilibrium& eq);

/// Top-left 6x6 block of the inverse of the tangent system, symmetrized.
CartesianStiffness chain_stiffness(const ParallelogramModel& model, Chain i, const ChainEquilibrium& eq);

CartesianStiffness total_stiffness(const CartesianStiffness& K1, const CartesianStiffness& K2);

/// K_c1 + K_c2 at a converged two-chain equilibrium.
CartesianStiffness parallelogram_stiffness(const ParallelogramModel& model, const EquilibriumResult& eq);

/// Closed-form stiffness of the unloaded linkage at bar angle q.
CartesianStiffness analytic_unloaded_stiffness(const Matrix6& Kb, double d, double q);

RankReport rank_analysis(const CartesianStiffness& K, double rel_tol = 1e-10);

struct StabilityReport {
  /// min over chains of the smallest eigenvalue of the energy Hessian
  /// restricted to the tangent space of the closure constraint.
  double reduced_min_eig = 0.0;
  /// min over chains of the smallest eigenvalue of K_theta - H_thetatheta.
  double spring_min_eig = 0.0;
};

StabilityReport stability(const ParallelogramModel& model, const EquilibriumResult& eq);

/// Positive while the equilibrium is stable under displacement control; a
/// zero crossing marks geometric buckling. Equal to
/// `stability(model, eq).reduced_min_eig`.
double buckling_indicator(const ParallelogramModel& model, const EquilibriumResult& eq);

/// Eigen-split of a rank-5 PSD stiffness. Throws RankMismatch otherwise.
PseudoRigidModel pseudo_rigid_reduction(const CartesianStiffness& Kp, double rel_tol = 1e-10);

}  // namespace vjm
