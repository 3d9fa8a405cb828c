#include "vjm/stiffness.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "vjm/error.hpp"

namespace vjm {

namespace {

double relative_asymmetry(const Matrix6& K) {
  const double scale = K.cwiseAbs().maxCoeff();
  return scale > 0.0 ? (K - K.transpose()).cwiseAbs().maxCoeff() / scale : 0.0;
}

Matrix6 symmetrized(const Matrix6& K) { return 0.5 * (K + K.transpose()); }

struct LoadedSprings {
  ChainJacobians J;
  ChainHessians H;
  Matrix6 Kload;  // K_theta - H_thetatheta
};

LoadedSprings loaded_springs(const ParallelogramModel& model, Chain i, const ChainState& s) {
  LoadedSprings out;
  out.J = chain_jacobians(model, i, s.q, s.theta);
  out.H = chain_hessians(model, i, s.q, s.theta, s.lambda);
  out.Kload = model.spring(i) - out.H.Hthetatheta;
  return out;
}

double min_eigenvalue(const Matrix6& K) {
  return Eigen::SelfAdjointEigenSolver<Matrix6>(K, Eigen::EigenvaluesOnly).eigenvalues().minCoeff();
}

// Smallest eigenvalue of the Lagrangian Hessian in (q, theta) restricted to
// the kernel of the closure Jacobian [J_q J_theta].
double reduced_min_eigenvalue(const LoadedSprings& ls) {
  Matrix8 A;
  A.topLeftCorner<2, 2>() = -ls.H.Hqq;
  A.topRightCorner<2, 6>() = -ls.H.Hqtheta;
  A.bottomLeftCorner<6, 2>() = -ls.H.Hqtheta.transpose();
  A.bottomRightCorner<6, 6>() = ls.Kload;

  Eigen::Matrix<double, 6, 8> J;
  J << ls.J.Jq, ls.J.Jtheta;
  const Eigen::JacobiSVD<Eigen::Matrix<double, 6, 8>> svd(J, Eigen::ComputeFullV);
  const Eigen::Matrix<double, 8, 2> Z = svd.matrixV().rightCols<2>();
  const Eigen::Matrix2d reduced = Z.transpose() * A * Z;
  return Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d>(0.5 * (reduced + reduced.transpose()),
                                                         Eigen::EigenvaluesOnly)
      .eigenvalues()
      .minCoeff();
}

}  // namespace

TangentSystem tangent_system(const ParallelogramModel& model, Chain i, const ChainEquilibrium& eq) {
  const LoadedSprings ls = loaded_springs(model, i, eq.state);
  const double lowest = min_eigenvalue(ls.Kload);
  if (!(lowest > 0.0))
    throw BucklingDetected("chain " + std::to_string(chain_number(i)) +
                               ": K_theta - H_thetatheta is not positive-definite (eigenvalue " +
                               std::to_string(lowest) + ")",
                           lowest);
  const Matrix6 ktheta = ls.Kload.llt().solve(Matrix6::Identity());
  const Eigen::Matrix<double, 6, 2> Hthetaq = ls.H.Hqtheta.transpose();
  const Eigen::Matrix<double, 6, 2> B = ls.J.Jq + ls.J.Jtheta * ktheta * Hthetaq;

  TangentSystem ts;
  ts.matrix.topLeftCorner<6, 6>() = ls.J.Jtheta * ktheta * ls.J.Jtheta.transpose();
  ts.matrix.topRightCorner<6, 2>() = B;
  ts.matrix.bottomLeftCorner<2, 6>() = B.transpose();
  ts.matrix.bottomRightCorner<2, 2>() = ls.H.Hqq + ls.H.Hqtheta * ktheta * Hthetaq;
  ts.condition = equilibrated_condition<8>(ts.matrix);
  return ts;
}

CartesianStiffness chain_stiffness(const ParallelogramModel& model, Chain i, const ChainEquilibrium& eq) {
  if (!eq.converged) throw InvalidArgument("chain stiffness needs a converged equilibrium");
  const TangentSystem ts = tangent_system(model, i, eq);

  // Equilibrate before factoring: the blocks mix compliances (~1e-7) with
  // lever arms (~1e2), so an unscaled LU loses the small entries.
  Eigen::Matrix<double, 8, 1> r = Eigen::Matrix<double, 8, 1>::Ones();
  Matrix8 A = ts.matrix;
  for (int sweep = 0; sweep < 20; ++sweep) {
    Eigen::Matrix<double, 8, 1> s = A.cwiseAbs().rowwise().maxCoeff();
    for (int k = 0; k < 8; ++k) s(k) = s(k) > 0.0 ? 1.0 / std::sqrt(s(k)) : 1.0;
    A = s.asDiagonal() * A * s.asDiagonal();
    r = r.cwiseProduct(s);
  }
  const Eigen::FullPivLU<Matrix8> lu(A);
  if (!lu.isInvertible())
    throw SingularConfiguration("chain " + std::to_string(chain_number(i)) + ": tangent system is singular");
  const Matrix8 inv = r.asDiagonal() * lu.inverse() * r.asDiagonal();

  CartesianStiffness out;
  const Matrix6 K = inv.topLeftCorner<6, 6>();
  out.asymmetry = relative_asymmetry(K);
  out.K = symmetrized(K);
  return out;
}

CartesianStiffness total_stiffness(const CartesianStiffness& K1, const CartesianStiffness& K2) {
  CartesianStiffness out;
  const Matrix6 sum = K1.K + K2.K;
  out.asymmetry = relative_asymmetry(sum);
  out.K = symmetrized(sum);
  return out;
}

CartesianStiffness parallelogram_stiffness(const ParallelogramModel& model, const EquilibriumResult& eq) {
  return total_stiffness(chain_stiffness(model, Chain::First, eq.chain(Chain::First)),
                         chain_stiffness(model, Chain::Second, eq.chain(Chain::Second)));
}

CartesianStiffness analytic_unloaded_stiffness(const Matrix6& Kb, double d, double q) {
  const double C = std::cos(q);
  const double S = std::sin(q);
  const double S2 = std::sin(2.0 * q);
  const double d2 = d * d;

  Matrix6 K = Matrix6::Zero();
  K(0, 0) = Kb(0, 0);
  K(1, 1) = Kb(1, 1);
  K(1, 5) = K(5, 1) = Kb(1, 5);
  K(3, 3) = Kb(3, 3) + d2 * C * C * Kb(1, 1) / 4.0;
  K(3, 5) = K(5, 3) = d2 * S2 * Kb(1, 1) / 8.0;
  K(4, 4) = d2 * C * C * Kb(0, 0) / 4.0;
  K(5, 5) = Kb(5, 5) + d2 * S * S * Kb(1, 1) / 4.0;

  CartesianStiffness out;
  out.K = 2.0 * K;
  return out;
}

RankReport rank_analysis(const CartesianStiffness& K, double rel_tol) {
  const Eigen::JacobiSVD<Matrix6> svd(K.K, Eigen::ComputeFullV);
  RankReport report;
  report.singular_values = svd.singularValues();
  const double sigma_max = report.singular_values(0);
  for (int k = 0; k < 6; ++k) {
    if (sigma_max > 0.0 && report.singular_values(k) > rel_tol * sigma_max)
      ++report.rank;
    else
      report.null_basis.push_back(svd.matrixV().col(k));
  }
  return report;
}

StabilityReport stability(const ParallelogramModel& model, const EquilibriumResult& eq) {
  StabilityReport report{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  for (Chain c : kChains) {
    const LoadedSprings ls = loaded_springs(model, c, eq.chain(c).state);
    report.spring_min_eig = std::min(report.spring_min_eig, min_eigenvalue(ls.Kload));
    report.reduced_min_eig = std::min(report.reduced_min_eig, reduced_min_eigenvalue(ls));
  }
  return report;
}

double buckling_indicator(const ParallelogramModel& model, const EquilibriumResult& eq) {
  return stability(model, eq).reduced_min_eig;
}

PseudoRigidModel pseudo_rigid_reduction(const CartesianStiffness& Kp, double rel_tol) {
  if (relative_asymmetry(Kp.K) > 1e-9) throw InvalidArgument("pseudo-rigid reduction needs a symmetric matrix");
  const Eigen::SelfAdjointEigenSolver<Matrix6> eig(symmetrized(Kp.K));
  const Vector6& w = eig.eigenvalues();  // ascending
  const double wmax = w.cwiseAbs().maxCoeff();
  if (wmax == 0.0) throw RankMismatch("pseudo-rigid reduction needs rank 5, got rank 0");
  if (w(0) < -rel_tol * wmax)
    throw InvalidArgument("pseudo-rigid reduction needs a positive-semidefinite matrix (eigenvalue " +
                          std::to_string(w(0)) + ")");
  const int rank = static_cast<int>((w.array() > rel_tol * wmax).count());
  if (rank != 5) throw RankMismatch("pseudo-rigid reduction needs rank 5, got rank " + std::to_string(rank));

  PseudoRigidModel out;
  out.free_axis = eig.eigenvectors().col(0);
  for (int k = 0; k < 5; ++k) out.spring_axes.col(k) = eig.eigenvectors().col(5 - k);
  const Eigen::Matrix<double, 5, 5> P = out.spring_axes.transpose() * Kp.K * out.spring_axes;
  out.spring_matrix = 0.5 * (P + P.transpose());
  return out;
}

}  // namespace vjm
