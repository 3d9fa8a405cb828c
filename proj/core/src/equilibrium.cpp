#include "vjm/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/LU>

#include "vjm/error.hpp"
#include "vjm/stiffness.hpp"

namespace vjm {

namespace {

using Vector8 = Eigen::Matrix<double, 8, 1>;

EquilibriumResiduals residuals_at(const ParallelogramModel& model, Chain i, const Vector6& target,
                                  const ChainState& s, const ChainJacobians& J) {
  EquilibriumResiduals r;
  r.spring = (J.Jtheta.transpose() * s.lambda - model.spring(i) * s.theta).cwiseAbs().maxCoeff();
  r.passive = (J.Jq.transpose() * s.lambda).cwiseAbs().maxCoeff();
  r.closure = (target - chain_pose(model, i, s.q, s.theta).vector()).cwiseAbs().maxCoeff();
  return r;
}

// Rounding level of each residual block: the magnitudes of the terms that
// cancel at equilibrium, times a small multiple of machine epsilon.
EquilibriumResiduals rounding_floor(const ParallelogramModel& model, Chain i, const Vector6& target,
                                    const ChainState& s, const ChainJacobians& J) {
  constexpr double kUlps = 64.0 * std::numeric_limits<double>::epsilon();
  const Vector6 lam = s.lambda.cwiseAbs();
  EquilibriumResiduals f;
  f.spring = kUlps * std::max((J.Jtheta.cwiseAbs().transpose() * lam).maxCoeff(),
                              (model.spring(i).cwiseAbs() * s.theta.cwiseAbs()).maxCoeff());
  f.passive = kUlps * (J.Jq.cwiseAbs().transpose() * lam).maxCoeff();
  f.closure = kUlps * target.cwiseAbs().maxCoeff();
  return f;
}

bool within_tolerance(const EquilibriumResiduals& r, const EquilibriumResiduals& floor, double tol) {
  return r.spring <= std::max(tol, floor.spring) && r.passive <= std::max(tol, floor.passive) &&
         r.closure <= std::max(tol, floor.closure);
}

void check_workspace(const ParallelogramModel& model, const Pose& target) {
  if (!target.p.allFinite() || !target.phi.allFinite()) throw InvalidArgument("target pose must be finite");
  const double reach = model.L * (1.0 + model.elastic_range.translation_fraction);
  if (!(target.p.x() > 0.0 && target.p.x() < reach))
    throw OutOfRange("target axial coordinate " + std::to_string(target.p.x()) + " mm is outside (0, " +
                     std::to_string(reach) + ")");
}

}  // namespace

EquilibriumResiduals equilibrium_residuals(const ParallelogramModel& model, Chain i, const Pose& target,
                                           const ChainState& state) {
  return residuals_at(model, i, target.vector(), state, chain_jacobians(model, i, state.q, state.theta));
}

ChainEquilibrium solve_chain_equilibrium(const ParallelogramModel& model, Chain i, const Pose& target,
                                         const ChainState& initial, const SolverOptions& options) {
  if (!(options.tolerance > 0.0)) throw InvalidArgument("tolerance must be positive");
  if (initial.out_of_model(model)) throw OutOfRange("initial chain state is outside the elastic range");

  const Vector6 t = target.vector();
  const Matrix6& K = model.spring(i);
  const Eigen::LLT<Matrix6> Kllt(K);
  const Matrix6 Kinv = Kllt.solve(Matrix6::Identity());

  ChainEquilibrium out;
  out.state = initial;
  double previous = std::numeric_limits<double>::infinity();
  int growth = 0;

  for (int it = 1; it <= options.max_iterations; ++it) {
    const ChainState& s = out.state;
    const ChainJacobians J = chain_jacobians(model, i, s.q, s.theta);
    const Vector6 g = chain_pose(model, i, s.q, s.theta).vector();

    Matrix8 M = Matrix8::Zero();
    M.topLeftCorner<6, 6>() = J.Jtheta * Kinv * J.Jtheta.transpose();
    M.topRightCorner<6, 2>() = J.Jq;
    M.bottomLeftCorner<2, 6>() = J.Jq.transpose();
    if (equilibrated_condition<8>(M) > options.singular_condition)
      throw SingularConfiguration("chain " + std::to_string(chain_number(i)) +
                                  ": equilibrium system is singular (passive-joint degeneracy)");

    Vector8 rhs = Vector8::Zero();
    rhs.head<6>() = t - g + J.Jq * s.q + J.Jtheta * s.theta;
    const Vector8 sol = M.fullPivLu().solve(rhs);

    ChainState next;
    next.lambda = sol.head<6>();
    next.q = sol.tail<2>();
    next.theta = Kinv * J.Jtheta.transpose() * next.lambda;
    out.iterations = it;

    if (next.out_of_model(model)) {
      out.converged = false;
      return out;
    }
    out.state = next;

    const ChainJacobians Jn = chain_jacobians(model, i, out.state.q, out.state.theta);
    const EquilibriumResiduals res = residuals_at(model, i, t, out.state, Jn);
    const double r = res.max();
    out.residual = r;
    if (!std::isfinite(r)) break;
    if (within_tolerance(res, rounding_floor(model, i, t, out.state, Jn), options.tolerance)) {
      out.converged = true;
      return out;
    }
    growth = r > previous ? growth + 1 : 0;
    if (growth >= options.divergence_window) break;
    previous = r;
  }
  out.converged = false;
  return out;
}

EquilibriumResult solve_parallelogram(const ParallelogramModel& model, const Pose& target,
                                      const std::optional<EquilibriumResult>& warm_start,
                                      const SolverOptions& options) {
  check_workspace(model, target);
  EquilibriumResult result;
  result.target = target;
  for (Chain c : kChains) {
    ChainState initial;
    if (warm_start) {
      initial = warm_start->chain(c).state;
    } else {
      initial.q = model.reference_passive();
    }
    result.chains[chain_number(c) - 1] = solve_chain_equilibrium(model, c, target, initial, options);
  }
  result.total_wrench = result.chains[0].state.lambda + result.chains[1].state.lambda;
  return result;
}

namespace {

SweepRecord make_record(const ParallelogramModel& model, const Vector6& direction, double s,
                        const EquilibriumResult& eq) {
  SweepRecord rec;
  rec.displacement = s;
  rec.full_wrench = eq.total_wrench;
  rec.wrench_component = direction.dot(eq.total_wrench);
  rec.converged = eq.converged();
  if (rec.converged) {
    const StabilityReport st = stability(model, eq);
    rec.min_eig_reduced = st.reduced_min_eig;
    rec.spring_min_eig = st.spring_min_eig;
    rec.buckled = rec.min_eig_reduced <= 0.0;
  } else {
    rec.min_eig_reduced = std::numeric_limits<double>::quiet_NaN();
    rec.spring_min_eig = std::numeric_limits<double>::quiet_NaN();
  }
  return rec;
}

}  // namespace

std::vector<SweepRecord> force_deflection_sweep(const ParallelogramModel& model, const Vector6& direction,
                                                double max_displacement, int steps, const SweepOptions& options) {
  if (steps < 2) throw InvalidArgument("sweep needs at least 2 steps");
  if (!direction.allFinite() || std::abs(direction.norm() - 1.0) > 1e-9)
    throw InvalidArgument("sweep direction must be a unit 6-vector");
  if (!std::isfinite(max_displacement)) throw InvalidArgument("sweep length must be finite");

  const Vector6 t0 = model.unloaded_pose().vector();
  const auto solve_at = [&](double s, const std::optional<EquilibriumResult>& warm) {
    return solve_parallelogram(model, Pose::from_vector(t0 + s * direction), warm, options.solver);
  };

  std::vector<SweepRecord> records;
  EquilibriumResult eq = solve_at(0.0, std::nullopt);
  records.push_back(make_record(model, direction, 0.0, eq));
  if (max_displacement == 0.0 || !records.back().converged || records.back().buckled) return records;

  for (int k = 1; k <= steps; ++k) {
    const double s = max_displacement * static_cast<double>(k) / static_cast<double>(steps);
    EquilibriumResult next = solve_at(s, eq);
    SweepRecord rec = make_record(model, direction, s, next);
    if (!rec.converged) {
      records.push_back(rec);
      break;
    }
    if (rec.buckled && options.refine_crossing) {
      // Bracket [lo, hi] with a stable lo and a buckled hi.
      double lo = records.back().displacement;
      double hi = s;
      EquilibriumResult stable = eq;
      for (int b = 0; b < 200 && std::abs(hi - lo) > 1e-13 * std::abs(max_displacement); ++b) {
        const double mid = 0.5 * (lo + hi);
        EquilibriumResult probe = solve_at(mid, stable);
        SweepRecord pr = make_record(model, direction, mid, probe);
        if (!pr.converged) break;
        if (pr.buckled) {
          hi = mid;
          rec = pr;
        } else {
          lo = mid;
          stable = probe;
        }
      }
    }
    records.push_back(rec);
    if (rec.buckled) break;
    eq = std::move(next);
  }
  return records;
}

}  // namespace vjm
