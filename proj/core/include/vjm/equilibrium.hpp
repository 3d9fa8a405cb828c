#pragma once

#include <array>
#include <optional>
#include <vector>

#include "vjm/linkage.hpp"

namespace vjm {

struct SolverOptions {
  /// Max-norm bound on each residual block, in the block's own units. A block
  /// already at the rounding level of its terms (heavy loads) also passes.
  double tolerance = 1e-9;
  int max_iterations = 100;
  double singular_condition = 1e12;  ///< condition estimate of the 8x8 system treated as singular
  int divergence_window = 5;       ///< consecutive residual increases that abort the iteration
};

/// The three blocks of the static-equilibrium conditions for one chain.
struct EquilibriumResiduals {
  double spring = 0.0;   ///< ||J_theta^T lambda - K_theta theta||_inf
  double passive = 0.0;  ///< ||J_q^T lambda||_inf
  double closure = 0.0;  ///< ||t - g(q, theta)||_inf

  double max() const { return std::max({spring, passive, closure}); }
};

struct ChainEquilibrium {
  ChainState state;
  double residual = 0.0;
  int iterations = 0;
  bool converged = false;
};

struct EquilibriumResult {
  std::array<ChainEquilibrium, 2> chains;
  Vector6 total_wrench = Vector6::Zero();  ///< lambda_1 + lambda_2
  Pose target;

  const ChainEquilibrium& chain(Chain c) const { return chains[chain_number(c) - 1]; }
  bool converged() const { return chains[0].converged && chains[1].converged; }
};

struct SweepRecord {
  double displacement = 0.0;      ///< along the sweep direction [mm or rad]
  double wrench_component = 0.0;  ///< direction^T * total wrench
  Vector6 full_wrench = Vector6::Zero();
  double min_eig_reduced = 0.0;   ///< buckling indicator, see `buckling_indicator`
  double spring_min_eig = 0.0;    ///< min eigenvalue of K_theta - H_thetatheta (diagnostic)
  bool converged = false;
  bool buckled = false;
};

EquilibriumResiduals equilibrium_residuals(const ParallelogramModel& model, Chain i, const Pose& target,
                                           const ChainState& state);

/// Fixed-point iteration on the linearized closure: each step solves
///
///   [ J_theta K^-1 J_theta^T   J_q ] [lambda']   [ t - g + J_q q + J_theta theta ]
///   [ J_q^T                     0  ] [  q'   ] = [               0               ]
///
/// then sets theta' = K^-1 J_theta^T lambda'. Stops when the residual max-norm
/// drops below the tolerance. Non-convergence is reported through the result;
/// only a singular 8x8 system throws (SingularConfiguration).
ChainEquilibrium solve_chain_equilibrium(const ParallelogramModel& model, Chain i, const Pose& target,
                                         const ChainState& initial, const SolverOptions& options = {});

/// Solves both chains for a common end-point pose, warm-started from
/// `warm_start` when given, otherwise from the unloaded reference state.
EquilibriumResult solve_parallelogram(const ParallelogramModel& model, const Pose& target,
                                      const std::optional<EquilibriumResult>& warm_start = std::nullopt,
                                      const SolverOptions& options = {});

struct SweepOptions {
  SolverOptions solver{};
  /// Bisect the last step when the indicator crosses zero so the buckled
  /// record sits at the located critical displacement.
  bool refine_crossing = true;
};

/// Continuation along t0 + s * direction, s = max_displacement * k / steps for
/// k = 0..steps, each equilibrium warm-started from the previous one. Stops at
/// the first non-converged step or when the buckling indicator reaches zero;
/// the last record then carries the flag. A zero `max_displacement` yields a
/// single record.
std::vector<SweepRecord> force_deflection_sweep(const ParallelogramModel& model, const Vector6& direction,
                                                double max_displacement, int steps, const SweepOptions& options = {});

}  // namespace vjm
