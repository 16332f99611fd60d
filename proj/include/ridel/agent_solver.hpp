#pragma once

// The agent's rational-inattention problem: RI-logit choice rule, fixed-point
// solver with a KKT certificate, closed forms for the binary state-matching
// case and a grid-search oracle.

#include <cstddef>

#include "ridel/core.hpp"

namespace ridel {

struct SolverConfig {
  long max_iters = 100000;
  /// Target sup-norm of the optimality residual.
  double fp_tolerance = 1e-10;
  /// Unconditional probabilities below this are snapped to zero after convergence.
  double prune_threshold = 1e-9;
  /// Periodically try Newton's method on the apparent support; the multiplicative
  /// update alone is slow when an action sits at the edge of the consideration set.
  bool newton_polish = true;
};

struct BinaryPrecisions {
  double p_Rr;
  double p_Ll;
  bool interior;
};

/// pi(a_i | w_j) = beta_i e^{u_ij / lambda} / sum_k beta_k e^{u_kj / lambda}.
DecisionRule conditional_from_unconditional(const ChoiceDistribution& beta, const RIInstance& inst);

/// Multiplicative fixed point from the uniform start. Throws NonConvergence if
/// the residual has not reached cfg.fp_tolerance after cfg.max_iters updates.
AgentSolution solve_agent(const RIInstance& inst, const SolverConfig& cfg = {});

/// Largest violation of the first-order system: |D_i - 1| on the consideration
/// set of beta, max(0, D_i - 1) off it, where D_i = sum_j mu_j e^{u_ij/lambda} / Z_j.
double optimality_residual(const ChoiceDistribution& beta, const RIInstance& inst);

/// Best point of the simplex grid {beta : beta_i in step * N}. Throws
/// InvalidInput when the grid would exceed max_grid_points.
AgentSolution brute_force_agent(const RIInstance& inst, double grid_step,
                                std::size_t max_grid_points = 20'000'000);

/// Closed-form precisions (pi(R|r), pi(L|l)) for two states with state-matching payoffs.
BinaryPrecisions binary_precisions(double mu_r, double lambda);

/// Willingness to pay for perfect information at cost c in the two-state
/// example with a fixed information technology.
double pandora_wtp(double mu_r, double c);

}  // namespace ridel
