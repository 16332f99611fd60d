#pragma once

// The principal's choice of agent under state-matching payoffs: optimal and
// aligned unconditional probabilities, the optimal agent belief, and inversion
// of choice probabilities back to a belief.

#include <cstddef>
#include <optional>

#include "ridel/agent_solver.hpp"
#include "ridel/core.hpp"

namespace ridel {

/// e^{1/lambda} - 1.
double delta(double lambda);

struct DelegationReport {
  Belief mu_p;
  double lambda;
  Belief mu_star;
  ChoiceDistribution beta_star;
  DecisionRule pi_star;
  std::size_t K_star;
  std::size_t K_aligned;
  double value_optimal;
  double value_aligned;
  double value_no_learning;
  /// max |beta*_i - beta_i| between the closed form and solve_agent at mu_star.
  double crosscheck_error;
};

/// Choice probabilities maximizing the principal's payoff over all agent beliefs.
ChoiceDistribution optimal_unconditional(const Belief& mu_p, double lambda);

/// The agent's own optimal choice probabilities under state-matching payoffs.
ChoiceDistribution aligned_unconditional(const Belief& mu, double lambda);

/// Principal payoff sum_j mu_p_j beta_j e^{1/lambda} / (1 + delta beta_j) when
/// the agent follows the RI-logit rule for beta.
double principal_value_statematching(const Belief& mu_p, const ChoiceDistribution& beta, double lambda);

/// (1 + delta) / (K + delta) * sum_{i in C} mu_p_i. Equals the value above when
/// beta is the agent's own optimal response to mu_p.
double aligned_value_identity(const Belief& mu_p, const ChoiceDistribution& beta, double lambda);

/// sqrt(mu_p) / (sqrt(mu_p) + sqrt(1 - mu_p)).
double optimal_belief_binary(double mu_p_r);

/// mu*_i proportional to sqrt(mu_p_i).
Belief optimal_belief_general(const Belief& mu_p);

struct ConsiderationSizes {
  std::size_t aligned;
  std::size_t optimal;
};
ConsiderationSizes consideration_sizes(const Belief& mu_p, double lambda);

/// A prior under which beta is optimal for the agent, or nullopt if none exists.
/// State-matching payoffs use the closed form (zero mass outside C(beta)) and
/// are checked by re-solving; other payoffs go through the linear program.
/// Throws NonConvergence if the closed form fails its round trip.
std::optional<Belief> invert_beta_to_belief(const ChoiceDistribution& beta, const PayoffMatrix& u, double lambda);

DelegationReport delegation_report(const Belief& mu_p, double lambda, const SolverConfig& cfg = {});

/// Principal payoff in the two-state case when the agent holds belief mu_agent.
double principal_value_binary(double mu_agent, double mu_p_r, double lambda);

/// The same payoff at the optimal agent belief.
double optimal_delegation_value_binary(double mu_p_r, double lambda);

struct PandoraDelegation {
  double agent_mu;
  /// The agent learns iff its belief lies in [learn_lo, learn_hi].
  double learn_lo;
  double learn_hi;
};
PandoraDelegation pandora_optimal_agent(double mu_p_r, double c);

/// Exact maximizer of the principal's payoff over the simplex grid with the given step.
ChoiceDistribution relaxed_grid_optimum(const Belief& mu_p, double lambda, double grid_step);

}  // namespace ridel
