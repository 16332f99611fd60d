#pragma once

// Cheap-talk version of delegation: the agent recommends an action and the
// principal, updating on the recommendation, decides whether to follow it.

#include <cstddef>
#include <vector>

#include "ridel/core.hpp"

namespace ridel {

/// Posterior of the principal after each on-path recommendation.
struct PosteriorTable {
  std::vector<std::size_t> recommendations;
  std::vector<double> probabilities;  // recommendation probabilities under mu_p
  std::vector<Belief> posteriors;
};

PosteriorTable principal_posterior(const Belief& mu_p, const DecisionRule& pi_agent);

struct ObedienceResult {
  std::vector<std::size_t> recommendations;  // consideration set of the optimal agent
  std::vector<bool> obedient;
};

/// For the optimal agent belief mu_star under state-matching payoffs, checks
/// e^{1/lambda} mu*_i >= max_j mu*_j for every recommendation i. This makes
/// a_i the principal's best reply among recommended actions.
ObedienceResult obedience_check(const Belief& mu_star, double lambda);

/// Builds the optimal delegation outcome for mu_p and checks directly that the
/// principal's posterior best reply to every on-path recommendation is that
/// action, ties going to the recommendation.
bool verify_communication_equilibrium(const Belief& mu_p, double lambda);

}  // namespace ridel
