#include "ridel/communication.hpp"

#include <algorithm>
#include <cmath>

#include "ridel/agent_solver.hpp"
#include "ridel/delegation.hpp"
#include "ridel/errors.hpp"

namespace ridel {

PosteriorTable principal_posterior(const Belief& mu_p, const DecisionRule& pi_agent) {
  if (mu_p.size() != pi_agent.n_states()) throw InvalidInput("belief and decision rule disagree on states");
  PosteriorTable t;
  const std::size_t ns = pi_agent.n_states();
  for (std::size_t i = 0; i < pi_agent.n_actions(); ++i) {
    std::vector<double> joint(ns);
    double p = 0.0;
    for (std::size_t j = 0; j < ns; ++j) {
      joint[j] = mu_p[j] * pi_agent(i, j);
      p += joint[j];
    }
    if (!(p > 0.0)) continue;
    for (double& v : joint) v /= p;
    t.recommendations.push_back(i);
    t.probabilities.push_back(p);
    t.posteriors.emplace_back(std::move(joint));
  }
  return t;
}

ObedienceResult obedience_check(const Belief& mu_star, double lambda) {
  // The principal prior behind mu_star is proportional to its square.
  std::vector<double> sq(mu_star.size());
  double s = 0.0;
  for (std::size_t i = 0; i < sq.size(); ++i) {
    sq[i] = mu_star[i] * mu_star[i];
    s += sq[i];
  }
  for (double& v : sq) v /= s;
  const auto beta = optimal_unconditional(Belief(std::move(sq)), lambda);
  const double top = *std::max_element(mu_star.values().begin(), mu_star.values().end());
  const double e = std::exp(1.0 / lambda);
  ObedienceResult r;
  for (std::size_t i : beta.consideration_set()) {
    r.recommendations.push_back(i);
    r.obedient.push_back(e * mu_star[i] >= top);
  }
  return r;
}

bool verify_communication_equilibrium(const Belief& mu_p, double lambda) {
  const auto beta = optimal_unconditional(mu_p, lambda);
  const std::size_t n = mu_p.size();
  const RIInstance at_star(optimal_belief_general(mu_p), PayoffMatrix::state_matching(n), lambda);
  const auto table = principal_posterior(mu_p, conditional_from_unconditional(beta, at_star));
  for (std::size_t k = 0; k < table.recommendations.size(); ++k) {
    const std::size_t rec = table.recommendations[k];
    const auto& post = table.posteriors[k];
    // Under state matching, action a_j pays the posterior probability of w_j.
    const double best = *std::max_element(post.values().begin(), post.values().end());
    if (post[rec] < best * (1.0 - 1e-12)) return false;
  }
  return true;
}

}  // namespace ridel
